//! Oracles that never touch the Lambert W function: integer searches and
//! bisections on the Shannon spectral efficiency of a single hop.

#![allow(dead_code)]

use std::path::PathBuf;

use thzplan::linkbudget::{linear_to_db, spectral_efficiency};
use thzplan::{AbsorptionSpectrum, Branch, PlanProblem, Scenario, SpectrumSet};

pub const SEARCH_LIMIT: u64 = 1_000_000_000_000_000;

/// Bundled fixture path; also resolves when this module is shared with the
/// command-line crate's tests.
pub fn fixture(name: &str) -> PathBuf {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let core = if manifest.join("fixtures").is_dir() {
        manifest
    } else {
        manifest.join("../core")
    };
    core.join("fixtures").join(name)
}

pub fn load_fixture(name: &str) -> AbsorptionSpectrum<f64> {
    let file = std::fs::File::open(fixture(name)).expect("fixture present");
    AbsorptionSpectrum::load_with_metadata(file, 60.0, 25.0).expect("fixture parses")
}

pub fn fixture_set() -> SpectrumSet<f64> {
    SpectrumSet::new(vec![
        load_fixture("synthetic_rho60.csv"),
        load_fixture("synthetic_rho80.csv"),
    ])
    .unwrap()
}

/// Smallest `n >= 1` with `ok(n)`, assuming `ok` is monotone.
pub fn smallest(ok: impl Fn(u64) -> bool) -> Option<u64> {
    let mut hi = 1;
    while !ok(hi) {
        if hi >= SEARCH_LIMIT {
            return None;
        }
        hi *= 2;
    }
    let mut lo = hi / 2;
    // ok(hi) holds; ok(lo) fails unless lo == 0
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

fn se_at(scenario: &Scenario<f64>, power_dbm: f64, distance_m: f64) -> f64 {
    spectral_efficiency(power_dbm, &scenario.radio, &scenario.hop(distance_m)).unwrap()
}

/// Edge spectral efficiency of a linear room split among `n` APs.
pub fn room_se(problem: &PlanProblem<f64>, n: u64) -> f64 {
    let s = &problem.scenario;
    se_at(
        s,
        s.radio.total_power_dbm - linear_to_db(n as f64),
        problem.room_length_m / (2.0 * n as f64),
    )
}

pub fn ap_count(problem: &PlanProblem<f64>) -> Option<u64> {
    let target = problem.scenario.target_se;
    smallest(|n| room_se(problem, n) >= target)
}

pub fn repeater_se(scenario: &Scenario<f64>, ap_count: u64, cell_radius_m: f64, m: u64) -> f64 {
    let power = scenario.radio.total_power_dbm - linear_to_db(ap_count as f64 / 2.0);
    se_at(scenario, power, 2.0 * cell_radius_m / m as f64)
}

pub fn repeaters(scenario: &Scenario<f64>, ap_count: u64, cell_radius_m: f64) -> Option<u64> {
    let target = 2.0 * scenario.target_se;
    smallest(|m| repeater_se(scenario, ap_count, cell_radius_m, m) >= target)
}

/// Root of a decreasing `f` by bisection in log space.
pub fn decreasing_root(f: impl Fn(f64) -> f64) -> f64 {
    let (mut lo, mut hi) = (1e-12, 1e12);
    assert!(f(lo) > 0.0 && f(hi) < 0.0, "no sign change");
    for _ in 0..400 {
        let mid = (lo * hi).sqrt();
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo * hi).sqrt()
}

/// Largest cell radius at which `ap_count` APs still meet the target.
pub fn radius(scenario: &Scenario<f64>, ap_count: u64) -> f64 {
    let power = scenario.radio.total_power_dbm - linear_to_db(ap_count as f64);
    decreasing_root(|r| se_at(scenario, power, r) - scenario.target_se)
}

/// Longest linear room `ap_count` APs can cover.
pub fn room_length(scenario: &Scenario<f64>, ap_count: u64) -> f64 {
    2.0 * ap_count as f64 * radius(scenario, ap_count)
}

/// Solves `w e^w = x` on the requested branch by bisection.
pub fn lambert(x: f64, branch: Branch) -> f64 {
    let f = |w: f64| w * w.exp() - x;
    let (mut lo, mut hi) = match branch {
        Branch::Principal => (-1.0, x.max(1.0)),
        Branch::NegativeOne => (-800.0, -1.0),
    };
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        // principal: f increasing on [-1, inf); lower: f decreasing on (-inf, -1]
        let below = match branch {
            Branch::Principal => f(mid) < 0.0,
            Branch::NegativeOne => f(mid) > 0.0,
        };
        if below {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}
