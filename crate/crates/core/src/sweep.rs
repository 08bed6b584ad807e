//! Parameter sweeps and the AP-count matrix over reference sub-channels.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::SpectrumSet;
use crate::error::{Error, Result};
use crate::linkbudget::RadioConfig;
use crate::optimizer::{
    optimal_ap_count, plan_with_ap_count, radius_equation, radius_increase, repeater_count,
    repeater_equation, room_length_equation, PlanProblem, PlanResult, Scenario,
};

/// Centres of the ten reference sub-channels, Hz.
pub const REFERENCE_CARRIERS_HZ: [f64; 10] = [
    0.32e12, 1.51e12, 2.52e12, 3.42e12, 4.91e12, 5.72e12, 6.57e12, 7.19e12, 8.83e12, 9.57e12,
];

/// Spectral-efficiency targets of the AP-count matrix, bit/s/Hz.
pub const REFERENCE_SE_LEVELS: [f64; 4] = [2.0, 1.0, 0.5, 0.1];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    BeamwidthDeg,
    HumidityPct,
    FrequencyHz,
    SpectralEfficiency,
    ApCount,
    RoomLengthM,
}

impl SweepVariable {
    pub const ALL: [SweepVariable; 6] = [
        SweepVariable::BeamwidthDeg,
        SweepVariable::HumidityPct,
        SweepVariable::FrequencyHz,
        SweepVariable::SpectralEfficiency,
        SweepVariable::ApCount,
        SweepVariable::RoomLengthM,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::BeamwidthDeg => "beamwidth_deg",
            SweepVariable::HumidityPct => "humidity_pct",
            SweepVariable::FrequencyHz => "frequency_hz",
            SweepVariable::SpectralEfficiency => "spectral_efficiency",
            SweepVariable::ApCount => "ap_count",
            SweepVariable::RoomLengthM => "room_length_m",
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Self::ALL.iter().map(|v| v.name()).collect();
                Error::invalid(
                    "variable",
                    format!("`{s}` is not one of {}", names.join(", ")),
                )
            })
    }
}

/// Every input of a plan other than the absorption data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Baseline {
    pub radio: RadioConfig<f64>,
    pub carrier_hz: f64,
    pub humidity_pct: f64,
    pub room_length_m: f64,
    pub target_se: f64,
    /// Forces the AP count instead of optimizing it.
    pub ap_count: Option<u64>,
}

impl Default for Baseline {
    fn default() -> Self {
        Baseline {
            radio: RadioConfig::baseline(),
            carrier_hz: REFERENCE_CARRIERS_HZ[0],
            humidity_pct: 60.0,
            room_length_m: 10.0,
            target_se: 0.1,
            ap_count: None,
        }
    }
}

impl Baseline {
    pub fn scenario(&self, spectra: &SpectrumSet<f64>) -> Result<Scenario<f64>> {
        let scenario = Scenario {
            radio: self.radio,
            carrier_hz: self.carrier_hz,
            absorption_per_m: spectra.absorption_at(self.carrier_hz, self.humidity_pct)?,
            target_se: self.target_se,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn problem(&self, spectra: &SpectrumSet<f64>) -> Result<PlanProblem<f64>> {
        Ok(PlanProblem {
            scenario: self.scenario(spectra)?,
            room_length_m: self.room_length_m,
        })
    }

    /// Optimal plan, or the plan for the forced AP count.
    pub fn plan(&self, spectra: &SpectrumSet<f64>) -> Result<PlanResult<f64>> {
        let problem = self.problem(spectra)?;
        match self.ap_count {
            Some(n) => plan_with_ap_count(&problem, n),
            None => optimal_ap_count(&problem),
        }
    }

    fn with(mut self, variable: SweepVariable, value: f64) -> Result<Self> {
        match variable {
            SweepVariable::BeamwidthDeg => self.radio.beamwidth_deg = value,
            SweepVariable::HumidityPct => self.humidity_pct = value,
            SweepVariable::FrequencyHz => self.carrier_hz = value,
            SweepVariable::SpectralEfficiency => self.target_se = value,
            SweepVariable::RoomLengthM => self.room_length_m = value,
            SweepVariable::ApCount => {
                if !(value >= 1.0 && value.fract() == 0.0 && value <= u64::MAX as f64) {
                    return Err(Error::invalid(
                        "ap_count",
                        format!("{value} is not a positive integer"),
                    ));
                }
                self.ap_count = Some(value as u64);
            }
        }
        Ok(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::invalid(
                "steps",
                format!("need at least 2, got {}", self.steps),
            ));
        }
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::invalid("range", "endpoints must be finite"));
        }
        if self.variable == SweepVariable::ApCount
            && (self.start.fract() != 0.0 || self.stop.fract() != 0.0)
        {
            return Err(Error::invalid(
                "range",
                "ap_count endpoints must be integers",
            ));
        }
        Ok(())
    }

    /// Evenly spaced points from `start` to `stop` inclusive; AP counts
    /// are rounded to the nearest integer.
    pub fn values(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                let v = if i + 1 == self.steps {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * (i as f64 / last)
                };
                if self.variable == SweepVariable::ApCount {
                    v.round()
                } else {
                    v
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    /// A forced AP count misses the target at the cell edge.
    BelowTarget,
    Infeasible,
    Error,
}

impl RowStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::BelowTarget => "below_target",
            RowStatus::Infeasible => "infeasible",
            RowStatus::Error => "error",
        }
    }
}

/// One sweep point. Fields that could not be computed are NaN.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub value: f64,
    pub status: RowStatus,
    pub message: String,
    pub absorption_per_m: f64,
    pub ap_count: f64,
    pub exact_ap_count: f64,
    pub cell_radius_m: f64,
    pub per_ap_power_dbm: f64,
    pub achieved_se: f64,
    /// Per-cell throughput `S B`, Gbit/s.
    pub throughput_gbps: f64,
    pub k_factor: f64,
    pub tau_factor: f64,
    /// Longest linear room the AP count can cover.
    pub max_room_length_m: f64,
    pub overlap_radius_m: f64,
    pub radius_increase_m: f64,
    pub overlap_feasible: bool,
    pub repeaters: f64,
    /// Largest relative residual of the four planning equations.
    pub residual: f64,
}

impl ReportRow {
    pub const COLUMNS: [&'static str; 18] = [
        "value",
        "status",
        "message",
        "absorption_per_m",
        "ap_count",
        "exact_ap_count",
        "cell_radius_m",
        "per_ap_power_dbm",
        "achieved_se",
        "throughput_gbps",
        "k_factor",
        "tau_factor",
        "max_room_length_m",
        "overlap_radius_m",
        "radius_increase_m",
        "overlap_feasible",
        "repeaters",
        "residual",
    ];

    fn failed(value: f64, error: &Error) -> Self {
        ReportRow {
            value,
            status: if error.is_infeasible() {
                RowStatus::Infeasible
            } else {
                RowStatus::Error
            },
            message: error.to_string(),
            absorption_per_m: f64::NAN,
            ap_count: f64::NAN,
            exact_ap_count: f64::NAN,
            cell_radius_m: f64::NAN,
            per_ap_power_dbm: f64::NAN,
            achieved_se: f64::NAN,
            throughput_gbps: f64::NAN,
            k_factor: f64::NAN,
            tau_factor: f64::NAN,
            max_room_length_m: f64::NAN,
            overlap_radius_m: f64::NAN,
            radius_increase_m: f64::NAN,
            overlap_feasible: false,
            repeaters: f64::NAN,
            residual: f64::NAN,
        }
    }
}

/// Full report for one baseline: the plan plus the room-length, overlap
/// and repeater answers for its AP count.
pub fn evaluate_point(value: f64, point: &Baseline, spectra: &SpectrumSet<f64>) -> ReportRow {
    match try_evaluate(value, point, spectra) {
        Ok(row) => row,
        Err(e) => ReportRow::failed(value, &e),
    }
}

fn try_evaluate(value: f64, point: &Baseline, spectra: &SpectrumSet<f64>) -> Result<ReportRow> {
    let scenario = point.scenario(spectra)?;
    let plan = point.plan(spectra)?;
    let n = plan.ap_count;
    let room = room_length_equation(&scenario, n)?;
    let max_room_length_m = room.solve()?;
    let overlap = radius_increase(&scenario, n, plan.cell_radius_m)?;
    let repeaters = repeater_count(&scenario, n, plan.cell_radius_m)?;
    let residual = [
        plan.residual,
        room.residual(max_room_length_m),
        radius_equation(&scenario, n)?.residual(overlap.radius_m),
        repeater_equation(&scenario, n, plan.cell_radius_m)?.residual(repeaters.exact_count),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    let below = plan.achieved_se < scenario.target_se;
    Ok(ReportRow {
        value,
        status: if below {
            RowStatus::BelowTarget
        } else {
            RowStatus::Ok
        },
        message: String::new(),
        absorption_per_m: scenario.absorption_per_m,
        ap_count: n as f64,
        exact_ap_count: plan.exact_ap_count,
        cell_radius_m: plan.cell_radius_m,
        per_ap_power_dbm: plan.per_ap_power_dbm,
        achieved_se: plan.achieved_se,
        throughput_gbps: plan.achieved_se * point.radio.bandwidth_hz / 1e9,
        k_factor: plan.k_factor,
        tau_factor: plan.tau_factor,
        max_room_length_m,
        overlap_radius_m: overlap.radius_m,
        radius_increase_m: overlap.increase_m,
        overlap_feasible: overlap.feasible,
        repeaters: repeaters.count as f64,
        residual,
    })
}

/// Evaluates every sweep point in parallel; rows come back in sweep order.
/// Failing points become flagged rows rather than aborting the sweep.
pub fn run_sweep(
    spec: &SweepSpec,
    baseline: &Baseline,
    spectra: &SpectrumSet<f64>,
) -> Result<Vec<ReportRow>> {
    spec.validate()?;
    Ok(spec
        .values()
        .into_par_iter()
        .map(|value| match baseline.with(spec.variable, value) {
            Ok(point) => evaluate_point(value, &point, spectra),
            Err(e) => ReportRow::failed(value, &e),
        })
        .collect())
}

/// One entry of the AP-count matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MatrixCell {
    Planned {
        ap_count: u64,
    },
    /// The spectrum does not cover the carrier.
    NoCoverage,
    Infeasible {
        reason: String,
    },
}

impl MatrixCell {
    pub fn ap_count(&self) -> Option<u64> {
        match self {
            MatrixCell::Planned { ap_count } => Some(*ap_count),
            _ => None,
        }
    }
}

/// Optimal AP counts with one row per target in `se_levels` and one column
/// per carrier in `carriers_hz`; other inputs come from `baseline`.
pub fn ap_count_matrix(
    baseline: &Baseline,
    spectra: &SpectrumSet<f64>,
    carriers_hz: &[f64],
    se_levels: &[f64],
) -> Result<Vec<Vec<MatrixCell>>> {
    let cells: Vec<(f64, f64)> = se_levels
        .iter()
        .flat_map(|&s| carriers_hz.iter().map(move |&f| (s, f)))
        .collect();
    let flat = cells
        .into_par_iter()
        .map(|(target_se, carrier_hz)| {
            let point = Baseline {
                carrier_hz,
                target_se,
                ap_count: None,
                ..*baseline
            };
            match point.plan(spectra) {
                Ok(plan) => Ok(MatrixCell::Planned {
                    ap_count: plan.ap_count,
                }),
                Err(Error::OutOfRange { .. }) => Ok(MatrixCell::NoCoverage),
                Err(e) if e.is_infeasible() => Ok(MatrixCell::Infeasible {
                    reason: e.to_string(),
                }),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(flat
        .chunks(carriers_hz.len().max(1))
        .map(<[_]>::to_vec)
        .collect())
}
