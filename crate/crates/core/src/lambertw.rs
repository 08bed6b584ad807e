//! Real-valued Lambert W function on both real branches.
//!
//! `W(x)` is the inverse of `w * exp(w)`. The principal branch covers
//! `x >= -1/e` with `W >= -1`; the lower branch covers `-1/e <= x < 0` with
//! `W <= -1`. Evaluation starts from a branch-point series, a closed-form
//! approximation or the logarithmic asymptote, then polishes with Halley
//! iteration.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    /// `W0`, defined on `[-1/e, inf)`.
    Principal,
    /// `W-1`, defined on `[-1/e, 0)`.
    NegativeOne,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::Principal => f.write_str("principal"),
            Branch::NegativeOne => f.write_str("W-1"),
        }
    }
}

/// Inputs this far below `-1/e` are treated as round-off and clamped onto
/// the branch point.
const BRANCH_POINT_SLACK: f64 = 1e-15;

const MAX_HALLEY_STEPS: usize = 64;

/// Evaluates `W(x)` on the requested branch.
pub fn lambert_w<T: Scalar>(x: T, branch: Branch) -> Result<T> {
    let one = T::one();
    let domain_error = || Error::Domain {
        x: x.as_f64(),
        branch,
    };

    if x.is_nan() || x == T::neg_infinity() {
        return Err(domain_error());
    }
    let branch_point = -one / T::E();
    let slack = T::lit(BRANCH_POINT_SLACK).max(T::lit(4.0) * T::epsilon());
    if x <= branch_point {
        return if branch_point - x <= slack {
            Ok(-one)
        } else {
            Err(domain_error())
        };
    }
    match branch {
        Branch::Principal => {
            if x == T::zero() {
                return Ok(T::zero());
            }
            if x == T::infinity() {
                return Ok(T::infinity());
            }
        }
        Branch::NegativeOne => {
            if x >= T::zero() {
                return Err(domain_error());
            }
        }
    }

    // Distance from the branch point in the natural local coordinate.
    let p = (T::lit(2.0) * (T::E() * x + one)).max(T::zero()).sqrt();
    let signed_p = match branch {
        Branch::Principal => p,
        Branch::NegativeOne => -p,
    };
    if p < T::lit(1e-3) {
        // The series is already exact to working precision here and Halley
        // steps would divide by a vanishing derivative.
        return Ok(branch_point_series(signed_p));
    }

    let guess = match branch {
        Branch::Principal if p < T::lit(0.5) => branch_point_series(signed_p),
        Branch::Principal if x < T::lit(3.0) => winitzki(x),
        Branch::Principal => {
            let l1 = x.ln();
            let l2 = l1.ln();
            l1 - l2 + l2 / l1
        }
        Branch::NegativeOne if x < T::lit(-0.25) => branch_point_series(signed_p),
        Branch::NegativeOne => {
            let l1 = (-x).ln();
            let l2 = (-l1).ln();
            l1 - l2 + l2 / l1
        }
    };
    Ok(halley(x, guess))
}

/// Principal branch shorthand.
pub fn lambert_w0<T: Scalar>(x: T) -> Result<T> {
    lambert_w(x, Branch::Principal)
}

/// Series of W about `x = -1/e` in `p = sqrt(2 (e x + 1))`; pass `-p` for
/// the lower branch.
fn branch_point_series<T: Scalar>(p: T) -> T {
    const COEFFS: [f64; 7] = [
        -1.0,
        1.0,
        -1.0 / 3.0,
        11.0 / 72.0,
        -43.0 / 540.0,
        769.0 / 17280.0,
        -221.0 / 8505.0,
    ];
    COEFFS
        .iter()
        .rev()
        .fold(T::zero(), |acc, &c| acc * p + T::lit(c))
}

fn winitzki<T: Scalar>(x: T) -> T {
    let l = x.ln_1p();
    l * (T::one() - l.ln_1p() / (T::lit(2.0) + l))
}

fn halley<T: Scalar>(x: T, mut w: T) -> T {
    let one = T::one();
    let two = T::lit(2.0);
    let stop = T::lit(4.0) * T::epsilon();
    for _ in 0..MAX_HALLEY_STEPS {
        let ew = w.exp();
        let f = w * ew - x;
        if f == T::zero() {
            break;
        }
        let wp1 = w + one;
        let denom = ew * wp1 - (w + two) * f / (two * wp1);
        if denom == T::zero() || !denom.is_finite() {
            break;
        }
        let step = f / denom;
        if !step.is_finite() {
            break;
        }
        w = w - step;
        if step.abs() <= stop * (one + w.abs()) {
            break;
        }
    }
    w
}
