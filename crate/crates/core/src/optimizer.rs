//! Closed-form deployment planning.
//!
//! Every planning question reduces to one of two canonical equations:
//!
//! * `(1/x) e^(tau/x) = K` (AP count, and with `1/x^2` the repeater count),
//!   solved by `x = tau / W0(tau K)`;
//! * `x^2 e^(tau x) = K` (room length and overlap radius), solved by
//!   `x = 2 W0(tau sqrt(K) / 2) / tau`.
//!
//! The constants `K` and `tau` are assembled from the link budget by
//! [`KFactor`] and [`TauFactor`]. Each [`Equation`] can also be solved by
//! bisection, which serves as an independent check and as a fallback when
//! the Lambert-W argument is not representable.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lambertw::lambert_w0;
use crate::linkbudget::{
    linear_to_db, link_constant, snr_threshold, spectral_efficiency, validate_absorption,
    validate_positive, LinkGeometry, RadioConfig,
};
use crate::scalar::Scalar;

/// Largest AP or repeater count reported before a plan is declared
/// infeasible.
pub const MAX_COUNT: f64 = 1e15;

/// Radio, carrier and demand shared by every planning question.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Scenario<T> {
    pub radio: RadioConfig<T>,
    pub carrier_hz: T,
    /// Medium absorption coefficient at the carrier, 1/m.
    pub absorption_per_m: T,
    /// Spectral efficiency every cell must reach, bit/s/Hz.
    pub target_se: T,
}

impl<T: Scalar> Scenario<T> {
    pub fn validate(&self) -> Result<()> {
        self.radio.validate()?;
        validate_positive("carrier_hz", self.carrier_hz)?;
        validate_absorption(self.absorption_per_m)?;
        validate_positive("target_se", self.target_se)
    }

    pub fn hop(&self, distance_m: T) -> LinkGeometry<T> {
        LinkGeometry::new(self.carrier_hz, distance_m, self.absorption_per_m)
    }

    pub fn with_total_power(self, total_power_dbm: T) -> Self {
        Scenario {
            radio: self.radio.with_total_power(total_power_dbm),
            ..self
        }
    }
}

/// A linear room of length `room_length_m` to be covered by equal cells.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct PlanProblem<T> {
    pub scenario: Scenario<T>,
    pub room_length_m: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct PlanResult<T> {
    pub ap_count: u64,
    pub cell_radius_m: T,
    /// Per-AP share of the room budget, dBm.
    pub per_ap_power_dbm: T,
    /// Spectral efficiency at the cell edge, bit/s/Hz.
    pub achieved_se: T,
    pub k_factor: T,
    pub tau_factor: T,
    /// Real-valued solution before the ceiling.
    pub exact_ap_count: T,
    /// Length of the equivalent linear room.
    pub room_length_m: T,
    /// Relative residual of the defining equation at `exact_ap_count`.
    pub residual: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct RadiusIncrease<T> {
    /// Largest cell radius the fixed AP count can sustain.
    pub radius_m: T,
    /// `radius_m - cell_radius_m`, clamped at zero.
    pub increase_m: T,
    /// False when the budget cannot even sustain the current radius.
    pub feasible: bool,
    pub k_factor: T,
    pub tau_factor: T,
    pub residual: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct RepeaterPlan<T> {
    pub count: u64,
    pub exact_count: T,
    /// Worst-case hop length `2 r / count`.
    pub hop_m: T,
    pub k_factor: T,
    pub tau_factor: T,
    pub residual: T,
}

/// Scale constants of the planning equations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub enum KFactor<T> {
    /// `4 A / ((2^S - 1) L^2)` for the AP count of a room of length `L`.
    ApCount { room_length_m: T },
    /// `4 N A / (2^S - 1)` for the longest room `N` APs can cover.
    RoomLength { ap_count: u64 },
    /// `A / (N (2^S - 1))` for the largest radius `N` APs can sustain.
    Radius { ap_count: u64 },
    /// `2 A / (N (2^(2S) - 1) (2r)^2)` for the repeaters merging two cells.
    Repeater { ap_count: u64, cell_radius_m: T },
}

impl<T: Scalar> KFactor<T> {
    /// Evaluates the constant; `A` is [`link_constant`] of the scenario.
    pub fn evaluate(&self, scenario: &Scenario<T>) -> Result<T> {
        scenario.validate()?;
        let a = link_constant(&scenario.radio, scenario.carrier_hz)?;
        let threshold = snr_threshold(scenario.target_se);
        let four = T::lit(4.0);
        let value = match *self {
            KFactor::ApCount { room_length_m: l } => {
                validate_positive("room_length_m", l)?;
                four * a / (threshold * l * l)
            }
            KFactor::RoomLength { ap_count } => four * count::<T>(ap_count)? * a / threshold,
            KFactor::Radius { ap_count } => a / (count::<T>(ap_count)? * threshold),
            KFactor::Repeater {
                ap_count,
                cell_radius_m: r,
            } => {
                validate_positive("cell_radius_m", r)?;
                let span = T::lit(2.0) * r;
                let threshold = snr_threshold(T::lit(2.0) * scenario.target_se);
                T::lit(2.0) * a / (count::<T>(ap_count)? * threshold * span * span)
            }
        };
        if value.is_finite() && value > T::zero() {
            Ok(value)
        } else {
            Err(Error::infeasible(
                "link_constant",
                format!("K factor evaluates to {value}"),
            ))
        }
    }
}

/// Absorption exponents of the planning equations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub enum TauFactor<T> {
    /// `k L / 2`
    ApCount { room_length_m: T },
    /// `k / (2 N)`
    RoomLength { ap_count: u64 },
    /// `k`
    Radius,
    /// `2 r k`
    Repeater { cell_radius_m: T },
}

impl<T: Scalar> TauFactor<T> {
    pub fn evaluate(&self, absorption_per_m: T) -> Result<T> {
        validate_absorption(absorption_per_m)?;
        let two = T::lit(2.0);
        Ok(match *self {
            TauFactor::ApCount { room_length_m } => {
                validate_positive("room_length_m", room_length_m)?;
                absorption_per_m * room_length_m / two
            }
            TauFactor::RoomLength { ap_count } => absorption_per_m / (two * count::<T>(ap_count)?),
            TauFactor::Radius => absorption_per_m,
            TauFactor::Repeater { cell_radius_m } => {
                validate_positive("cell_radius_m", cell_radius_m)?;
                two * cell_radius_m * absorption_per_m
            }
        })
    }
}

fn count<T: Scalar>(n: u64) -> Result<T> {
    if n == 0 {
        return Err(Error::invalid("ap_count", "must be at least 1"));
    }
    T::from_u64(n).ok_or_else(|| Error::invalid("ap_count", "not representable"))
}

/// One of the canonical planning equations in the unknown `x > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub enum Equation<T> {
    /// `(1/x) e^(tau/x) = k`
    ApCount { tau: T, k: T },
    /// `x^2 e^(tau x) = k`
    RoomLength { tau: T, k: T },
    /// `x^2 e^(tau x) = k`
    Radius { tau: T, k: T },
    /// `(1/x^2) e^(tau/x) = k`
    Repeater { tau: T, k: T },
}

impl<T: Scalar> Equation<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Equation::ApCount { .. } => "ap-count equation",
            Equation::RoomLength { .. } => "room-length equation",
            Equation::Radius { .. } => "radius equation",
            Equation::Repeater { .. } => "repeater equation",
        }
    }

    fn parts(&self) -> (T, T) {
        match *self {
            Equation::ApCount { tau, k }
            | Equation::RoomLength { tau, k }
            | Equation::Radius { tau, k }
            | Equation::Repeater { tau, k } => (tau, k),
        }
    }

    fn validate(&self) -> Result<()> {
        let (tau, k) = self.parts();
        if !(tau >= T::zero()) || !tau.is_finite() {
            return Err(Error::invalid(
                "tau",
                format!("must be non-negative, got {tau}"),
            ));
        }
        validate_positive("k_factor", k)
    }

    /// Natural log of the left-hand side.
    fn log_lhs(&self, x: T) -> T {
        let two = T::lit(2.0);
        match *self {
            Equation::ApCount { tau, .. } => tau / x - x.ln(),
            Equation::RoomLength { tau, .. } | Equation::Radius { tau, .. } => {
                two * x.ln() + tau * x
            }
            Equation::Repeater { tau, .. } => tau / x - two * x.ln(),
        }
    }

    /// Whether the left-hand side grows with `x`.
    fn increasing(&self) -> bool {
        matches!(self, Equation::RoomLength { .. } | Equation::Radius { .. })
    }

    /// `|lhs(x) / k - 1|`.
    pub fn residual(&self, x: T) -> T {
        let (_, k) = self.parts();
        (self.log_lhs(x) - k.ln()).exp_m1().abs()
    }

    /// Lambert-W solution.
    pub fn closed_form(&self) -> Result<T> {
        self.validate()?;
        let (tau, k) = self.parts();
        let two = T::lit(2.0);
        let zero_tau = tau == T::zero();
        let x = match self {
            Equation::ApCount { .. } if zero_tau => k.recip(),
            Equation::ApCount { .. } => tau / lambert_w0(tau * k)?,
            Equation::RoomLength { .. } | Equation::Radius { .. } if zero_tau => k.sqrt(),
            Equation::RoomLength { .. } | Equation::Radius { .. } => {
                two * lambert_w0(tau * k.sqrt() / two)? / tau
            }
            Equation::Repeater { .. } if zero_tau => k.sqrt().recip(),
            Equation::Repeater { .. } => tau / (two * lambert_w0(tau * k.sqrt() / two)?),
        };
        if x.is_finite() && x > T::zero() {
            Ok(x)
        } else {
            Err(Error::infeasible(
                "lambert_w",
                format!("{} closed form evaluates to {x}", self.name()),
            ))
        }
    }

    /// Closed form, falling back to bisection when the Lambert-W argument
    /// over- or underflows.
    pub fn solve(&self) -> Result<T> {
        match self.closed_form() {
            Ok(x) => Ok(x),
            Err(Error::Invalid { field, reason }) => Err(Error::Invalid { field, reason }),
            Err(_) => self.solve_by_bisection(None),
        }
    }

    /// Bisection on the log form of the equation. Without a bracket one is
    /// found by doubling or halving from `x = 1`.
    pub fn solve_by_bisection(&self, bracket: Option<(T, T)>) -> Result<T> {
        self.validate()?;
        let (_, k) = self.parts();
        let log_k = k.ln();
        // g < 0 left of the root, g > 0 right of it
        let g = |x: T| {
            let d = self.log_lhs(x) - log_k;
            if self.increasing() {
                d
            } else {
                -d
            }
        };
        let no_bracket = |low: T, high: T| Error::NoBracket {
            equation: self.name(),
            low: low.as_f64(),
            high: high.as_f64(),
        };

        let (mut lo, mut hi) = match bracket {
            Some((lo, hi)) => {
                if !(lo > T::zero() && hi > lo) || !(g(lo) <= T::zero() && g(hi) >= T::zero()) {
                    return Err(no_bracket(lo, hi));
                }
                (lo, hi)
            }
            None => {
                let two = T::lit(2.0);
                let (mut lo, mut hi) = (T::one(), T::one());
                if g(T::one()) < T::zero() {
                    while g(hi) < T::zero() {
                        lo = hi;
                        hi = hi * two;
                        if !hi.is_finite() {
                            return Err(no_bracket(T::one(), T::max_value()));
                        }
                    }
                } else {
                    while g(lo) > T::zero() {
                        hi = lo;
                        lo = lo / two;
                        if lo == T::zero() {
                            return Err(no_bracket(T::min_positive_value(), T::one()));
                        }
                    }
                }
                (lo, hi)
            }
        };

        for _ in 0..4096 {
            // geometric steps while the bracket spans decades
            let mid = if hi > T::lit(4.0) * lo {
                (lo * hi).sqrt()
            } else {
                lo + (hi - lo) / T::lit(2.0)
            };
            if mid <= lo || mid >= hi {
                break;
            }
            let v = g(mid);
            if v == T::zero() {
                return Ok(mid);
            }
            if v < T::zero() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        // pick the endpoint with the smaller residual
        Ok(if g(lo).abs() <= g(hi).abs() { lo } else { hi })
    }
}

fn ceil_count<T: Scalar>(exact: T, what: &'static str) -> Result<u64> {
    if !(exact.as_f64() <= MAX_COUNT) {
        return Err(Error::infeasible(
            what,
            format!("requires {exact} units, beyond any practical deployment"),
        ));
    }
    Ok((exact.ceil().as_f64() as u64).max(1))
}

/// Minimum number of equally powered APs covering a linear room.
pub fn optimal_ap_count<T: Scalar>(problem: &PlanProblem<T>) -> Result<PlanResult<T>> {
    let (equation, k_factor, tau_factor) = ap_count_equation(problem)?;
    let exact = equation.solve()?;
    let n = ceil_count(exact, "ap_count")?;
    let mut plan = plan_with_ap_count(problem, n)?;
    plan.k_factor = k_factor;
    plan.tau_factor = tau_factor;
    plan.exact_ap_count = exact;
    plan.residual = equation.residual(exact);
    Ok(plan)
}

fn ap_count_equation<T: Scalar>(problem: &PlanProblem<T>) -> Result<(Equation<T>, T, T)> {
    let scenario = &problem.scenario;
    scenario.validate()?;
    validate_positive("room_length_m", problem.room_length_m)?;
    let k = KFactor::ApCount {
        room_length_m: problem.room_length_m,
    }
    .evaluate(scenario)?;
    let tau = TauFactor::ApCount {
        room_length_m: problem.room_length_m,
    }
    .evaluate(scenario.absorption_per_m)?;
    Ok((Equation::ApCount { tau, k }, k, tau))
}

/// Evaluates a linear room served by exactly `ap_count` APs.
pub fn plan_with_ap_count<T: Scalar>(
    problem: &PlanProblem<T>,
    ap_count: u64,
) -> Result<PlanResult<T>> {
    let (equation, k_factor, tau_factor) = ap_count_equation(problem)?;
    let n = count::<T>(ap_count)?;
    let scenario = &problem.scenario;
    let cell_radius_m = problem.room_length_m / (T::lit(2.0) * n);
    let per_ap_power_dbm = scenario.radio.total_power_dbm - linear_to_db(n);
    let achieved_se = spectral_efficiency(
        per_ap_power_dbm,
        &scenario.radio,
        &scenario.hop(cell_radius_m),
    )?;
    let exact = equation.solve()?;
    Ok(PlanResult {
        ap_count,
        cell_radius_m,
        per_ap_power_dbm,
        achieved_se,
        k_factor,
        tau_factor,
        exact_ap_count: exact,
        room_length_m: problem.room_length_m,
        residual: equation.residual(exact),
    })
}

/// The room-length equation for `ap_count` APs.
pub fn room_length_equation<T: Scalar>(
    scenario: &Scenario<T>,
    ap_count: u64,
) -> Result<Equation<T>> {
    Ok(Equation::RoomLength {
        tau: TauFactor::RoomLength { ap_count }.evaluate(scenario.absorption_per_m)?,
        k: KFactor::RoomLength { ap_count }.evaluate(scenario)?,
    })
}

/// Longest linear room that `ap_count` APs can cover at the target
/// spectral efficiency. Not rounded.
pub fn optimal_room_length<T: Scalar>(scenario: &Scenario<T>, ap_count: u64) -> Result<T> {
    room_length_equation(scenario, ap_count)?.solve()
}

/// The overlap-radius equation for `ap_count` APs.
pub fn radius_equation<T: Scalar>(scenario: &Scenario<T>, ap_count: u64) -> Result<Equation<T>> {
    Ok(Equation::Radius {
        tau: TauFactor::<T>::Radius.evaluate(scenario.absorption_per_m)?,
        k: KFactor::<T>::Radius { ap_count }.evaluate(scenario)?,
    })
}

/// Largest radius the fixed AP count can sustain, and the increase over
/// `cell_radius_m` that it allows.
pub fn radius_increase<T: Scalar>(
    scenario: &Scenario<T>,
    ap_count: u64,
    cell_radius_m: T,
) -> Result<RadiusIncrease<T>> {
    validate_positive("cell_radius_m", cell_radius_m)?;
    let equation = radius_equation(scenario, ap_count)?;
    let radius_m = equation.solve()?;
    let (tau_factor, k_factor) = equation.parts();
    let increase = radius_m - cell_radius_m;
    Ok(RadiusIncrease {
        radius_m,
        increase_m: increase.max(T::zero()),
        feasible: increase >= T::zero(),
        k_factor,
        tau_factor,
        residual: equation.residual(radius_m),
    })
}

/// The repeater equation for cells of radius `cell_radius_m`.
pub fn repeater_equation<T: Scalar>(
    scenario: &Scenario<T>,
    ap_count: u64,
    cell_radius_m: T,
) -> Result<Equation<T>> {
    Ok(Equation::Repeater {
        tau: TauFactor::Repeater { cell_radius_m }.evaluate(scenario.absorption_per_m)?,
        k: KFactor::Repeater {
            ap_count,
            cell_radius_m,
        }
        .evaluate(scenario)?,
    })
}

/// Amplify-and-forward repeaters needed to bridge the `2 r` gap to a
/// neighbouring cell with the merged power `2 P_o / N` at twice the target
/// spectral efficiency.
pub fn repeater_count<T: Scalar>(
    scenario: &Scenario<T>,
    ap_count: u64,
    cell_radius_m: T,
) -> Result<RepeaterPlan<T>> {
    let equation = repeater_equation(scenario, ap_count, cell_radius_m)?;
    let exact = equation.solve()?;
    let m = ceil_count(exact, "repeaters")?;
    let (tau_factor, k_factor) = equation.parts();
    Ok(RepeaterPlan {
        count: m,
        exact_count: exact,
        hop_m: T::lit(2.0) * cell_radius_m / count::<T>(m)?,
        k_factor,
        tau_factor,
        residual: equation.residual(exact),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn scenario(k: f64) -> Scenario<f64> {
        Scenario {
            radio: RadioConfig::baseline(),
            carrier_hz: 1.51e12,
            absorption_per_m: k,
            target_se: 0.1,
        }
    }

    #[test]
    fn bisection_examples() {
        let x = Equation::ApCount { tau: 1.0, k: 1.0 }
            .solve_by_bisection(None)
            .unwrap();
        assert_relative_eq!(x, 1.763_222_834_351_896_7, max_relative = 1e-13);
        let x = Equation::RoomLength { tau: 0.0, k: 2.0 }
            .solve_by_bisection(None)
            .unwrap();
        assert_relative_eq!(x, 2f64.sqrt(), max_relative = 1e-14);
        let eq = Equation::Radius { tau: 0.3, k: 50.0 };
        assert!(matches!(
            eq.solve_by_bisection(Some((100.0, 200.0))),
            Err(Error::NoBracket { .. })
        ));
    }

    #[test]
    fn closed_forms_match_bisection() {
        let cases = [
            Equation::ApCount { tau: 3.2, k: 0.7 },
            Equation::RoomLength { tau: 0.05, k: 4e3 },
            Equation::Radius { tau: 2.0, k: 0.01 },
            Equation::Repeater { tau: 12.0, k: 40.0 },
        ];
        for eq in cases {
            let a = eq.closed_form().unwrap();
            let b = eq.solve_by_bisection(None).unwrap();
            assert_relative_eq!(a, b, max_relative = 1e-12);
            assert!(eq.residual(a) < 1e-12);
        }
    }

    #[test]
    fn zero_absorption_room_length_is_square_root() {
        let eq = Equation::RoomLength { tau: 0.0, k: 100.0 };
        assert_eq!(eq.closed_form().unwrap(), 10.0);
    }

    #[test]
    fn invalid_equations() {
        assert!(Equation::ApCount { tau: -1.0, k: 1.0 }
            .closed_form()
            .is_err());
        assert!(Equation::ApCount { tau: 1.0, k: 0.0 }.solve().is_err());
    }

    #[test]
    fn ninefold_split_of_ten_metres() {
        let problem = PlanProblem {
            scenario: scenario(0.2),
            room_length_m: 10.0,
        };
        let plan = plan_with_ap_count(&problem, 9).unwrap();
        assert_relative_eq!(plan.cell_radius_m, 10.0 / 18.0, max_relative = 1e-15);
        assert_eq!((plan.cell_radius_m * 100.0).round() / 100.0, 0.56);
    }

    #[test]
    fn ceiling_is_sound() {
        let problem = PlanProblem {
            scenario: scenario(0.6).with_total_power(-35.0),
            room_length_m: 12.0,
        };
        let plan = optimal_ap_count(&problem).unwrap();
        assert!(plan.ap_count > 1);
        assert!(plan.achieved_se >= 0.1);
        let fewer = plan_with_ap_count(&problem, plan.ap_count - 1).unwrap();
        assert!(fewer.achieved_se < 0.1);
    }

    #[test]
    fn radius_increase_flags_infeasible() {
        let s = scenario(0.3);
        let r = radius_increase(&s, 4, 1e6).unwrap();
        assert!(!r.feasible);
        assert_eq!(r.increase_m, 0.0);
        let r = radius_increase(&s, 4, 1e-3).unwrap();
        assert!(r.feasible);
        assert_relative_eq!(r.increase_m, r.radius_m - 1e-3, max_relative = 1e-15);
    }

    #[test]
    fn single_hop_needs_one_repeater() {
        // generous budget: the full 2r span already meets 2S
        let s = scenario(0.01).with_total_power(30.0);
        let plan = repeater_count(&s, 2, 0.5).unwrap();
        assert_eq!(plan.count, 1);
        assert!(plan.exact_count < 1.0);
    }

    #[test]
    fn k_and_tau_factor_relations() {
        let s = scenario(0.4);
        let (l, n, r) = (7.0, 5_u64, 0.8);
        let k1 = KFactor::ApCount { room_length_m: l }.evaluate(&s).unwrap();
        let k3 = KFactor::<f64>::Radius { ap_count: n }.evaluate(&s).unwrap();
        assert_relative_eq!(k1, 4.0 * k3 * n as f64 / (l * l), max_relative = 1e-13);
        let t1 = TauFactor::ApCount { room_length_m: l }
            .evaluate(0.4)
            .unwrap();
        let t4 = TauFactor::Repeater { cell_radius_m: r }
            .evaluate(0.4)
            .unwrap();
        assert_relative_eq!(t1 / t4, l / (4.0 * r), max_relative = 1e-15);
        for tau in [
            TauFactor::ApCount { room_length_m: l },
            TauFactor::RoomLength { ap_count: n },
            TauFactor::Radius,
            TauFactor::Repeater { cell_radius_m: r },
        ] {
            assert_eq!(tau.evaluate(0.0).unwrap(), 0.0);
        }
        assert!(KFactor::<f64>::Radius { ap_count: 0 }.evaluate(&s).is_err());
    }

    #[test]
    fn single_precision_plan() {
        let s = Scenario::<f32> {
            radio: RadioConfig::baseline(),
            carrier_hz: 2.52e12,
            absorption_per_m: 0.6,
            target_se: 1.0,
        };
        let plan = optimal_ap_count(&PlanProblem {
            scenario: s,
            room_length_m: 10.0,
        })
        .unwrap();
        let s64 = Scenario::<f64> {
            radio: RadioConfig::baseline(),
            carrier_hz: 2.52e12,
            absorption_per_m: 0.6,
            target_se: 1.0,
        };
        let plan64 = optimal_ap_count(&PlanProblem {
            scenario: s64,
            room_length_m: 10.0,
        })
        .unwrap();
        assert_eq!(plan.ap_count, plan64.ap_count);
        assert!((plan.exact_ap_count as f64 / plan64.exact_ap_count - 1.0).abs() < 1e-4);
    }
}
