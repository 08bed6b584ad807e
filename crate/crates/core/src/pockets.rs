//! Room geometry, demand pockets and cell packing.
//!
//! Rooms are described by a JSON document:
//!
//! ```json
//! {
//!   "shape": { "kind": "trapezoid", "a": 4.0, "a_prime": 8.0, "b": 6.0 },
//!   "pockets": [
//!     {
//!       "label": "reading desks",
//!       "x": 2.5, "y": 0.5,
//!       "width": 2.0, "depth": 1.5,
//!       "users": 3,
//!       "mobility_x": 0.5, "mobility_y": 0.2,
//!       "pocket_type": 4
//!     }
//!   ]
//! }
//! ```
//!
//! Shapes are `rectangle` (`a` by `b`), `trapezoid` (parallel sides `a` at
//! `y = 0` and `a_prime` at `y = b`, centred on each other) and `line`
//! (`length`, the linear room form). Pocket coordinates are the lower-left
//! corner of the pocket's bounding box, measured from the lower-left corner
//! of the room's bounding box. Dimensions are in meters.
//!
//! A rectangle or trapezoid of area `ab` served by `N` cells of radius `r`
//! unrolls into the linear room of length `ab / (2r) = 2rN`. A 2-D room is
//! planned at the fixed point of that relation: with `r = sqrt(ab / 4N)` the
//! per-AP power `P_o / N` must still reach the target at the cell edge.

use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linkbudget::{
    linear_to_db, link_constant, snr_threshold, spectral_efficiency, validate_positive,
};
use crate::optimizer::{
    optimal_ap_count, KFactor, PlanProblem, PlanResult, Scenario, TauFactor, MAX_COUNT,
};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", bound = "T: Scalar")]
pub enum RoomShape<T> {
    Rectangle { a: T, b: T },
    Trapezoid { a: T, a_prime: T, b: T },
    Line { length: T },
}

impl<T: Scalar> RoomShape<T> {
    pub fn validate(&self) -> Result<()> {
        match *self {
            RoomShape::Rectangle { a, b } => {
                validate_positive("a", a)?;
                validate_positive("b", b)
            }
            RoomShape::Trapezoid { a, a_prime, b } => {
                validate_positive("a", a)?;
                validate_positive("a_prime", a_prime)?;
                validate_positive("b", b)
            }
            RoomShape::Line { length } => validate_positive("length", length),
        }
    }

    /// Rectangle of equal area; a trapezoid becomes `(a + a') / 2` by `b`.
    /// `None` for the linear form.
    pub fn equivalent_rectangle(&self) -> Option<(T, T)> {
        match *self {
            RoomShape::Rectangle { a, b } => Some((a, b)),
            RoomShape::Trapezoid { a, a_prime, b } => Some(((a + a_prime) / T::lit(2.0), b)),
            RoomShape::Line { .. } => None,
        }
    }

    fn bounding_box(&self) -> Option<(T, T)> {
        match *self {
            RoomShape::Rectangle { a, b } => Some((a, b)),
            RoomShape::Trapezoid { a, a_prime, b } => Some((a.max(a_prime), b)),
            RoomShape::Line { .. } => None,
        }
    }

    fn contains_point(&self, x: T, y: T) -> bool {
        let slack = T::lit(1e-9);
        let Some((w, h)) = self.bounding_box() else {
            return false;
        };
        if x < -slack || y < -slack || x > w + slack || y > h + slack {
            return false;
        }
        match *self {
            RoomShape::Trapezoid { a, a_prime, b } => {
                let half = (a + (a_prime - a) * (y / b)) / T::lit(2.0);
                (x - w / T::lit(2.0)).abs() <= half + slack
            }
            _ => true,
        }
    }
}

/// A demand hotspot planned as its own homogeneous sub-room.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Pocket<T> {
    #[serde(default)]
    pub label: String,
    pub x: T,
    pub y: T,
    /// Extent along x (`a_i`).
    pub width: T,
    /// Extent along y (`b_i`).
    pub depth: T,
    pub users: u32,
    /// User mobility along x; the pocket must be at least this wide.
    pub mobility_x: T,
    pub mobility_y: T,
    /// Pocket category 1 through 6.
    pub pocket_type: u8,
}

impl<T: Scalar> Pocket<T> {
    pub fn area(&self) -> T {
        self.width * self.depth
    }

    fn validate(&self) -> Result<()> {
        validate_positive("pocket.width", self.width)?;
        validate_positive("pocket.depth", self.depth)?;
        if !(self.mobility_x >= T::zero() && self.mobility_x <= self.width) {
            return Err(Error::invalid(
                "pocket.mobility_x",
                format!("pocket `{}` needs 0 <= mobility_x <= width", self.label),
            ));
        }
        if !(self.mobility_y >= T::zero() && self.mobility_y <= self.depth) {
            return Err(Error::invalid(
                "pocket.mobility_y",
                format!("pocket `{}` needs 0 <= mobility_y <= depth", self.label),
            ));
        }
        if self.users == 0 {
            return Err(Error::invalid("pocket.users", "must be at least 1"));
        }
        if !(1..=6).contains(&self.pocket_type) {
            return Err(Error::invalid(
                "pocket.pocket_type",
                format!("must be 1 through 6, got {}", self.pocket_type),
            ));
        }
        if !self.x.is_finite() || !self.y.is_finite() {
            return Err(Error::invalid("pocket.x", "coordinates must be finite"));
        }
        Ok(())
    }

    fn overlaps(&self, other: &Pocket<T>) -> bool {
        self.x < other.x + other.width
            && other.x < self.x + self.width
            && self.y < other.y + other.depth
            && other.y < self.y + self.depth
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct RoomSpec<T> {
    pub shape: RoomShape<T>,
    #[serde(default)]
    pub pockets: Vec<Pocket<T>>,
}

impl<T: Scalar> RoomSpec<T> {
    pub fn from_json(source: impl Read) -> Result<Self> {
        let spec: RoomSpec<T> = serde_json::from_reader(source)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        self.shape.validate()?;
        if self.pockets.is_empty() {
            return Ok(());
        }
        if matches!(self.shape, RoomShape::Line { .. }) {
            return Err(Error::invalid(
                "pockets",
                "pockets need a rectangle or trapezoid room",
            ));
        }
        for pocket in &self.pockets {
            pocket.validate()?;
            let corners = [
                (pocket.x, pocket.y),
                (pocket.x + pocket.width, pocket.y),
                (pocket.x, pocket.y + pocket.depth),
                (pocket.x + pocket.width, pocket.y + pocket.depth),
            ];
            if !corners
                .iter()
                .all(|&(x, y)| self.shape.contains_point(x, y))
            {
                return Err(Error::invalid(
                    "pockets",
                    format!("pocket `{}` extends outside the room", pocket.label),
                ));
            }
        }
        for (i, a) in self.pockets.iter().enumerate() {
            if let Some(b) = self.pockets[i + 1..].iter().find(|b| a.overlaps(b)) {
                return Err(Error::invalid(
                    "pockets",
                    format!("pockets `{}` and `{}` overlap", a.label, b.label),
                ));
            }
        }
        Ok(())
    }
}

/// Linear-room length `ab / (2r)` of a rectangle or trapezoid; a line
/// returns its own length.
pub fn to_hypothetical<T: Scalar>(shape: &RoomShape<T>, cell_radius_m: T) -> Result<T> {
    shape.validate()?;
    validate_positive("cell_radius_m", cell_radius_m)?;
    Ok(match *shape {
        RoomShape::Line { length } => length,
        _ => {
            let (a, b) = shape.equivalent_rectangle().expect("2-D shape");
            a * b / (T::lit(2.0) * cell_radius_m)
        }
    })
}

/// `ceil(ab / (4 r^2))`.
pub fn ap_count_from_area<T: Scalar>(a: T, b: T, cell_radius_m: T) -> Result<u64> {
    validate_positive("a", a)?;
    validate_positive("b", b)?;
    validate_positive("cell_radius_m", cell_radius_m)?;
    let exact = a * b / (T::lit(4.0) * cell_radius_m * cell_radius_m);
    if !(exact.as_f64() <= MAX_COUNT) {
        return Err(Error::infeasible("ap_count", format!("{exact} cells")));
    }
    Ok((exact.ceil().as_f64() as u64).max(1))
}

/// Plans an `a` by `b` area as a grid of `N` square cells of radius
/// `sqrt(ab / 4N)`.
pub fn plan_area<T: Scalar>(a: T, b: T, scenario: &Scenario<T>) -> Result<PlanResult<T>> {
    validate_positive("a", a)?;
    validate_positive("b", b)?;
    scenario.validate()?;
    let area = a * b;
    let four = T::lit(4.0);
    let k = scenario.absorption_per_m;
    // Edge SNR over threshold, independent of N apart from absorption.
    let margin = four * link_constant(&scenario.radio, scenario.carrier_hz)?
        / (area * snr_threshold(scenario.target_se));
    let short = || {
        Error::infeasible(
            "total_power",
            format!(
                "{} dBm cannot reach {} bit/s/Hz over a {} m^2 area at any cell size",
                scenario.radio.total_power_dbm, scenario.target_se, area
            ),
        )
    };
    let (exact, residual) = if k == T::zero() {
        if margin < T::one() {
            return Err(short());
        }
        (T::one(), T::zero())
    } else {
        if margin <= T::one() {
            return Err(short());
        }
        let max_radius = margin.ln() / k;
        let exact = area / (four * max_radius * max_radius);
        (exact, (margin.ln() - k * max_radius).exp_m1().abs())
    };
    if !(exact.as_f64() <= MAX_COUNT) {
        return Err(short());
    }
    let ap_count = (exact.ceil().as_f64() as u64).max(1);
    let n = T::from_u64(ap_count).expect("count fits");
    let cell_radius_m = (area / (four * n)).sqrt();
    let room_length_m = T::lit(2.0) * cell_radius_m * n;
    let per_ap_power_dbm = scenario.radio.total_power_dbm - linear_to_db(n);
    let achieved_se = spectral_efficiency(
        per_ap_power_dbm,
        &scenario.radio,
        &scenario.hop(cell_radius_m),
    )?;
    Ok(PlanResult {
        ap_count,
        cell_radius_m,
        per_ap_power_dbm,
        achieved_se,
        k_factor: KFactor::ApCount { room_length_m }.evaluate(scenario)?,
        tau_factor: TauFactor::ApCount { room_length_m }.evaluate(k)?,
        exact_ap_count: exact,
        room_length_m,
        residual,
    })
}

/// Plans a whole room as one homogeneous region.
pub fn plan_room<T: Scalar>(shape: &RoomShape<T>, scenario: &Scenario<T>) -> Result<PlanResult<T>> {
    shape.validate()?;
    match *shape {
        RoomShape::Line { length } => optimal_ap_count(&PlanProblem {
            scenario: *scenario,
            room_length_m: length,
        }),
        _ => {
            let (a, b) = shape.equivalent_rectangle().expect("2-D shape");
            plan_area(a, b, scenario)
        }
    }
}

/// How the room budget is shared between pockets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerSplit {
    /// `P_i = P_o / J_i`.
    #[default]
    PerUser,
    /// `P_i = P_o J_i / sum(J)`.
    Proportional,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case", bound = "T: Scalar")]
pub enum PocketOutcome<T> {
    Planned(PlanResult<T>),
    Infeasible { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct PocketPlan<T> {
    pub pocket: Pocket<T>,
    /// Budget assigned to the pocket, dBm.
    pub power_dbm: T,
    pub outcome: PocketOutcome<T>,
}

/// Plans every pocket independently under its share of the room budget.
/// Unpocketed floor area receives no APs.
pub fn plan_pockets<T: Scalar>(
    room: &RoomSpec<T>,
    scenario: &Scenario<T>,
    split: PowerSplit,
) -> Result<Vec<PocketPlan<T>>> {
    room.validate()?;
    if room.pockets.is_empty() {
        return Err(Error::invalid("pockets", "room has no demand pockets"));
    }
    let total_users: u64 = room.pockets.iter().map(|p| u64::from(p.users)).sum();
    room.pockets
        .iter()
        .map(|pocket| {
            let users = T::from_u32(pocket.users).expect("u32 fits");
            let power_dbm = match split {
                PowerSplit::PerUser => scenario.radio.total_power_dbm - linear_to_db(users),
                PowerSplit::Proportional => {
                    let total = T::from_u64(total_users).expect("u64 fits");
                    scenario.radio.total_power_dbm + linear_to_db(users / total)
                }
            };
            let outcome = match plan_area(
                pocket.width,
                pocket.depth,
                &scenario.with_total_power(power_dbm),
            ) {
                Ok(plan) => PocketOutcome::Planned(plan),
                Err(e) if e.is_infeasible() => PocketOutcome::Infeasible {
                    reason: e.to_string(),
                },
                Err(e) => return Err(e),
            };
            Ok(PocketPlan {
                pocket: pocket.clone(),
                power_dbm,
                outcome,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PackingScheme {
    Square,
    Hexagonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Packing<T> {
    pub cells: u64,
    /// Share of the floor inside some cell's inscribed circle.
    pub covered_fraction: T,
}

/// Cells of radius `r` needed to tile `area` with a square or hexagonal
/// lattice, and the fraction each lattice covers.
pub fn packing_efficiency<T: Scalar>(
    scheme: PackingScheme,
    cell_radius_m: T,
    area: T,
) -> Result<Packing<T>> {
    validate_positive("cell_radius_m", cell_radius_m)?;
    validate_positive("area", area)?;
    let r2 = cell_radius_m * cell_radius_m;
    let circle = T::PI() * r2;
    let lattice_cell = match scheme {
        PackingScheme::Square => T::lit(4.0) * r2,
        PackingScheme::Hexagonal => T::lit(2.0) * T::lit(3.0).sqrt() * r2,
    };
    let cells = area / lattice_cell;
    if !(cells.as_f64() <= MAX_COUNT) {
        return Err(Error::infeasible("cells", format!("{cells} cells")));
    }
    Ok(Packing {
        cells: cells.ceil().as_f64() as u64,
        covered_fraction: circle / lattice_cell,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linkbudget::RadioConfig;

    fn scenario() -> Scenario<f64> {
        Scenario {
            radio: RadioConfig::baseline(),
            carrier_hz: 3.42e12,
            absorption_per_m: 0.73,
            target_se: 0.1,
        }
    }

    fn pocket(label: &str, x: f64, y: f64, w: f64, d: f64, users: u32) -> Pocket<f64> {
        Pocket {
            label: label.into(),
            x,
            y,
            width: w,
            depth: d,
            users,
            mobility_x: 0.0,
            mobility_y: 0.0,
            pocket_type: 3,
        }
    }

    #[test]
    fn nine_cells_in_six_by_six() {
        assert_eq!(ap_count_from_area(6.0, 6.0, 1.0).unwrap(), 9);
        let square = RoomShape::Rectangle { a: 6.0, b: 6.0 };
        let trapezoid = RoomShape::Trapezoid {
            a: 4.0,
            a_prime: 8.0,
            b: 6.0,
        };
        assert_eq!(to_hypothetical(&square, 1.0).unwrap(), 18.0);
        assert_eq!(to_hypothetical(&trapezoid, 1.0).unwrap(), 18.0);
        assert_eq!(trapezoid.equivalent_rectangle(), Some((6.0, 6.0)));
    }

    #[test]
    fn equal_area_rooms_unroll_equally() {
        let a = RoomShape::Rectangle { a: 3.0, b: 8.0 };
        let b = RoomShape::Rectangle { a: 4.0, b: 6.0 };
        assert_eq!(
            to_hypothetical(&a, 0.7).unwrap(),
            to_hypothetical(&b, 0.7).unwrap()
        );
    }

    #[test]
    fn area_scaling() {
        let n = ap_count_from_area(3.0, 5.0, 0.5).unwrap();
        assert_eq!(ap_count_from_area(6.0, 10.0, 0.5).unwrap(), 4 * n);
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn packing_fractions() {
        let sq = packing_efficiency(PackingScheme::Square, 1.0_f64, 100.0).unwrap();
        let hex = packing_efficiency(PackingScheme::Hexagonal, 1.0_f64, 100.0).unwrap();
        assert!((sq.covered_fraction - 0.7854).abs() < 1e-4);
        assert!((hex.covered_fraction - 0.9069).abs() < 1e-4);
        assert_eq!(sq.cells, 25);
        assert!(hex.cells >= sq.cells);
    }

    #[test]
    fn whole_room_pocket_matches_homogeneous_plan() {
        let shape = RoomShape::Rectangle { a: 6.0, b: 4.0 };
        let room = RoomSpec {
            shape,
            pockets: vec![pocket("all", 0.0, 0.0, 6.0, 4.0, 1)],
        };
        let s = scenario();
        let plans = plan_pockets(&room, &s, PowerSplit::PerUser).unwrap();
        let homogeneous = plan_room(&shape, &s).unwrap();
        assert_eq!(plans[0].outcome, PocketOutcome::Planned(homogeneous));
    }

    #[test]
    fn identical_pockets_plan_identically() {
        let room = RoomSpec {
            shape: RoomShape::Rectangle { a: 10.0, b: 4.0 },
            pockets: vec![
                pocket("left", 0.0, 0.0, 3.0, 2.0, 2),
                pocket("right", 5.0, 1.0, 3.0, 2.0, 2),
            ],
        };
        let plans = plan_pockets(&room, &scenario(), PowerSplit::PerUser).unwrap();
        assert_eq!(plans[0].outcome, plans[1].outcome);
    }

    #[test]
    fn infeasible_pocket_is_flagged_not_fatal() {
        let room = RoomSpec {
            shape: RoomShape::Rectangle { a: 10.0, b: 10.0 },
            pockets: vec![
                pocket("quiet", 0.0, 0.0, 1.0, 1.0, 1),
                pocket("crowd", 2.0, 2.0, 8.0, 8.0, 1_000_000),
            ],
        };
        let s = scenario();
        let plans = plan_pockets(&room, &s, PowerSplit::PerUser).unwrap();
        assert!(matches!(plans[0].outcome, PocketOutcome::Planned(_)));
        assert!(matches!(plans[1].outcome, PocketOutcome::Infeasible { .. }));
    }

    #[test]
    fn proportional_split_favours_crowds() {
        let room = RoomSpec {
            shape: RoomShape::Rectangle { a: 10.0, b: 4.0 },
            pockets: vec![
                pocket("a", 0.0, 0.0, 2.0, 2.0, 1),
                pocket("b", 4.0, 0.0, 2.0, 2.0, 3),
            ],
        };
        let per_user = plan_pockets(&room, &scenario(), PowerSplit::PerUser).unwrap();
        let proportional = plan_pockets(&room, &scenario(), PowerSplit::Proportional).unwrap();
        assert!(per_user[0].power_dbm > per_user[1].power_dbm);
        assert!(proportional[0].power_dbm < proportional[1].power_dbm);
    }

    #[test]
    fn room_validation() {
        let bad = RoomSpec {
            shape: RoomShape::Rectangle { a: 4.0, b: 4.0 },
            pockets: vec![
                pocket("a", 0.0, 0.0, 2.0, 2.0, 1),
                pocket("b", 1.0, 1.0, 2.0, 2.0, 1),
            ],
        };
        assert!(bad.validate().is_err());
        let outside = RoomSpec {
            shape: RoomShape::Trapezoid {
                a: 4.0,
                a_prime: 8.0,
                b: 6.0,
            },
            pockets: vec![pocket("corner", 0.0, 0.0, 1.0, 1.0, 1)],
        };
        assert!(outside.validate().is_err());
        let inside = RoomSpec {
            shape: RoomShape::Trapezoid {
                a: 4.0,
                a_prime: 8.0,
                b: 6.0,
            },
            pockets: vec![pocket("centre", 2.5, 0.0, 3.0, 5.0, 1)],
        };
        assert!(inside.validate().is_ok());
        let mut p = pocket("fast", 0.0, 0.0, 1.0, 1.0, 1);
        p.mobility_x = 2.0;
        let room = RoomSpec {
            shape: RoomShape::Rectangle { a: 4.0, b: 4.0 },
            pockets: vec![p],
        };
        assert!(room.validate().is_err());
        let line = RoomSpec {
            shape: RoomShape::Line { length: 10.0 },
            pockets: vec![pocket("a", 0.0, 0.0, 1.0, 1.0, 1)],
        };
        assert!(line.validate().is_err());
    }

    #[test]
    fn parses_room_json() {
        let json = r#"{
            "shape": {"kind": "trapezoid", "a": 4.0, "a_prime": 8.0, "b": 6.0},
            "pockets": [{"label": "desk", "x": 2.5, "y": 0.5, "width": 2.0, "depth": 1.5,
                         "users": 3, "mobility_x": 0.5, "mobility_y": 0.2, "pocket_type": 4}]
        }"#;
        let room = RoomSpec::<f64>::from_json(json.as_bytes()).unwrap();
        assert_eq!(room.pockets.len(), 1);
        let json = r#"{"shape": {"kind": "hexagon", "a": 1.0}}"#;
        assert!(RoomSpec::<f64>::from_json(json.as_bytes()).is_err());
    }
}
