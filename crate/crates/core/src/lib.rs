//! Indoor terahertz access-point planning.
//!
//! The planner sizes THz access-point deployments under a shared room power
//! budget: how many APs a room needs, the largest room a given AP count can
//! cover, how far cells can grow for overlap, and how many repeaters merge
//! two cells. Each question reduces to `x^a e^(tau x^b) = K`, solved with the
//! real Lambert W function and cross-checked by bisection.
//!
//! All numeric types are generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root fix `f64`.
//!
//! ```
//! use thzplan::{optimal_ap_count, PlanProblem, RadioConfig, Scenario};
//!
//! let problem = PlanProblem {
//!     scenario: Scenario {
//!         radio: RadioConfig::baseline(),
//!         carrier_hz: 0.32e12,
//!         absorption_per_m: 0.0186,
//!         target_se: 0.1,
//!     },
//!     room_length_m: 10.0,
//! };
//! let plan = optimal_ap_count(&problem).unwrap();
//! assert!(plan.achieved_se >= 0.1);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod error;
pub mod lambertw;
pub mod linkbudget;
pub mod optimizer;
pub mod pockets;
pub mod scalar;
pub mod sweep;

pub use channel::{AbsorptionSpectrum, ChannelRow, SpectrumSet, SubChannel};
pub use error::{Error, Result};
pub use lambertw::{lambert_w, lambert_w0, Branch};
pub use linkbudget::{
    calibrate_gain_constant, link_constant, reference_link, required_power, snr_linear,
    spectral_efficiency, LinkGeometry, RadioConfig, ReferenceLink,
};
pub use optimizer::{
    optimal_ap_count, optimal_room_length, plan_with_ap_count, radius_increase, repeater_count,
    Equation, KFactor, PlanProblem, PlanResult, RadiusIncrease, RepeaterPlan, Scenario, TauFactor,
};
pub use pockets::{
    ap_count_from_area, packing_efficiency, plan_pockets, plan_room, to_hypothetical,
    PackingScheme, Pocket, PocketOutcome, PocketPlan, PowerSplit, RoomShape, RoomSpec,
};
pub use scalar::Scalar;

pub type AbsorptionSpectrumF64 = AbsorptionSpectrum<f64>;
pub type AbsorptionSpectrumF32 = AbsorptionSpectrum<f32>;
pub type RadioConfigF64 = RadioConfig<f64>;
pub type RadioConfigF32 = RadioConfig<f32>;
pub type ScenarioF64 = Scenario<f64>;
pub type ScenarioF32 = Scenario<f32>;
pub type PlanResultF64 = PlanResult<f64>;
pub type PlanResultF32 = PlanResult<f32>;
pub type RoomSpecF64 = RoomSpec<f64>;
