//! Potential-damage driving risk (PODAR) and per-driver parameter calibration.
//!
//! The risk of a scene is the largest attenuated potential damage over all
//! surrounding objects and all predicted timesteps:
//!
//! ```text
//! PODAR = max_{t,n} k · G(t, n) · exp(-A·t) · exp(-B·d(t, n))
//! ```
//!
//! where `G` is a kinetic-energy-like virtual collision damage and `d` the
//! contour gap between host and object. Four parameters describe a driver:
//! the prediction horizon `T`, the damage scale `k`, and the temporal and
//! spatial attenuation rates `A` and `B`.
//!
//! The crate is `no_std` (with `alloc`); file formats, the command line and
//! parallel job scheduling live in the `podar` companion crate.
//!
//! ```
//! use podar_core::{podar_scene, PodarParams, RoadObject, Vec2};
//!
//! let host = RoadObject::host(Vec2::ZERO, Vec2::new(25.0, 0.0));
//! let obstacle = RoadObject::static_point("O1", Vec2::new(50.0, 0.0));
//! let params = PodarParams::new(7.0, 1.0, 0.0, 0.0).unwrap();
//! let risk = podar_scene(&host, &[obstacle], &params).unwrap();
//! assert!((risk.final_podar - 1125.0).abs() < 1e-9);
//! ```

#![cfg_attr(not(feature = "std"), no_std)]
// `!(x > 0.0)` style checks reject NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod calibration;
mod error;
pub mod experiment;
pub mod geometry;
pub mod kinematics;
pub mod object;
pub mod params;
pub mod risk;

pub use calibration::{
    analytic_gradient, calibrate, compare_signals, loss, pick_best_horizon, r_squared,
    select_horizon, standardize_objective, standardize_subjective, CalibrationConfig,
    CalibrationResult, FitParams, Gradient, RawSignals, SignalKind, StandardizedDataset,
};
pub use error::{Error, Result};
pub use experiment::{
    build_grid_scenarios, generate_synthetic, GridConfig, ScenarioSet, SyntheticDataset,
    SyntheticSpec,
};
pub use geometry::{contour_distance, BodyGeometry, Vec2};
pub use kinematics::{predict_constant_velocity, KinematicState, Trajectory};
pub use object::{ObjectType, RoadObject};
pub use params::PodarParams;
pub use risk::{
    closing_speed, podar_scene, potential_damage, spatial_attenuation, temporal_attenuation,
    RiskBreakdown, RiskCell, Scene,
};
