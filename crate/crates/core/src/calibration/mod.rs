//! Signal standardization, parameter fitting and goodness of fit.

mod adam;
mod compare;
mod fit;
mod metrics;
mod objective;
mod signals;

pub use adam::Adam;
pub use compare::{
    attenuation_spread, compare_signals, spread_peak_time, DriverParameters, ParameterComparison,
    SignalComparison, OUTLIER_RMS_FACTOR,
};
pub use fit::{
    calibrate, pick_best_horizon, select_horizon, CalibrationConfig, CalibrationResult,
    HorizonSelection,
};
pub use metrics::{linear_fit, mean, pearson, r_squared};
pub use objective::{analytic_gradient, loss, predict, CompiledProblem, FitParams, Gradient};
pub use signals::{
    standardize_objective, standardize_subjective, DriverSignals, Normalization,
    NormalizationScope, RawSignals, SignalKind, StandardizedDataset, MSA_THRESHOLD_DEG,
};
