use alloc::string::String;
use alloc::vec::Vec;

use super::adam::Adam;
use super::metrics::r_squared;
use super::objective::{mse, predict, CompiledProblem, FitParams};
use super::signals::{DriverSignals, SignalKind};
use crate::error::{invalid, Error, Result};
use crate::params::{PodarParams, DEFAULT_ALPHA, DEFAULT_DT};
use crate::risk::Scene;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct CalibrationConfig {
    pub learning_rate: f64,
    pub iterations: usize,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    /// Candidate prediction horizons, seconds.
    pub horizons: Vec<f64>,
    pub init: FitParams,
    /// Keep every n-th loss in the trace.
    pub trace_every: usize,
    pub alpha: f64,
    pub dt: f64,
}

impl Default for CalibrationConfig {
    fn default() -> Self {
        Self {
            learning_rate: 1e-4,
            iterations: 100_000,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            horizons: (1..=7).map(f64::from).collect(),
            init: FitParams::new(1.0, 1.0, 1.0),
            trace_every: 100,
            alpha: DEFAULT_ALPHA,
            dt: DEFAULT_DT,
        }
    }
}

impl CalibrationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidConfig(
                "learning rate must be positive".into(),
            ));
        }
        if self.iterations == 0 {
            return Err(Error::InvalidConfig("iterations must be at least 1".into()));
        }
        if !((0.0..1.0).contains(&self.beta1) && (0.0..1.0).contains(&self.beta2)) {
            return Err(Error::InvalidConfig(
                "moment decay rates must lie in [0, 1)".into(),
            ));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidConfig("epsilon must be positive".into()));
        }
        if self.trace_every == 0 {
            return Err(Error::InvalidConfig(
                "trace_every must be at least 1".into(),
            ));
        }
        let init = self.init;
        if !(init.k >= 0.0 && init.a >= 0.0 && init.b >= 0.0) {
            return Err(Error::InvalidConfig(
                "initial parameters must be non-negative".into(),
            ));
        }
        for &h in &self.horizons {
            init.with_model(h, self.alpha, self.dt)
                .validate()
                .map_err(|e| Error::InvalidConfig(alloc::format!("horizon {h}: {e}")))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CalibrationResult {
    pub driver: String,
    pub kind: SignalKind,
    /// Prediction horizon `T`, seconds.
    pub horizon: f64,
    pub k: f64,
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub dt: f64,
    pub iterations: usize,
    pub final_loss: f64,
    /// Loss before iterations `0, trace_every, 2·trace_every, …`.
    pub loss_trace: Vec<f64>,
    pub trace_every: usize,
    /// `None` when the observed signal is constant.
    pub r_squared: Option<f64>,
    pub observed: Vec<f64>,
    pub predicted: Vec<f64>,
    /// `observed - predicted`.
    pub residuals: Vec<f64>,
}

impl CalibrationResult {
    pub fn params(&self) -> PodarParams {
        FitParams::new(self.k, self.a, self.b).with_model(self.horizon, self.alpha, self.dt)
    }
}

/// Fits `(k, A, B)` for one driver at a fixed horizon with full-batch Adam,
/// projecting onto `[0, ∞)` after every step. Returns the final iterate.
pub fn calibrate(
    driver: &DriverSignals,
    kind: SignalKind,
    scenarios: &[Scene],
    horizon: f64,
    config: &CalibrationConfig,
) -> Result<CalibrationResult> {
    config.validate()?;
    let problem =
        CompiledProblem::new(scenarios, &driver.values, horizon, config.alpha, config.dt)?;

    let mut theta = config.init.to_array();
    let mut adam = Adam::<3>::new(
        config.learning_rate,
        config.beta1,
        config.beta2,
        config.epsilon,
    );
    let mut trace = Vec::with_capacity(config.iterations / config.trace_every + 1);
    for it in 0..config.iterations {
        let (l, grad) = problem.evaluate(&FitParams::from_array(theta));
        if it % config.trace_every == 0 {
            trace.push(l);
        }
        if !l.is_finite() || !grad.is_finite() {
            return Err(Error::OptimizationFailure {
                horizon,
                iteration: it,
                trace,
            });
        }
        adam.step(&mut theta, &grad.to_array());
        for x in theta.iter_mut() {
            *x = x.max(0.0);
        }
    }

    let fit = FitParams::from_array(theta);
    let params = fit.with_model(horizon, config.alpha, config.dt);
    let predicted = predict(&params, scenarios)?;
    let final_loss = mse(&predicted, &driver.values);
    if !final_loss.is_finite() {
        return Err(Error::OptimizationFailure {
            horizon,
            iteration: config.iterations,
            trace,
        });
    }
    let residuals = driver
        .values
        .iter()
        .zip(&predicted)
        .map(|(o, p)| o - p)
        .collect();
    Ok(CalibrationResult {
        driver: driver.id.clone(),
        kind,
        horizon,
        k: fit.k,
        a: fit.a,
        b: fit.b,
        alpha: config.alpha,
        dt: config.dt,
        iterations: config.iterations,
        final_loss,
        loss_trace: trace,
        trace_every: config.trace_every,
        r_squared: r_squared(&predicted, &driver.values).ok(),
        observed: driver.values.clone(),
        predicted,
        residuals,
    })
}

/// Index of the result with the highest R², ties going to the shorter horizon.
pub fn pick_best_horizon(results: &[CalibrationResult]) -> Option<usize> {
    let mut order: Vec<usize> = (0..results.len()).collect();
    order.sort_by(|&i, &j| results[i].horizon.total_cmp(&results[j].horizon));
    let mut best: Option<(usize, f64)> = None;
    for i in order {
        let r2 = results[i].r_squared.unwrap_or(f64::NEG_INFINITY);
        match best {
            Some((_, b)) if r2 <= b => {}
            _ => best = Some((i, r2)),
        }
    }
    best.map(|(i, _)| i)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HorizonSelection {
    /// Index into `results`.
    pub best: usize,
    /// One result per candidate, in candidate order.
    pub results: Vec<CalibrationResult>,
}

impl HorizonSelection {
    pub fn best_result(&self) -> &CalibrationResult {
        &self.results[self.best]
    }
}

/// Calibrates at every candidate horizon and keeps the best fit.
pub fn select_horizon(
    driver: &DriverSignals,
    kind: SignalKind,
    scenarios: &[Scene],
    config: &CalibrationConfig,
) -> Result<HorizonSelection> {
    if config.horizons.is_empty() {
        return Err(invalid("empty horizon candidate set"));
    }
    let results = config
        .horizons
        .iter()
        .map(|&h| calibrate(driver, kind, scenarios, h, config))
        .collect::<Result<Vec<_>>>()?;
    let best = pick_best_horizon(&results).expect("non-empty candidate set");
    Ok(HorizonSelection { best, results })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vec2;
    use crate::object::RoadObject;
    use alloc::vec;

    fn scenes() -> Vec<Scene> {
        [
            (25.0, 0.0),
            (50.0, 0.0),
            (50.0, 1.5),
            (75.0, 0.0),
            (25.0, -2.0),
        ]
        .iter()
        .map(|&(x, y)| {
            Scene::new(
                RoadObject::host(Vec2::ZERO, Vec2::new(25.0, 0.0)),
                vec![RoadObject::static_point("o", Vec2::new(x, y))],
            )
        })
        .collect()
    }

    #[test]
    fn all_zero_data_from_zero_k_stays_put() {
        let config = CalibrationConfig {
            iterations: 500,
            init: FitParams::new(0.0, 1.0, 1.0),
            ..Default::default()
        };
        let driver = DriverSignals::new("P1", vec![0.0; 5]);
        let r = calibrate(&driver, SignalKind::Objective, &scenes(), 3.0, &config).unwrap();
        assert_eq!(r.k, 0.0);
        assert_eq!(r.final_loss, 0.0);
        assert_eq!(r.r_squared, None);
        assert_eq!(r.loss_trace.len(), 5);
    }

    #[test]
    fn deterministic_traces() {
        let config = CalibrationConfig {
            iterations: 3000,
            learning_rate: 1e-3,
            ..Default::default()
        };
        let driver = DriverSignals::new("P1", vec![0.3, 0.1, 0.02, 0.05, 0.0]);
        let a = calibrate(&driver, SignalKind::Objective, &scenes(), 3.0, &config).unwrap();
        let b = calibrate(&driver, SignalKind::Objective, &scenes(), 3.0, &config).unwrap();
        assert_eq!(a, b);
        assert!(a.k >= 0.0 && a.a >= 0.0 && a.b >= 0.0);
        assert!(a.final_loss < a.loss_trace[0]);
    }

    #[test]
    fn divergence_reported_with_trace() {
        let config = CalibrationConfig {
            iterations: 10,
            ..Default::default()
        };
        let driver = DriverSignals::new("P1", vec![f64::NAN, 0.1, 0.02, 0.05, 0.0]);
        match calibrate(&driver, SignalKind::Objective, &scenes(), 3.0, &config) {
            Err(Error::OptimizationFailure {
                horizon,
                iteration,
                trace,
            }) => {
                assert_eq!(horizon, 3.0);
                assert_eq!(iteration, 0);
                assert_eq!(trace.len(), 1);
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn config_validation() {
        let mut c = CalibrationConfig::default();
        assert!(c.validate().is_ok());
        c.learning_rate = 0.0;
        assert!(c.validate().is_err());
        let c = CalibrationConfig {
            iterations: 0,
            ..Default::default()
        };
        assert!(c.validate().is_err());
        let c = CalibrationConfig {
            horizons: vec![0.05],
            ..Default::default()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn single_candidate_is_returned() {
        let config = CalibrationConfig {
            iterations: 50,
            horizons: vec![5.0],
            ..Default::default()
        };
        let driver = DriverSignals::new("P1", vec![0.3, 0.1, 0.02, 0.05, 0.0]);
        let sel = select_horizon(&driver, SignalKind::Subjective, &scenes(), &config).unwrap();
        assert_eq!(sel.best, 0);
        assert_eq!(sel.best_result().horizon, 5.0);
        let empty = CalibrationConfig {
            horizons: vec![],
            ..config
        };
        assert!(select_horizon(&driver, SignalKind::Subjective, &scenes(), &empty).is_err());
    }
}
