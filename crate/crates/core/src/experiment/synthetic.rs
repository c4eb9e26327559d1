//! Signals generated from known parameters, for recovery tests.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::grid::ScenarioSet;
use crate::calibration::{predict, FitParams};
use crate::error::{Error, Result};
use crate::params::{PodarParams, DEFAULT_ALPHA, DEFAULT_DT};

/// Ground truth plus additive noise on the normalized signal scale.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SyntheticSpec {
    pub horizon: f64,
    pub k: f64,
    pub a: f64,
    pub b: f64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub sigma: f64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn noiseless(horizon: f64, k: f64, a: f64, b: f64) -> Self {
        Self {
            horizon,
            k,
            a,
            b,
            sigma: 0.0,
            seed: 0,
        }
    }

    pub fn params(&self) -> PodarParams {
        PodarParams {
            horizon: self.horizon,
            k: self.k,
            a: self.a,
            b: self.b,
            alpha: DEFAULT_ALPHA,
            dt: DEFAULT_DT,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params()
            .validate()
            .map_err(|e| Error::DegenerateSpec(alloc::format!("{e}")))?;
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(Error::DegenerateSpec(
                "noise sigma must be finite and non-negative".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticDataset {
    /// Signals in `[0, 1]`, one per scenario.
    pub signals: Vec<f64>,
    /// Ground-truth model risk before normalization.
    pub clean_podar: Vec<f64>,
    /// Total divisor applied to the ground-truth risk.
    pub scale: f64,
    /// Parameters that reproduce the noiseless signals exactly: `k` is divided
    /// by `scale`, `A` and `B` are unchanged.
    pub effective: FitParams,
}

/// Evaluates the ground truth on every scenario, normalizes by the largest
/// value, adds `N(0, σ)` noise clamped at zero and renormalizes into `[0, 1]`.
pub fn generate_synthetic(
    scenarios: &ScenarioSet,
    spec: &SyntheticSpec,
) -> Result<SyntheticDataset> {
    spec.validate()?;
    let clean = predict(&spec.params(), &scenarios.scenes)?;
    let peak = clean.iter().copied().fold(0.0, f64::max);
    if !(peak > 0.0) {
        return Err(Error::DegenerateSpec(
            "ground truth produces no risk on this grid".into(),
        ));
    }
    let mut signals: Vec<f64> = clean.iter().map(|p| p / peak).collect();
    let mut scale = peak;
    if spec.sigma > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let noise = Normal::new(0.0, spec.sigma)
            .map_err(|e| Error::DegenerateSpec(alloc::format!("{e}")))?;
        for s in signals.iter_mut() {
            *s = (*s + noise.sample(&mut rng)).max(0.0);
        }
        let renorm = signals.iter().copied().fold(0.0, f64::max);
        if !(renorm > 0.0) {
            return Err(Error::DegenerateSpec("noise zeroed every signal".into()));
        }
        signals.iter_mut().for_each(|s| *s /= renorm);
        scale *= renorm;
    }
    Ok(SyntheticDataset {
        signals,
        clean_podar: clean,
        scale,
        effective: FitParams::new(spec.k / scale, spec.a, spec.b),
    })
}
