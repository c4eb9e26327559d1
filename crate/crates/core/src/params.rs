use crate::error::{invalid, Result};

/// Weight between velocity differential and velocity magnitude in the closing speed.
pub const DEFAULT_ALPHA: f64 = 0.7;
/// Prediction timestep, seconds.
pub const DEFAULT_DT: f64 = 0.1;

/// Per-driver model parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PodarParams {
    /// Prediction horizon `T`, seconds.
    pub horizon: f64,
    /// Damage scale `k`.
    pub k: f64,
    /// Temporal attenuation rate `A`, 1/s.
    pub a: f64,
    /// Spatial attenuation rate `B`, 1/m.
    pub b: f64,
    #[cfg_attr(feature = "serde", serde(default = "default_alpha"))]
    pub alpha: f64,
    #[cfg_attr(feature = "serde", serde(default = "default_dt"))]
    pub dt: f64,
}

#[cfg(feature = "serde")]
fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}

#[cfg(feature = "serde")]
fn default_dt() -> f64 {
    DEFAULT_DT
}

impl PodarParams {
    /// Parameters with the default `alpha` and `dt`.
    pub fn new(horizon: f64, k: f64, a: f64, b: f64) -> Result<Self> {
        let p = Self {
            horizon,
            k,
            a,
            b,
            alpha: DEFAULT_ALPHA,
            dt: DEFAULT_DT,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let all_finite = [self.horizon, self.k, self.a, self.b, self.alpha, self.dt]
            .iter()
            .all(|v| v.is_finite());
        if !all_finite {
            return Err(invalid("parameters must be finite"));
        }
        if self.horizon <= 0.0 {
            return Err(invalid("horizon T must be positive"));
        }
        if self.k < 0.0 || self.a < 0.0 || self.b < 0.0 {
            return Err(invalid("k, A and B must be non-negative"));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(invalid("alpha must lie in [0, 1]"));
        }
        if !(self.dt > 0.0 && self.dt <= self.horizon) {
            return Err(invalid("dt must satisfy 0 < dt <= T"));
        }
        Ok(())
    }

    pub fn with_k(self, k: f64) -> Self {
        Self { k, ..self }
    }
}
