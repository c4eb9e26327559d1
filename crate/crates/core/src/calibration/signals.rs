use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};

/// MSA values below this many degrees are treated as unconscious steering.
pub const MSA_THRESHOLD_DEG: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SignalKind {
    /// Maximum steering angle, degrees.
    Objective,
    /// Oral response number, unitless.
    Subjective,
}

impl SignalKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SignalKind::Objective => "objective",
            SignalKind::Subjective => "subjective",
        }
    }
}

impl core::str::FromStr for SignalKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "objective" => Ok(SignalKind::Objective),
            "subjective" => Ok(SignalKind::Subjective),
            other => Err(invalid(alloc::format!("unknown signal kind {other:?}"))),
        }
    }
}

/// One driver's signal, indexed by obstacle (`values[i]` is obstacle `i + 1`).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DriverSignals {
    pub id: String,
    pub values: Vec<f64>,
}

impl DriverSignals {
    pub fn new(id: impl Into<String>, values: Vec<f64>) -> Self {
        Self {
            id: id.into(),
            values,
        }
    }
}

/// Signals as recorded, before thresholding and normalization.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RawSignals {
    pub drivers: Vec<DriverSignals>,
}

impl RawSignals {
    pub fn new(drivers: Vec<DriverSignals>) -> Self {
        Self { drivers }
    }

    fn validate(&self) -> Result<()> {
        let Some(first) = self.drivers.first() else {
            return Err(invalid("no drivers"));
        };
        for d in &self.drivers {
            if d.values.len() != first.values.len() {
                return Err(invalid(alloc::format!(
                    "driver {} has {} values, expected {}",
                    d.id,
                    d.values.len(),
                    first.values.len()
                )));
            }
            if d.values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                return Err(invalid(alloc::format!(
                    "driver {} has negative or non-finite values",
                    d.id
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum NormalizationScope {
    Global,
    PerDriver,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Normalization {
    /// Values strictly below this were zeroed first.
    pub threshold: Option<f64>,
    pub scope: NormalizationScope,
    /// Divisor applied to each driver, in driver order.
    pub divisors: Vec<f64>,
}

/// Signals mapped into `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StandardizedDataset {
    pub kind: SignalKind,
    pub drivers: Vec<DriverSignals>,
    pub normalization: Normalization,
}

impl StandardizedDataset {
    pub fn driver(&self, id: &str) -> Option<&DriverSignals> {
        self.drivers.iter().find(|d| d.id == id)
    }
}

fn max_of(values: &[f64]) -> f64 {
    values.iter().copied().fold(0.0, f64::max)
}

/// Zeroes MSAs below 2° and divides every driver by the single largest MSA.
pub fn standardize_objective(raw: &RawSignals) -> Result<StandardizedDataset> {
    raw.validate()?;
    let thresholded: Vec<DriverSignals> = raw
        .drivers
        .iter()
        .map(|d| DriverSignals {
            id: d.id.clone(),
            values: d
                .values
                .iter()
                .map(|&v| if v < MSA_THRESHOLD_DEG { 0.0 } else { v })
                .collect(),
        })
        .collect();
    let global = thresholded
        .iter()
        .map(|d| max_of(&d.values))
        .fold(0.0, f64::max);
    if global <= 0.0 {
        return Err(Error::DegenerateNormalization { driver: None });
    }
    let drivers = thresholded
        .into_iter()
        .map(|d| DriverSignals {
            values: d.values.iter().map(|v| v / global).collect(),
            id: d.id,
        })
        .collect::<Vec<_>>();
    Ok(StandardizedDataset {
        kind: SignalKind::Objective,
        normalization: Normalization {
            threshold: Some(MSA_THRESHOLD_DEG),
            scope: NormalizationScope::Global,
            divisors: alloc::vec![global; drivers.len()],
        },
        drivers,
    })
}

/// Divides each driver's responses by that driver's own maximum.
pub fn standardize_subjective(raw: &RawSignals) -> Result<StandardizedDataset> {
    raw.validate()?;
    let mut divisors = Vec::with_capacity(raw.drivers.len());
    let mut drivers = Vec::with_capacity(raw.drivers.len());
    for d in &raw.drivers {
        let m = max_of(&d.values);
        if m <= 0.0 {
            return Err(Error::DegenerateNormalization {
                driver: Some(d.id.clone()),
            });
        }
        divisors.push(m);
        drivers.push(DriverSignals {
            id: d.id.clone(),
            values: d.values.iter().map(|v| v / m).collect(),
        });
    }
    Ok(StandardizedDataset {
        kind: SignalKind::Subjective,
        drivers,
        normalization: Normalization {
            threshold: None,
            scope: NormalizationScope::PerDriver,
            divisors,
        },
    })
}
