//! Objective-vs-subjective comparison of the attenuation parameters.

use alloc::string::String;
use alloc::vec::Vec;

use super::fit::CalibrationResult;
use super::metrics::{linear_fit, pearson};
use crate::error::{invalid, Result};

/// A driver is an outlier when its distance from the trend line is at least
/// this many times the RMS distance of all drivers.
pub const OUTLIER_RMS_FACTOR: f64 = 2.0;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DriverParameters {
    pub driver: String,
    pub a: f64,
    pub b: f64,
}

impl From<&CalibrationResult> for DriverParameters {
    fn from(r: &CalibrationResult) -> Self {
        Self {
            driver: r.driver.clone(),
            a: r.a,
            b: r.b,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ParameterComparison {
    /// `(objective, subjective)` per driver.
    pub pairs: Vec<(f64, f64)>,
    pub correlation: Option<f64>,
    /// Signed distance of each subjective value from the least-squares trend line.
    pub residuals: Vec<f64>,
    pub outliers: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SignalComparison {
    pub drivers: Vec<String>,
    pub a: ParameterComparison,
    pub b: ParameterComparison,
}

fn compare_one(
    drivers: &[String],
    objective: Vec<f64>,
    subjective: Vec<f64>,
) -> ParameterComparison {
    let (intercept, slope) = linear_fit(&objective, &subjective);
    let residuals: Vec<f64> = objective
        .iter()
        .zip(&subjective)
        .map(|(x, y)| y - (intercept + slope * x))
        .collect();
    let rms = libm::sqrt(residuals.iter().map(|r| r * r).sum::<f64>() / residuals.len() as f64);
    let scale = subjective.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut outliers = Vec::new();
    // below this the fit is exact up to rounding
    if rms > 1e-9 * scale {
        let (idx, worst) = residuals
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |(bi, bv), (i, r)| {
                if r.abs() > bv {
                    (i, r.abs())
                } else {
                    (bi, bv)
                }
            });
        if worst >= OUTLIER_RMS_FACTOR * rms {
            outliers.push(drivers[idx].clone());
        }
    }
    ParameterComparison {
        correlation: pearson(&objective, &subjective),
        pairs: objective.into_iter().zip(subjective).collect(),
        residuals,
        outliers,
    }
}

/// Pairs each driver's objective and subjective `A` and `B`, correlates them and
/// flags the driver farthest from each trend line when it stands out.
pub fn compare_signals(
    objective: &[DriverParameters],
    subjective: &[DriverParameters],
) -> Result<SignalComparison> {
    if objective.len() != subjective.len() || objective.is_empty() {
        return Err(invalid(
            "objective and subjective results cover different drivers",
        ));
    }
    let mut drivers = Vec::with_capacity(objective.len());
    let mut subj = Vec::with_capacity(objective.len());
    for o in objective {
        let s = subjective
            .iter()
            .find(|s| s.driver == o.driver)
            .ok_or_else(|| {
                invalid(alloc::format!(
                    "driver {} has no subjective result",
                    o.driver
                ))
            })?;
        drivers.push(o.driver.clone());
        subj.push(s);
    }
    if drivers
        .iter()
        .enumerate()
        .any(|(i, d)| drivers[..i].contains(d))
    {
        return Err(invalid("duplicate driver in objective results"));
    }
    let a = compare_one(
        &drivers,
        objective.iter().map(|p| p.a).collect(),
        subj.iter().map(|p| p.a).collect(),
    );
    let b = compare_one(
        &drivers,
        objective.iter().map(|p| p.b).collect(),
        subj.iter().map(|p| p.b).collect(),
    );
    Ok(SignalComparison { drivers, a, b })
}

/// Gap between the slowest- and fastest-decaying temporal attenuation curves,
/// `|e^{-a_min t} - e^{-a_max t}|`.
pub fn attenuation_spread(a_min: f64, a_max: f64, t: f64) -> f64 {
    libm::fabs(libm::exp(-a_min * t) - libm::exp(-a_max * t))
}

/// Time at which [`attenuation_spread`] peaks, `ln(a_max/a_min)/(a_max - a_min)`.
/// `None` when the rates coincide or the slower one is zero (no interior peak).
pub fn spread_peak_time(a_min: f64, a_max: f64) -> Option<f64> {
    let (lo, hi) = if a_min <= a_max {
        (a_min, a_max)
    } else {
        (a_max, a_min)
    };
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return None;
    }
    Some(libm::log(hi / lo) / (hi - lo))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use approx::assert_relative_eq;

    fn set(a: &[f64], b: &[f64]) -> Vec<DriverParameters> {
        a.iter()
            .zip(b)
            .enumerate()
            .map(|(i, (&a, &b))| DriverParameters {
                driver: format!("P{}", i + 1),
                a,
                b,
            })
            .collect()
    }

    const OBJ_A: [f64; 8] = [1.060, 0.836, 1.076, 1.079, 1.036, 1.446, 0.774, 1.015];
    const OBJ_B: [f64; 8] = [3.716, 1.577, 2.126, 0.850, 2.269, 1.399, 2.617, 0.941];
    const SUBJ_A: [f64; 8] = [0.506, 0.275, 0.170, 0.585, 0.655, 0.956, 0.273, 0.364];
    const SUBJ_B: [f64; 8] = [4.765, 2.125, 1.430, 0.575, 3.537, 7.115, 2.573, 0.886];

    #[test]
    fn spread_peak_of_published_objective_range() {
        let t = spread_peak_time(0.774, 1.446).unwrap();
        assert_relative_eq!(
            t,
            libm::log(1.446 / 0.774) / (1.446 - 0.774),
            epsilon = 1e-15
        );
        assert!((t - 0.93).abs() < 0.01, "{t}");
        let s = |x| attenuation_spread(0.774, 1.446, x);
        assert!(s(t) > s(t - 1e-3) && s(t) > s(t + 1e-3));
        assert_eq!(spread_peak_time(1.446, 0.774), Some(t));
        assert_eq!(spread_peak_time(1.0, 1.0), None);
        assert_eq!(spread_peak_time(0.0, 1.0), None);
        assert_eq!(attenuation_spread(0.5, 2.0, 0.0), 0.0);
    }

    #[test]
    fn identical_sets() {
        let s = set(&OBJ_A, &OBJ_B);
        let c = compare_signals(&s, &s).unwrap();
        assert_relative_eq!(c.a.correlation.unwrap(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(c.b.correlation.unwrap(), 1.0, epsilon = 1e-12);
        assert!(c.a.outliers.is_empty() && c.b.outliers.is_empty());
    }

    #[test]
    fn published_tables_flag_the_reported_outliers() {
        let c = compare_signals(&set(&OBJ_A, &OBJ_B), &set(&SUBJ_A, &SUBJ_B)).unwrap();
        assert!(c.a.pairs.iter().all(|(o, s)| o > s));
        assert_eq!(c.a.outliers, ["P3"]);
        assert_eq!(c.b.outliers, ["P6"]);
        assert!(c.a.correlation.unwrap() > 0.7);
    }

    #[test]
    fn injected_anticorrelated_pair_is_flagged() {
        let obj = set(&OBJ_A, &OBJ_B);
        let mut subj = obj.clone();
        // P4 moves against the trend in both parameters
        subj[3].a = 2.0 * 1.079 - 2.5;
        subj[3].b = 6.0;
        let c = compare_signals(&obj, &subj).unwrap();
        assert_eq!(c.a.outliers, ["P4"]);
        assert_eq!(c.b.outliers, ["P4"]);
    }

    #[test]
    fn driver_mismatch() {
        let obj = set(&OBJ_A, &OBJ_B);
        let mut subj = obj.clone();
        subj[2].driver = "P9".into();
        assert!(compare_signals(&obj, &subj).is_err());
        assert!(compare_signals(&obj, &obj[..7]).is_err());
    }

    #[test]
    fn driver_order_does_not_matter() {
        let obj = set(&OBJ_A, &OBJ_B);
        let mut subj = set(&SUBJ_A, &SUBJ_B);
        subj.reverse();
        let c = compare_signals(&obj, &subj).unwrap();
        assert_eq!(c.a.pairs[0], (1.060, 0.506));
    }
}
