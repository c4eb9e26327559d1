use std::path::PathBuf;

use serde::Serialize;

use podar_core::calibration::{
    attenuation_spread, compare_signals, spread_peak_time, DriverParameters, SignalComparison,
    SignalKind,
};
use podar_core::risk::{spatial_attenuation, temporal_attenuation};

use super::calibrate::{load_records, DriverRecord, TEMPORAL_END, TEMPORAL_STEP};
use super::OutputSet;
use crate::error::{CliError, Result};
use crate::format::sig6;
use crate::manifest::{to_json, Input, InputDigest, RunManifest};

pub const DEFAULT_TIMES: [f64; 2] = [2.0, 3.0];
pub const DEFAULT_DISTANCES: [f64; 2] = [1.0, 2.0];

#[derive(Debug, Clone)]
pub struct ReportArgs {
    pub objective: PathBuf,
    pub subjective: PathBuf,
    pub out: PathBuf,
    pub times: Vec<f64>,
    pub distances: Vec<f64>,
}

/// Fastest and slowest temporal decay among a set of drivers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Spread {
    pub a_min: f64,
    pub a_max: f64,
    /// `None` when the curves never separate or separate without a peak.
    pub peak_time: Option<f64>,
}

impl Spread {
    pub fn of(a: impl IntoIterator<Item = f64>) -> Option<Self> {
        let (lo, hi) = a
            .into_iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
                (lo.min(x), hi.max(x))
            });
        (lo <= hi).then(|| Spread {
            a_min: lo,
            a_max: hi,
            peak_time: spread_peak_time(lo, hi),
        })
    }

    pub fn at(&self, t: f64) -> f64 {
        attenuation_spread(self.a_min, self.a_max, t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub comparison: SignalComparison,
    pub objective_spread: Spread,
    pub subjective_spread: Spread,
}

#[derive(Serialize)]
struct ResolvedConfig<'a> {
    times: &'a [f64],
    distances: &'a [f64],
}

fn check_kind(records: &[DriverRecord], kind: SignalKind, dir: &std::path::Path) -> Result<()> {
    match records.iter().find(|r| r.kind != kind) {
        Some(r) => Err(CliError::parse(
            dir,
            format!(
                "driver {} was calibrated on {} signals, expected {}",
                r.driver,
                r.kind.as_str(),
                kind.as_str()
            ),
        )),
        None => Ok(()),
    }
}

fn digests(records_dir: &std::path::Path) -> Result<Vec<InputDigest>> {
    let results = records_dir.join("results");
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&results)
        .map_err(|e| CliError::io(&results, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| Input::read(p).map(|i| i.digest()))
        .collect()
}

pub fn run(args: &ReportArgs) -> Result<Report> {
    if args
        .times
        .iter()
        .chain(&args.distances)
        .any(|x| !(x.is_finite() && *x >= 0.0))
    {
        return Err(CliError::Usage(
            "threshold times and distances must be non-negative".into(),
        ));
    }
    let objective = load_records(&args.objective)?;
    let subjective = load_records(&args.subjective)?;
    check_kind(&objective, SignalKind::Objective, &args.objective)?;
    check_kind(&subjective, SignalKind::Subjective, &args.subjective)?;
    let params = |rs: &[DriverRecord]| {
        rs.iter()
            .map(|r| DriverParameters::from(&r.best))
            .collect::<Vec<_>>()
    };
    let comparison = compare_signals(&params(&objective), &params(&subjective))?;
    let objective_spread =
        Spread::of(objective.iter().map(|r| r.best.a)).expect("records are non-empty");
    let subjective_spread =
        Spread::of(subjective.iter().map(|r| r.best.a)).expect("records are non-empty");

    let mut table = String::from("driver,a_objective,a_subjective,b_objective,b_subjective\n");
    for (i, d) in comparison.drivers.iter().enumerate() {
        let (ao, as_) = comparison.a.pairs[i];
        let (bo, bs) = comparison.b.pairs[i];
        table.push_str(&format!(
            "{d},{},{},{},{}\n",
            sig6(ao),
            sig6(as_),
            sig6(bo),
            sig6(bs)
        ));
    }

    let mut spread = String::from("t,objective,subjective\n");
    let n = (TEMPORAL_END / TEMPORAL_STEP + 1e-9).floor() as usize;
    for i in 0..=n {
        let t = i as f64 * TEMPORAL_STEP;
        spread.push_str(&format!(
            "{},{},{}\n",
            sig6(t),
            sig6(objective_spread.at(t)),
            sig6(subjective_spread.at(t))
        ));
    }

    let mut thresholds = String::from("driver,kind");
    for t in &args.times {
        thresholds.push_str(&format!(",omega_t_at_{t}s"));
    }
    for d in &args.distances {
        thresholds.push_str(&format!(",omega_d_at_{d}m"));
    }
    thresholds.push('\n');
    for r in objective.iter().chain(&subjective) {
        thresholds.push_str(&format!("{},{}", r.driver, r.kind.as_str()));
        for &t in &args.times {
            thresholds.push_str(&format!(",{}", sig6(temporal_attenuation(t, r.best.a)?)));
        }
        for &d in &args.distances {
            thresholds.push_str(&format!(",{}", sig6(spatial_attenuation(d, r.best.b)?)));
        }
        thresholds.push('\n');
    }

    let report = Report {
        comparison,
        objective_spread,
        subjective_spread,
    };
    let mut out = OutputSet::default();
    out.add("comparison.json", to_json(&report));
    out.add("comparison.csv", table.into_bytes());
    out.add("spread.csv", spread.into_bytes());
    out.add("thresholds.csv", thresholds.into_bytes());
    let mut inputs = digests(&args.objective)?;
    inputs.extend(digests(&args.subjective)?);
    let resolved = ResolvedConfig {
        times: &args.times,
        distances: &args.distances,
    };
    out.manifest(&RunManifest::new("report", &resolved, inputs, None)?);
    out.write(&args.out)?;
    Ok(report)
}

impl Report {
    pub fn render(&self) -> String {
        let corr = |c: Option<f64>| c.map_or_else(|| "NA".to_string(), sig6);
        let peak = |s: &Spread| s.peak_time.map_or_else(|| "NA".to_string(), sig6);
        let c = &self.comparison;
        format!(
            "correlation_a {}\ncorrelation_b {}\noutliers_a {}\noutliers_b {}\nspread_peak_objective {}\nspread_peak_subjective {}\n",
            corr(c.a.correlation),
            corr(c.b.correlation),
            c.a.outliers.join(" "),
            c.b.outliers.join(" "),
            peak(&self.objective_spread),
            peak(&self.subjective_spread),
        )
    }
}
