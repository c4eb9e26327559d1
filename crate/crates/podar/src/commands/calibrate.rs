use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use podar_core::calibration::{
    calibrate, pick_best_horizon, standardize_objective, standardize_subjective, CalibrationConfig,
    CalibrationResult, SignalKind,
};
use podar_core::experiment::{build_grid_scenarios, GridConfig};
use podar_core::risk::{spatial_attenuation, temporal_attenuation};

use super::OutputSet;
use crate::config::parse_grid;
use crate::error::{CliError, Result};
use crate::format::sig6;
use crate::manifest::{to_json, Input, RunManifest};
use crate::signals::read_signals;

pub const TEMPORAL_STEP: f64 = 0.05;
pub const TEMPORAL_END: f64 = 7.0;
pub const SPATIAL_STEP: f64 = 0.02;
pub const SPATIAL_END: f64 = 3.0;

#[derive(Debug, Clone)]
pub struct CalibrateArgs {
    pub signals: PathBuf,
    pub grid: Option<PathBuf>,
    pub kind: SignalKind,
    pub out: PathBuf,
    pub learning_rate: Option<f64>,
    pub iterations: Option<usize>,
    pub horizons: Option<Vec<f64>>,
    pub seed: u64,
    pub workers: Option<usize>,
}

/// Fit at one candidate horizon, as stored next to the best result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateFit {
    pub horizon: f64,
    pub k: f64,
    pub a: f64,
    pub b: f64,
    pub r_squared: Option<f64>,
    pub final_loss: f64,
}

/// Contents of `results/<driver>.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriverRecord {
    pub driver: String,
    pub kind: SignalKind,
    pub best: CalibrationResult,
    pub candidates: Vec<CandidateFit>,
}

#[derive(Serialize)]
struct ResolvedConfig<'a> {
    kind: SignalKind,
    grid: &'a GridConfig,
    calibration: &'a CalibrationConfig,
    workers: usize,
}

fn sample_axis(end: f64, step: f64) -> Vec<f64> {
    let n = (end / step + 1e-9).floor() as usize;
    (0..=n).map(|i| i as f64 * step).collect()
}

pub fn run(args: &CalibrateArgs) -> Result<Vec<DriverRecord>> {
    let signals_input = Input::read(&args.signals)?;
    let grid_input = args.grid.as_deref().map(Input::read).transpose()?;
    let raw = read_signals(signals_input.bytes.as_slice(), &signals_input.path)?;
    let grid = grid_input
        .as_ref()
        .map(parse_grid)
        .transpose()?
        .unwrap_or_default();

    let mut config = CalibrationConfig::default();
    if let Some(lr) = args.learning_rate {
        config.learning_rate = lr;
    }
    if let Some(iters) = args.iterations {
        config.iterations = iters;
    }
    if let Some(h) = &args.horizons {
        config.horizons = h.clone();
    }
    config.validate()?;
    if config.horizons.is_empty() {
        return Err(CliError::Usage("no candidate horizons".into()));
    }

    let scenarios = build_grid_scenarios(&grid)?;
    let dataset = match args.kind {
        SignalKind::Objective => standardize_objective(&raw)?,
        SignalKind::Subjective => standardize_subjective(&raw)?,
    };
    if let Some(d) = dataset
        .drivers
        .iter()
        .find(|d| d.values.len() != scenarios.len())
    {
        return Err(CliError::Usage(format!(
            "driver {} has {} signals for {} scenarios",
            d.id,
            d.values.len(),
            scenarios.len()
        )));
    }

    let workers = args
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    let jobs: Vec<(usize, f64)> = (0..dataset.drivers.len())
        .flat_map(|d| config.horizons.iter().map(move |&h| (d, h)))
        .collect();
    let fits: Vec<CalibrationResult> = pool.install(|| {
        jobs.par_iter()
            .map(|&(d, h)| {
                calibrate(
                    &dataset.drivers[d],
                    args.kind,
                    &scenarios.scenes,
                    h,
                    &config,
                )
            })
            .collect::<podar_core::Result<_>>()
    })?;

    let per_driver = config.horizons.len();
    let records: Vec<DriverRecord> = fits
        .chunks(per_driver)
        .map(|chunk| {
            let best = pick_best_horizon(chunk).expect("at least one candidate");
            DriverRecord {
                driver: chunk[best].driver.clone(),
                kind: args.kind,
                best: chunk[best].clone(),
                candidates: chunk
                    .iter()
                    .map(|r| CandidateFit {
                        horizon: r.horizon,
                        k: r.k,
                        a: r.a,
                        b: r.b,
                        r_squared: r.r_squared,
                        final_loss: r.final_loss,
                    })
                    .collect(),
            }
        })
        .collect();

    let mut out = OutputSet::default();
    let mut summary = String::from("driver,horizon,k,a,b,r_squared\n");
    for r in &records {
        let b = &r.best;
        let r2 = b.r_squared.map_or_else(|| "NA".to_string(), sig6);
        summary.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.driver,
            sig6(b.horizon),
            sig6(b.k),
            sig6(b.a),
            sig6(b.b),
            r2
        ));
        out.add(format!("results/{}.json", r.driver), to_json(r));
        let params = toml::to_string(&b.params())
            .map_err(|e| CliError::Usage(format!("params not serializable: {e}")))?;
        out.add(format!("params/{}.toml", r.driver), params.into_bytes());
    }
    out.add("summary.csv", summary.into_bytes());
    out.add(
        "curves_temporal.csv",
        curve_csv(
            "t",
            &sample_axis(TEMPORAL_END, TEMPORAL_STEP),
            &records,
            |x, r| temporal_attenuation(x, r.best.a),
        ),
    );
    out.add(
        "curves_spatial.csv",
        curve_csv(
            "d",
            &sample_axis(SPATIAL_END, SPATIAL_STEP),
            &records,
            |x, r| spatial_attenuation(x, r.best.b),
        ),
    );

    let mut inputs = vec![signals_input.digest()];
    inputs.extend(grid_input.as_ref().map(Input::digest));
    let resolved = ResolvedConfig {
        kind: args.kind,
        grid: &grid,
        calibration: &config,
        workers,
    };
    out.manifest(&RunManifest::new(
        "calibrate",
        &resolved,
        inputs,
        Some(args.seed),
    )?);
    out.write(&args.out)?;
    Ok(records)
}

fn curve_csv(
    axis: &str,
    xs: &[f64],
    records: &[DriverRecord],
    f: impl Fn(f64, &DriverRecord) -> podar_core::Result<f64>,
) -> Vec<u8> {
    let mut text = String::from(axis);
    for r in records {
        text.push(',');
        text.push_str(&r.driver);
    }
    text.push('\n');
    for &x in xs {
        text.push_str(&sig6(x));
        for r in records {
            text.push(',');
            text.push_str(&sig6(
                f(x, r).expect("sample points and fitted rates are non-negative"),
            ));
        }
        text.push('\n');
    }
    text.into_bytes()
}

/// Reads every `results/*.json` record under a calibrate output directory,
/// sorted by file name.
pub fn load_records(dir: &Path) -> Result<Vec<DriverRecord>> {
    let results = dir.join("results");
    let entries = std::fs::read_dir(&results).map_err(|e| CliError::io(&results, e))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| CliError::io(&results, e))?.path();
        if path.extension().is_some_and(|e| e == "json") {
            paths.push(path);
        }
    }
    paths.sort();
    if paths.is_empty() {
        return Err(CliError::parse(&results, "no result records"));
    }
    paths
        .iter()
        .map(|p| {
            let input = Input::read(p)?;
            serde_json::from_slice(&input.bytes).map_err(|e| CliError::parse(p, e))
        })
        .collect()
}
