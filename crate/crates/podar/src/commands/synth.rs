use std::path::PathBuf;

use serde::Serialize;

use podar_core::calibration::{DriverSignals, FitParams, RawSignals};
use podar_core::experiment::{build_grid_scenarios, generate_synthetic, GridConfig};

use super::OutputSet;
use crate::config::{parse_grid, parse_synth, DriverSpec};
use crate::error::Result;
use crate::manifest::{to_json, Input, RunManifest};
use crate::signals::write_signals;

#[derive(Debug, Clone)]
pub struct SynthArgs {
    pub spec: PathBuf,
    pub grid: Option<PathBuf>,
    pub out: PathBuf,
}

/// Ground truth for one generated driver.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroundTruth {
    #[serde(flatten)]
    pub spec: DriverSpec,
    /// Divisor that mapped the clean risk into `[0, 1]`.
    pub scale: f64,
    /// Parameters a perfect fit of the normalized signals recovers.
    pub effective: FitParams,
}

#[derive(Serialize)]
struct ResolvedConfig<'a> {
    grid: &'a GridConfig,
    drivers: &'a [DriverSpec],
}

pub fn run(args: &SynthArgs) -> Result<Vec<GroundTruth>> {
    let spec_input = Input::read(&args.spec)?;
    let grid_input = args.grid.as_deref().map(Input::read).transpose()?;
    let drivers = parse_synth(&spec_input)?;
    let grid = grid_input
        .as_ref()
        .map(parse_grid)
        .transpose()?
        .unwrap_or_default();
    let scenarios = build_grid_scenarios(&grid)?;

    let mut signals = Vec::with_capacity(drivers.len());
    let mut truth = Vec::with_capacity(drivers.len());
    for d in &drivers {
        let ds = generate_synthetic(&scenarios, &d.spec())?;
        truth.push(GroundTruth {
            spec: d.clone(),
            scale: ds.scale,
            effective: ds.effective,
        });
        signals.push(DriverSignals::new(d.id.clone(), ds.signals));
    }

    let mut csv = Vec::new();
    write_signals(&mut csv, &RawSignals::new(signals)).expect("writing to memory");
    let mut out = OutputSet::default();
    out.add("signals.csv", csv);
    out.add("ground_truth.json", to_json(&truth));
    let mut inputs = vec![spec_input.digest()];
    inputs.extend(grid_input.as_ref().map(Input::digest));
    out.manifest(&RunManifest::new(
        "synth",
        &ResolvedConfig {
            grid: &grid,
            drivers: &drivers,
        },
        inputs,
        None,
    )?);
    out.write(&args.out)?;
    Ok(truth)
}
