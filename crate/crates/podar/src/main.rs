use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use podar::commands::{calibrate, evaluate, report, synth};
use podar_core::calibration::SignalKind;

#[derive(Parser)]
#[command(
    name = "podar",
    version,
    about = "Calibrate and evaluate the PODAR driving-risk model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Objective,
    Subjective,
}

impl From<Kind> for SignalKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Objective => SignalKind::Objective,
            Kind::Subjective => SignalKind::Subjective,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Fit per-driver parameters to a signal file.
    Calibrate {
        #[arg(long)]
        signals: PathBuf,
        /// Grid layout (TOML). Built-in layout when omitted.
        #[arg(long)]
        grid: Option<PathBuf>,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, env = "PODAR_OUT_DIR")]
        out: PathBuf,
        /// Adam learning rate.
        #[arg(long)]
        lr: Option<f64>,
        /// Optimizer iterations per candidate horizon.
        #[arg(long)]
        iters: Option<usize>,
        /// Candidate horizons in seconds, comma separated.
        #[arg(long, value_delimiter = ',')]
        horizons: Option<Vec<f64>>,
        /// Recorded in the manifest; the optimizer itself is deterministic.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Evaluate one scene under fixed parameters.
    Evaluate {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        params: PathBuf,
        /// Write breakdown.csv and a manifest here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the result as JSON with full precision.
        #[arg(long)]
        json: bool,
    },
    /// Generate signals from known parameters.
    Synth {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        grid: Option<PathBuf>,
        #[arg(long, env = "PODAR_OUT_DIR")]
        out: PathBuf,
    },
    /// Compare objective and subjective calibration results.
    Report {
        #[arg(long)]
        objective: PathBuf,
        #[arg(long)]
        subjective: PathBuf,
        #[arg(long, env = "PODAR_OUT_DIR")]
        out: PathBuf,
        /// Times (s) for the temporal attenuation table.
        #[arg(long, value_delimiter = ',', default_values_t = report::DEFAULT_TIMES)]
        times: Vec<f64>,
        /// Distances (m) for the spatial attenuation table.
        #[arg(long, value_delimiter = ',', default_values_t = report::DEFAULT_DISTANCES)]
        distances: Vec<f64>,
    },
}

fn run(cli: Cli) -> podar::Result<()> {
    match cli.command {
        Command::Calibrate {
            signals,
            grid,
            kind,
            out,
            lr,
            iters,
            horizons,
            seed,
            workers,
        } => {
            let args = calibrate::CalibrateArgs {
                signals,
                grid,
                kind: kind.into(),
                out,
                learning_rate: lr,
                iterations: iters,
                horizons,
                seed,
                workers,
            };
            let records = calibrate::run(&args)?;
            println!(
                "calibrated {} drivers into {}",
                records.len(),
                args.out.display()
            );
        }
        Command::Evaluate {
            scene,
            params,
            out,
            json,
        } => {
            let summary = evaluate::run(&evaluate::EvaluateArgs {
                scene,
                params,
                out,
                json,
            })?;
            print!("{}", summary.render(json));
        }
        Command::Synth { spec, grid, out } => {
            let truth = synth::run(&synth::SynthArgs {
                spec,
                grid,
                out: out.clone(),
            })?;
            println!("generated {} drivers into {}", truth.len(), out.display());
        }
        Command::Report {
            objective,
            subjective,
            out,
            times,
            distances,
        } => {
            let report = report::run(&report::ReportArgs {
                objective,
                subjective,
                out,
                times,
                distances,
            })?;
            print!("{}", report.render());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
