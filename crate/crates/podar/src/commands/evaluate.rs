use std::path::PathBuf;

use serde::Serialize;

use podar_core::params::PodarParams;
use podar_core::risk::{RiskBreakdown, Scene};

use super::OutputSet;
use crate::config::{parse_params, parse_scene};
use crate::error::Result;
use crate::format::sig6;
use crate::manifest::{to_json, Input, RunManifest};

#[derive(Debug, Clone)]
pub struct EvaluateArgs {
    pub scene: PathBuf,
    pub params: PathBuf,
    /// Directory for `breakdown.csv` and the manifest.
    pub out: Option<PathBuf>,
    pub json: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluateSummary {
    pub final_podar: f64,
    pub argmax_object: String,
    pub argmax_step: usize,
    pub argmax_time: f64,
}

impl EvaluateSummary {
    fn of(b: &RiskBreakdown) -> Self {
        Self {
            final_podar: b.final_podar,
            argmax_object: b.argmax_id.clone(),
            argmax_step: b.argmax_step,
            argmax_time: b.argmax_cell().time,
        }
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            return String::from_utf8(to_json(self)).expect("JSON is UTF-8");
        }
        format!(
            "final_podar {}\nargmax_object {}\nargmax_step {}\nargmax_time {}\n",
            sig6(self.final_podar),
            self.argmax_object,
            self.argmax_step,
            sig6(self.argmax_time)
        )
    }
}

pub fn breakdown_csv(scene: &Scene, b: &RiskBreakdown) -> Vec<u8> {
    let mut text = String::from("object,step,time,distance,damage,omega_t,omega_d,value\n");
    for (obj, row) in scene.objects.iter().zip(&b.cells) {
        for (step, c) in row.iter().enumerate() {
            text.push_str(&format!(
                "{},{step},{},{},{},{},{},{}\n",
                obj.id,
                sig6(c.time),
                sig6(c.distance),
                sig6(c.damage),
                sig6(c.omega_t),
                sig6(c.omega_d),
                sig6(c.value)
            ));
        }
    }
    text.into_bytes()
}

#[derive(Serialize)]
struct ResolvedConfig<'a> {
    params: &'a PodarParams,
}

pub fn run(args: &EvaluateArgs) -> Result<EvaluateSummary> {
    let scene_input = Input::read(&args.scene)?;
    let params_input = Input::read(&args.params)?;
    let scene = parse_scene(&scene_input)?;
    let params = parse_params(&params_input)?;
    let breakdown = scene.evaluate(&params)?;
    let summary = EvaluateSummary::of(&breakdown);
    if let Some(dir) = &args.out {
        let mut out = OutputSet::default();
        out.add("breakdown.csv", breakdown_csv(&scene, &breakdown));
        let inputs = vec![scene_input.digest(), params_input.digest()];
        out.manifest(&RunManifest::new(
            "evaluate",
            &ResolvedConfig { params: &params },
            inputs,
            None,
        )?);
        out.write(dir)?;
    }
    Ok(summary)
}
