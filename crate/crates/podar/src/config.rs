//! TOML inputs: grid layout, model parameters, scenes and synthetic specs.

use serde::{Deserialize, Serialize};

use podar_core::experiment::{GridConfig, SyntheticSpec};
use podar_core::geometry::{BodyGeometry, Vec2};
use podar_core::kinematics::KinematicState;
use podar_core::object::{
    ObjectType, RoadObject, DEFAULT_HOST_LENGTH, DEFAULT_HOST_WIDTH, DEFAULT_VIRTUAL_MASS,
};
use podar_core::params::PodarParams;
use podar_core::risk::Scene;

use crate::error::{CliError, Result};
use crate::manifest::Input;

fn parse_toml<T: for<'de> Deserialize<'de>>(input: &Input) -> Result<T> {
    toml::from_str(input.text()?)
        .map_err(|e| CliError::parse(&input.path, e.to_string().trim_end()))
}

pub fn parse_grid(input: &Input) -> Result<GridConfig> {
    let grid: GridConfig = parse_toml(input)?;
    grid.validate()
        .map_err(|e| CliError::parse(&input.path, e))?;
    Ok(grid)
}

pub fn parse_params(input: &Input) -> Result<PodarParams> {
    let params: PodarParams = parse_toml(input)?;
    params
        .validate()
        .map_err(|e| CliError::parse(&input.path, e))?;
    Ok(params)
}

fn one() -> f64 {
    1.0
}
fn virtual_mass() -> f64 {
    DEFAULT_VIRTUAL_MASS
}
fn host_length() -> f64 {
    DEFAULT_HOST_LENGTH
}
fn host_width() -> f64 {
    DEFAULT_HOST_WIDTH
}
fn obstacle() -> ObjectType {
    ObjectType::Obstacle
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HostSpec {
    #[serde(default)]
    pub position: [f64; 2],
    pub velocity: [f64; 2],
    /// Used only when the host is at rest.
    #[serde(default)]
    pub heading: f64,
    #[serde(default = "host_length")]
    pub length: f64,
    #[serde(default = "host_width")]
    pub width: f64,
    #[serde(default = "virtual_mass")]
    pub mass: f64,
    #[serde(default = "one")]
    pub sensitivity: f64,
}

/// A point unless both `length` and `width` are given.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectSpec {
    pub id: String,
    #[serde(rename = "type", default = "obstacle")]
    pub object_type: ObjectType,
    pub position: [f64; 2],
    #[serde(default)]
    pub velocity: [f64; 2],
    #[serde(default)]
    pub heading: f64,
    pub length: Option<f64>,
    pub width: Option<f64>,
    #[serde(default = "virtual_mass")]
    pub mass: f64,
    #[serde(default = "one")]
    pub sensitivity: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub host: HostSpec,
    #[serde(default)]
    pub objects: Vec<ObjectSpec>,
}

fn vec2([x, y]: [f64; 2]) -> Vec2 {
    Vec2::new(x, y)
}

impl SceneFile {
    pub fn to_scene(&self) -> std::result::Result<Scene, String> {
        let h = &self.host;
        let host = RoadObject {
            id: "host".to_string(),
            object_type: ObjectType::Vehicle,
            state: KinematicState::new(vec2(h.position), vec2(h.velocity), h.heading)
                .map_err(|e| format!("host: {e}"))?,
            geometry: BodyGeometry::Rectangle {
                length: h.length,
                width: h.width,
            },
            mass: h.mass,
            sensitivity: h.sensitivity,
        };
        host.validate().map_err(|e| format!("host: {e}"))?;
        let mut objects = Vec::with_capacity(self.objects.len());
        for o in &self.objects {
            let geometry = match (o.length, o.width) {
                (Some(length), Some(width)) => BodyGeometry::Rectangle { length, width },
                (None, None) => BodyGeometry::Point,
                _ => {
                    return Err(format!(
                        "object {}: give both length and width, or neither",
                        o.id
                    ))
                }
            };
            let object = RoadObject {
                id: o.id.clone(),
                object_type: o.object_type,
                state: KinematicState::new(vec2(o.position), vec2(o.velocity), o.heading)
                    .map_err(|e| format!("object {}: {e}", o.id))?,
                geometry,
                mass: o.mass,
                sensitivity: o.sensitivity,
            };
            object
                .validate()
                .map_err(|e| format!("object {}: {e}", o.id))?;
            objects.push(object);
        }
        if objects.is_empty() {
            return Err("scene has no objects".to_string());
        }
        Ok(Scene::new(host, objects))
    }
}

pub fn parse_scene(input: &Input) -> Result<Scene> {
    let file: SceneFile = parse_toml(input)?;
    file.to_scene().map_err(|m| CliError::parse(&input.path, m))
}

/// One `[[driver]]` table of a synthetic spec file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriverSpec {
    pub id: String,
    pub horizon: f64,
    pub k: f64,
    pub a: f64,
    pub b: f64,
    #[serde(default)]
    pub sigma: f64,
    #[serde(default)]
    pub seed: u64,
}

impl DriverSpec {
    pub fn spec(&self) -> SyntheticSpec {
        SyntheticSpec {
            horizon: self.horizon,
            k: self.k,
            a: self.a,
            b: self.b,
            sigma: self.sigma,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthFile {
    pub driver: Vec<DriverSpec>,
}

pub fn parse_synth(input: &Input) -> Result<Vec<DriverSpec>> {
    let file: SynthFile = parse_toml(input)?;
    if file.driver.is_empty() {
        return Err(CliError::parse(&input.path, "no [[driver]] entries"));
    }
    for (i, d) in file.driver.iter().enumerate() {
        if file.driver[..i].iter().any(|e| e.id == d.id) {
            return Err(CliError::parse(
                &input.path,
                format!("driver {} listed twice", d.id),
            ));
        }
        d.spec()
            .validate()
            .map_err(|e| CliError::parse(&input.path, format!("driver {}: {e}", d.id)))?;
    }
    Ok(file.driver)
}
