//! Forward evaluation of the potential-damage risk of a scene.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::kinematics::{predict_constant_velocity, step_count, KinematicState};
use crate::object::RoadObject;
use crate::params::PodarParams;

/// Host vehicle plus the surrounding objects at the current instant.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub host: RoadObject,
    pub objects: Vec<RoadObject>,
}

impl Scene {
    pub fn new(host: RoadObject, objects: Vec<RoadObject>) -> Self {
        Self { host, objects }
    }

    pub fn evaluate(&self, params: &PodarParams) -> Result<RiskBreakdown> {
        podar_scene(&self.host, &self.objects, params)
    }

    /// Mirror image of the whole scene about the x axis.
    pub fn reflected(&self) -> Scene {
        Scene {
            host: self.host.reflected(),
            objects: self.objects.iter().map(RoadObject::reflected).collect(),
        }
    }
}

/// Integrated closing speed `V_t` between host and object.
///
/// `α` weighs the relative velocity projected on the object-to-host direction
/// against the sum of both speeds. Negative for bodies that separate fast
/// enough. Coincident positions are a degenerate-geometry error.
pub fn closing_speed(host: &KinematicState, obj: &KinematicState, alpha: f64) -> Result<f64> {
    let offset = host.position - obj.position;
    let dist = offset.norm();
    if dist == 0.0 {
        return Err(Error::DegenerateGeometry(String::from(
            "host and object positions coincide",
        )));
    }
    let relative = obj.velocity - host.velocity;
    let approach = (relative.x * offset.x + relative.y * offset.y) / dist;
    Ok(blend_speed(approach, host, obj, alpha))
}

#[inline]
fn blend_speed(approach: f64, host: &KinematicState, obj: &KinematicState, alpha: f64) -> f64 {
    alpha * approach + (1.0 - alpha) * (obj.speed() + host.speed())
}

/// Closing speed at a predicted step. Once the predicted contours overlap the
/// virtual collision is under way and the bodies keep the direction they
/// approached from, even after the centers pass each other.
fn predicted_closing_speed(
    host: &KinematicState,
    obj: &KinematicState,
    alpha: f64,
    contour_gap: f64,
) -> Result<f64> {
    if contour_gap > 0.0 {
        return closing_speed(host, obj, alpha);
    }
    let relative = (obj.velocity - host.velocity).norm();
    if relative == 0.0 {
        // overlapping and not moving apart: only the center direction is left
        return closing_speed(host, obj, alpha);
    }
    Ok(blend_speed(relative, host, obj, alpha))
}

/// Kinetic-energy-like damage `½ (M_host + M_obj) · V · |V|` of a virtual collision.
pub fn potential_damage(
    host: &RoadObject,
    obstacle: &RoadObject,
    host_state: &KinematicState,
    obj_state: &KinematicState,
    alpha: f64,
) -> Result<f64> {
    let v = closing_speed(host_state, obj_state, alpha)?;
    Ok(damage_from_speed(host, obstacle, v))
}

#[inline]
fn damage_from_speed(host: &RoadObject, obstacle: &RoadObject, v: f64) -> f64 {
    0.5 * (host.virtual_mass() + obstacle.virtual_mass()) * v * v.abs()
}

/// `ω_T = exp(-A·t)`.
pub fn temporal_attenuation(t: f64, a: f64) -> Result<f64> {
    if !(t >= 0.0 && a >= 0.0) || t.is_infinite() || a.is_infinite() {
        return Err(invalid(
            "temporal attenuation needs finite t >= 0 and A >= 0",
        ));
    }
    Ok(attenuation(a, t))
}

/// `ω_D = exp(-B·d)`.
pub fn spatial_attenuation(d: f64, b: f64) -> Result<f64> {
    if !(d >= 0.0 && b >= 0.0) || d.is_infinite() || b.is_infinite() {
        return Err(invalid(
            "spatial attenuation needs finite d >= 0 and B >= 0",
        ));
    }
    Ok(attenuation(b, d))
}

#[inline]
pub(crate) fn attenuation(rate: f64, x: f64) -> f64 {
    libm::exp(-(rate * x))
}

/// Risk of one (object, timestep) cell. Separating bodies carry no risk.
#[inline]
pub fn cell_value(k: f64, damage: f64, omega_t: f64, omega_d: f64) -> f64 {
    let v = k * damage * omega_t * omega_d;
    if v > 0.0 {
        v
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskCell {
    pub time: f64,
    /// Contour gap `d`, meters.
    pub distance: f64,
    /// Potential damage `G`.
    pub damage: f64,
    pub omega_t: f64,
    pub omega_d: f64,
    /// `max(k·G·ω_T·ω_D, 0)`.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RiskBreakdown {
    pub final_podar: f64,
    /// Index into the objects list of the maximizing cell.
    pub argmax_object: usize,
    pub argmax_step: usize,
    pub argmax_id: String,
    /// Indexed `[object][step]`.
    pub cells: Vec<Vec<RiskCell>>,
}

impl RiskBreakdown {
    pub fn argmax_cell(&self) -> &RiskCell {
        &self.cells[self.argmax_object][self.argmax_step]
    }
}

/// Parameter-free part of a cell: everything except `k`, `A` and `B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct CellGeometry {
    pub time: f64,
    pub distance: f64,
    pub damage: f64,
}

/// Predicts every body and computes `(t, d, G)` for each `[object][step]`.
pub(crate) fn scene_geometry(
    host: &RoadObject,
    objects: &[RoadObject],
    horizon: f64,
    dt: f64,
    alpha: f64,
) -> Result<Vec<Vec<CellGeometry>>> {
    if objects.is_empty() {
        return Err(invalid("scene has no surrounding objects"));
    }
    host.validate()?;
    let host_traj = predict_constant_velocity(&host.state, horizon, dt)?;
    debug_assert_eq!(host_traj.len(), step_count(horizon, dt));
    objects
        .iter()
        .map(|obj| {
            obj.validate()?;
            let traj = predict_constant_velocity(&obj.state, horizon, dt)?;
            host_traj
                .states
                .iter()
                .zip(traj.states.iter())
                .enumerate()
                .map(|(i, ((t, hs), (_, os)))| {
                    let distance = host.footprint_at(hs).gap(&obj.footprint_at(os));
                    let speed = if i == 0 {
                        closing_speed(hs, os, alpha)
                    } else {
                        predicted_closing_speed(hs, os, alpha, distance)
                    }
                    .map_err(|e| match e {
                        Error::DegenerateGeometry(msg) => {
                            Error::DegenerateGeometry(format!("object {}: {msg}", obj.id))
                        }
                        other => other,
                    })?;
                    Ok(CellGeometry {
                        time: *t,
                        distance,
                        damage: damage_from_speed(host, obj, speed),
                    })
                })
                .collect()
        })
        .collect()
}

/// Risk of a scene: the maximum attenuated damage over objects and predicted steps.
///
/// Ties go to the lowest timestep, then the lowest object index.
pub fn podar_scene(
    host: &RoadObject,
    objects: &[RoadObject],
    params: &PodarParams,
) -> Result<RiskBreakdown> {
    params.validate()?;
    let geometry = scene_geometry(host, objects, params.horizon, params.dt, params.alpha)?;
    Ok(breakdown_from_geometry(&geometry, objects, params))
}

pub(crate) fn breakdown_from_geometry(
    geometry: &[Vec<CellGeometry>],
    objects: &[RoadObject],
    params: &PodarParams,
) -> RiskBreakdown {
    let cells: Vec<Vec<RiskCell>> = geometry
        .iter()
        .map(|row| {
            row.iter()
                .map(|g| {
                    let omega_t = attenuation(params.a, g.time);
                    let omega_d = attenuation(params.b, g.distance);
                    RiskCell {
                        time: g.time,
                        distance: g.distance,
                        damage: g.damage,
                        omega_t,
                        omega_d,
                        value: cell_value(params.k, g.damage, omega_t, omega_d),
                    }
                })
                .collect()
        })
        .collect();

    let steps = cells[0].len();
    let (mut best, mut best_obj, mut best_step) = (f64::NEG_INFINITY, 0, 0);
    for step in 0..steps {
        for (obj, row) in cells.iter().enumerate() {
            if row[step].value > best {
                best = row[step].value;
                best_obj = obj;
                best_step = step;
            }
        }
    }
    RiskBreakdown {
        final_podar: best,
        argmax_object: best_obj,
        argmax_step: best_step,
        argmax_id: objects[best_obj].id.clone(),
        cells,
    }
}
