use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::geometry::Vec2;

/// Position and velocity of a body at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KinematicState {
    pub position: Vec2,
    pub velocity: Vec2,
    /// Radians in `[-π, π]`. Follows the velocity whenever the body moves.
    pub heading: f64,
}

impl KinematicState {
    /// Heading is taken from the velocity when the body moves, otherwise
    /// `fallback_heading` is kept.
    pub fn new(position: Vec2, velocity: Vec2, fallback_heading: f64) -> Result<Self> {
        let state = Self {
            position,
            velocity,
            heading: if velocity.norm() > 0.0 {
                velocity.angle()
            } else {
                wrap_angle(fallback_heading)
            },
        };
        state.validate()?;
        Ok(state)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.position.is_finite() || !self.velocity.is_finite() || !self.heading.is_finite() {
            return Err(invalid("kinematic state has non-finite components"));
        }
        if self.heading.abs() > core::f64::consts::PI {
            return Err(invalid("heading outside [-pi, pi]"));
        }
        Ok(())
    }

    pub fn speed(&self) -> f64 {
        self.velocity.norm()
    }

    /// State after `elapsed` seconds of straight constant-velocity motion.
    pub fn advanced(&self, elapsed: f64) -> KinematicState {
        KinematicState {
            position: self.position + self.velocity * elapsed,
            ..*self
        }
    }

    /// Mirror image about the x axis.
    pub fn reflected(&self) -> KinematicState {
        KinematicState {
            position: self.position.reflect_y(),
            velocity: self.velocity.reflect_y(),
            heading: -self.heading,
        }
    }
}

fn wrap_angle(angle: f64) -> f64 {
    use core::f64::consts::PI;
    if (-PI..=PI).contains(&angle) {
        angle
    } else {
        libm::atan2(libm::sin(angle), libm::cos(angle))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// `(time, state)` pairs at `0, dt, 2·dt, …`.
    pub states: Vec<(f64, KinematicState)>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// Number of prediction steps covering `[0, horizon]` at spacing `dt`,
/// including the current instant.
pub fn step_count(horizon: f64, dt: f64) -> usize {
    // horizon/dt lands a hair under an integer for values like 0.3/0.1
    libm::floor(horizon / dt + 1e-9) as usize + 1
}

/// Time of prediction step `i`.
#[inline]
pub fn step_time(i: usize, dt: f64) -> f64 {
    i as f64 * dt
}

pub fn predict_constant_velocity(
    state: &KinematicState,
    horizon: f64,
    dt: f64,
) -> Result<Trajectory> {
    state.validate()?;
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(invalid("prediction horizon must be positive"));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(invalid("prediction timestep must be positive"));
    }
    let states = (0..step_count(horizon, dt))
        .map(|i| {
            let t = step_time(i, dt);
            (t, state.advanced(t))
        })
        .collect();
    Ok(Trajectory { states })
}
