use alloc::string::{String, ToString};

use crate::error::{invalid, Result};
use crate::geometry::{BodyGeometry, Footprint, Vec2};
use crate::kinematics::KinematicState;

/// Virtual mass given to both the experiment obstacles and, by default, the host.
pub const DEFAULT_VIRTUAL_MASS: f64 = 1.8;
pub const DEFAULT_HOST_LENGTH: f64 = 4.0;
pub const DEFAULT_HOST_WIDTH: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ObjectType {
    Vehicle,
    Pedestrian,
    Bicycle,
    Obstacle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoadObject {
    pub id: String,
    pub object_type: ObjectType,
    pub state: KinematicState,
    pub geometry: BodyGeometry,
    /// Actual mass `m`.
    pub mass: f64,
    /// Damage sensitivity `s` of the object type.
    pub sensitivity: f64,
}

impl RoadObject {
    /// Host vehicle: default 4 m × 2 m rectangle with unit sensitivity.
    ///
    /// # Panics
    /// If `position` or `velocity` is not finite.
    pub fn host(position: Vec2, velocity: Vec2) -> Self {
        Self::host_with_size(position, velocity, DEFAULT_HOST_LENGTH, DEFAULT_HOST_WIDTH)
    }

    /// # Panics
    /// If `position` or `velocity` is not finite.
    pub fn host_with_size(position: Vec2, velocity: Vec2, length: f64, width: f64) -> Self {
        Self {
            id: "host".to_string(),
            object_type: ObjectType::Vehicle,
            state: KinematicState::new(position, velocity, 0.0).expect("finite host state"),
            geometry: BodyGeometry::Rectangle { length, width },
            mass: DEFAULT_VIRTUAL_MASS,
            sensitivity: 1.0,
        }
    }

    /// Static point obstacle.
    ///
    /// # Panics
    /// If `position` is not finite.
    pub fn static_point(id: impl Into<String>, position: Vec2) -> Self {
        Self {
            id: id.into(),
            object_type: ObjectType::Obstacle,
            state: KinematicState::new(position, Vec2::ZERO, 0.0).expect("finite position"),
            geometry: BodyGeometry::Point,
            mass: DEFAULT_VIRTUAL_MASS,
            sensitivity: 1.0,
        }
    }

    pub fn with_velocity(mut self, velocity: Vec2) -> Result<Self> {
        self.state = KinematicState::new(self.state.position, velocity, self.state.heading)?;
        Ok(self)
    }

    pub fn with_mass(mut self, mass: f64, sensitivity: f64) -> Self {
        self.mass = mass;
        self.sensitivity = sensitivity;
        self
    }

    /// `M = m · s`.
    pub fn virtual_mass(&self) -> f64 {
        self.mass * self.sensitivity
    }

    pub fn validate(&self) -> Result<()> {
        self.state.validate()?;
        self.geometry.validate()?;
        if !(self.mass >= 0.0 && self.mass.is_finite()) {
            return Err(invalid(alloc::format!(
                "object {}: mass must be non-negative",
                self.id
            )));
        }
        if !(self.sensitivity >= 0.0 && self.sensitivity.is_finite()) {
            return Err(invalid(alloc::format!(
                "object {}: sensitivity must be non-negative",
                self.id
            )));
        }
        Ok(())
    }

    pub fn footprint(&self) -> Footprint {
        self.footprint_at(&self.state)
    }

    pub(crate) fn footprint_at(&self, state: &KinematicState) -> Footprint {
        Footprint {
            geometry: self.geometry,
            center: state.position,
            heading: state.heading,
        }
    }

    /// Mirror image about the x axis.
    pub fn reflected(&self) -> RoadObject {
        RoadObject {
            state: self.state.reflected(),
            ..self.clone()
        }
    }
}
