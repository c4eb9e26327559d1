use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::object::{RoadObject, DEFAULT_HOST_LENGTH, DEFAULT_HOST_WIDTH};
use crate::risk::Scene;

pub const OBSTACLE_COUNT: usize = 77;
pub const DEFAULT_HOST_SPEED: f64 = 25.0;

/// How grid cells map to obstacle ids `1..=77`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Labeling {
    /// `id = column · lateral_count + row + 1`, columns in `longitudinal` order.
    ColumnMajor,
    /// `id = row · longitudinal_count + column + 1`.
    RowMajor,
    /// Ids listed in column-major cell order.
    Explicit(Vec<u32>),
}

/// Obstacle layout of the avoidance experiment.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct GridConfig {
    pub host_speed: f64,
    /// Distances ahead of the host center, meters. Column order for labeling.
    pub longitudinal: Vec<f64>,
    /// Offsets from the host's centerline, meters; positive to the left.
    pub lateral: Vec<f64>,
    pub labeling: Labeling,
    pub host_length: f64,
    pub host_width: f64,
}

impl Default for GridConfig {
    /// Columns from 175 m down to 25 m, so obstacle 72 is the nearest
    /// centerline obstacle. Off-center rows leave 0.2–2.0 m contour gaps
    /// beside a 2 m wide host.
    fn default() -> Self {
        let gaps = [0.2, 0.65, 1.1, 1.55, 2.0];
        let half = DEFAULT_HOST_WIDTH / 2.0;
        let mut lateral: Vec<f64> = gaps.iter().rev().map(|g| -(half + g)).collect();
        lateral.push(0.0);
        lateral.extend(gaps.iter().map(|g| half + g));
        Self {
            host_speed: DEFAULT_HOST_SPEED,
            longitudinal: (1..=7).rev().map(|i| 25.0 * f64::from(i)).collect(),
            lateral,
            labeling: Labeling::ColumnMajor,
            host_length: DEFAULT_HOST_LENGTH,
            host_width: DEFAULT_HOST_WIDTH,
        }
    }
}

impl GridConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.into()));
        if !(self.host_speed > 0.0 && self.host_speed.is_finite()) {
            return bad("host speed must be positive");
        }
        if !(self.host_length > 0.0 && self.host_width > 0.0) {
            return bad("host extents must be positive");
        }
        if self.longitudinal.len() * self.lateral.len() != OBSTACLE_COUNT {
            return Err(Error::InvalidConfig(format!(
                "{} x {} grid does not give {OBSTACLE_COUNT} obstacles",
                self.longitudinal.len(),
                self.lateral.len()
            )));
        }
        if self
            .longitudinal
            .iter()
            .chain(&self.lateral)
            .any(|v| !v.is_finite())
        {
            return bad("grid coordinates must be finite");
        }
        if self
            .longitudinal
            .iter()
            .any(|&x| x <= self.host_length / 2.0)
        {
            return bad("obstacles must start ahead of the host's front bumper");
        }
        if self.lateral.iter().filter(|&&y| y == 0.0).count() != 1 {
            return bad("exactly one lateral offset must be zero");
        }
        for &y in &self.lateral {
            if !self.lateral.iter().any(|&z| (z + y).abs() <= 1e-9) {
                return Err(Error::InvalidConfig(format!(
                    "lateral offset {y} has no mirror image"
                )));
            }
        }
        if let Labeling::Explicit(ids) = &self.labeling {
            let mut seen = [false; OBSTACLE_COUNT];
            if ids.len() != OBSTACLE_COUNT {
                return bad("explicit labeling must list 77 ids");
            }
            for &id in ids {
                let slot = (id as usize).checked_sub(1).filter(|&i| i < OBSTACLE_COUNT);
                match slot {
                    Some(i) if !seen[i] => seen[i] = true,
                    _ => {
                        return Err(Error::InvalidConfig(format!(
                            "bad or repeated obstacle id {id}"
                        )))
                    }
                }
            }
        }
        Ok(())
    }

    fn id_of(&self, column: usize, row: usize) -> u32 {
        let (cols, rows) = (self.longitudinal.len(), self.lateral.len());
        match &self.labeling {
            Labeling::ColumnMajor => (column * rows + row + 1) as u32,
            Labeling::RowMajor => (row * cols + column + 1) as u32,
            Labeling::Explicit(ids) => ids[column * rows + row],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridCell {
    pub id: u32,
    pub longitudinal: f64,
    pub lateral: f64,
}

impl GridCell {
    /// On the host's centerline.
    pub fn is_main_sequence(&self) -> bool {
        self.lateral == 0.0
    }
}

/// One single-obstacle scene per grid cell, ordered by obstacle id.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSet {
    pub scenes: Vec<Scene>,
    /// `cells[i]` describes `scenes[i]`, whose obstacle id is `i + 1`.
    pub cells: Vec<GridCell>,
}

impl ScenarioSet {
    pub fn len(&self) -> usize {
        self.scenes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scenes.is_empty()
    }

    pub fn main_sequence(&self) -> impl Iterator<Item = &GridCell> {
        self.cells.iter().filter(|c| c.is_main_sequence())
    }

    /// Index of the closest centerline obstacle.
    pub fn nearest_main_sequence(&self) -> usize {
        (0..self.cells.len())
            .filter(|&i| self.cells[i].is_main_sequence())
            .min_by(|&i, &j| {
                self.cells[i]
                    .longitudinal
                    .total_cmp(&self.cells[j].longitudinal)
            })
            .expect("grid has a centerline row")
    }

    pub fn index_of(&self, id: u32) -> Option<usize> {
        let i = (id as usize).checked_sub(1)?;
        (i < self.cells.len()).then_some(i)
    }
}

pub fn build_grid_scenarios(config: &GridConfig) -> Result<ScenarioSet> {
    config.validate()?;
    let host = RoadObject::host_with_size(
        Vec2::ZERO,
        Vec2::new(config.host_speed, 0.0),
        config.host_length,
        config.host_width,
    );
    let mut cells = Vec::with_capacity(OBSTACLE_COUNT);
    for (c, &x) in config.longitudinal.iter().enumerate() {
        for (r, &y) in config.lateral.iter().enumerate() {
            cells.push(GridCell {
                id: config.id_of(c, r),
                longitudinal: x,
                lateral: y,
            });
        }
    }
    cells.sort_by_key(|c| c.id);
    let scenes = cells
        .iter()
        .map(|c| {
            let obstacle = RoadObject::static_point(
                format!("O{}", c.id),
                Vec2::new(c.longitudinal, c.lateral),
            );
            Scene::new(host.clone(), alloc::vec![obstacle])
        })
        .collect();
    Ok(ScenarioSet { scenes, cells })
}
