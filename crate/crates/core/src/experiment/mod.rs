//! Reconstruction of the obstacle-avoidance grid and synthetic signal generation.

mod grid;
mod synthetic;

pub use grid::{
    build_grid_scenarios, GridCell, GridConfig, Labeling, ScenarioSet, DEFAULT_HOST_SPEED,
    OBSTACLE_COUNT,
};
pub use synthetic::{generate_synthetic, SyntheticDataset, SyntheticSpec};
