// SPDX-License-Identifier: Apache-2.0

//! Points, polylines, and obstacle worlds.

mod point;
mod trajectory;
mod world;

use thiserror::Error;

pub use point::{angle_deg, Point, MAX_DIM};
pub use trajectory::{Projection, Trajectory};
pub use world::{Aabb, Obstacle, Shape, World};

/// Geometric equality tolerance, meters.
pub const EPS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("unsupported dimension {0} (expected 2 or 3)")]
    UnsupportedDimension(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("coordinates must be finite")]
    NonFinite,
    #[error("trajectory needs at least one point")]
    EmptyTrajectory,
    #[error("arc length {s} outside [0, {length}]")]
    ArcLengthOutOfRange { s: f64, length: f64 },
    #[error("zero-length direction vector")]
    DegenerateDirection,
    #[error("invalid obstacle: {0}")]
    InvalidShape(&'static str),
    #[error("obstacle extends outside the world bounds")]
    ObstacleOutOfBounds,
}
