// SPDX-License-Identifier: Apache-2.0

//! Motion planners used as black boxes by the recognizer.
//!
//! Every planner answers a [`PlannerQuery`] with either a collision-free
//! trajectory from `start` to `goal` or a [`PlanFailure`]. Malformed queries
//! (endpoints outside the world or inside an obstacle) are reported as a
//! [`QueryError`] instead, so callers can tell "no path" from "bad input".

mod instrument;
mod rrt_star;
mod visibility;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Point, Trajectory, World};

pub use instrument::{Instrumented, PlannerStats};
pub use rrt_star::{rrt_star_plan, RrtStarConfig, RrtStarPlanner};
pub use visibility::{visibility_plan, VisibilityPlanner};

/// Per-call work limit.
///
/// `max_seconds` is an optional wall-clock cap; leaving it unset keeps
/// sampling planners reproducible from their seed alone.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub max_iterations: usize,
    pub max_seconds: Option<f64>,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_iterations: 4000,
            max_seconds: None,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PlannerQuery<'a> {
    pub start: Point,
    pub goal: Point,
    pub world: &'a World,
    pub budget: Budget,
}

impl<'a> PlannerQuery<'a> {
    pub fn new(start: Point, goal: Point, world: &'a World) -> Self {
        Self {
            start,
            goal,
            world,
            budget: Budget::default(),
        }
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn validate(&self) -> Result<(), QueryError> {
        let dim = self.world.dim();
        for (which, p) in [(Endpoint::Start, &self.start), (Endpoint::Goal, &self.goal)] {
            if p.dim() != dim {
                return Err(QueryError::DimensionMismatch {
                    world: dim,
                    point: p.dim(),
                });
            }
            if !self.world.contains(p) {
                return Err(QueryError::OutOfBounds(which));
            }
            if !self.world.is_free(p) {
                return Err(QueryError::InCollision(which));
            }
        }
        if self.budget.max_iterations == 0 || self.budget.max_seconds.is_some_and(|s| s <= 0.0) {
            return Err(QueryError::InvalidBudget);
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Endpoint {
    Start,
    Goal,
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Start => f.write_str("start"),
            Endpoint::Goal => f.write_str("goal"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QueryError {
    #[error("{0} lies outside the world bounds")]
    OutOfBounds(Endpoint),
    #[error("{0} lies inside an obstacle")]
    InCollision(Endpoint),
    #[error("query point has dimension {point}, world has {world}")]
    DimensionMismatch { world: usize, point: usize },
    #[error("{planner} planner does not support {dim}D worlds")]
    UnsupportedDimension { planner: &'static str, dim: usize },
    #[error("planning budget must be positive")]
    InvalidBudget,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanFailure {
    /// No collision-free path exists.
    Unreachable,
    /// The budget ran out before the goal was reached.
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PlanResult {
    Success(Trajectory),
    Failure(PlanFailure),
}

impl PlanResult {
    pub fn trajectory(&self) -> Option<&Trajectory> {
        match self {
            PlanResult::Success(t) => Some(t),
            PlanResult::Failure(_) => None,
        }
    }

    pub fn into_trajectory(self) -> Option<Trajectory> {
        match self {
            PlanResult::Success(t) => Some(t),
            PlanResult::Failure(_) => None,
        }
    }

    pub fn is_success(&self) -> bool {
        matches!(self, PlanResult::Success(_))
    }

    /// Path length, `+inf` on failure.
    pub fn cost(&self) -> f64 {
        self.trajectory().map_or(f64::INFINITY, Trajectory::length)
    }
}

pub trait Planner: Send + Sync {
    fn name(&self) -> &'static str;

    fn plan(&self, query: &PlannerQuery<'_>) -> Result<PlanResult, QueryError>;
}

impl<P: Planner + ?Sized> Planner for &P {
    fn name(&self) -> &'static str {
        (**self).name()
    }

    fn plan(&self, query: &PlannerQuery<'_>) -> Result<PlanResult, QueryError> {
        (**self).plan(query)
    }
}

impl<P: Planner + ?Sized> Planner for Box<P> {
    fn name(&self) -> &'static str {
        (**self).name()
    }

    fn plan(&self, query: &PlannerQuery<'_>) -> Result<PlanResult, QueryError> {
        (**self).plan(query)
    }
}

impl<P: Planner + ?Sized> Planner for Arc<P> {
    fn name(&self) -> &'static str {
        (**self).name()
    }

    fn plan(&self, query: &PlannerQuery<'_>) -> Result<PlanResult, QueryError> {
        (**self).plan(query)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlannerKind {
    Visibility,
    RrtStar,
}

impl PlannerKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            PlannerKind::Visibility => "visibility",
            PlannerKind::RrtStar => "rrtstar",
        }
    }
}

impl fmt::Display for PlannerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PlannerKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "visibility" => Ok(PlannerKind::Visibility),
            "rrtstar" | "rrt_star" | "rrt*" => Ok(PlannerKind::RrtStar),
            other => Err(format!(
                "unknown planner `{other}` (expected visibility or rrtstar)"
            )),
        }
    }
}

/// Planner selection as it appears in run configs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlannerConfig {
    pub kind: PlannerKind,
    pub seed: u64,
    pub budget: Budget,
}

impl PlannerConfig {
    pub fn visibility() -> Self {
        Self {
            kind: PlannerKind::Visibility,
            seed: 0,
            budget: Budget::default(),
        }
    }

    pub fn rrt_star(seed: u64) -> Self {
        Self {
            kind: PlannerKind::RrtStar,
            seed,
            budget: Budget::default(),
        }
    }

    /// Fresh planner instance; instances are cheap and hold only caches.
    pub fn build(&self) -> Box<dyn Planner> {
        match self.kind {
            PlannerKind::Visibility => Box::new(VisibilityPlanner::new()),
            PlannerKind::RrtStar => Box::new(RrtStarPlanner::new(self.seed)),
        }
    }
}
