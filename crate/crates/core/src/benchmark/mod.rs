// SPDX-License-Identifier: Apache-2.0

//! Scenario generation, batch evaluation and summary metrics.

mod metrics;
mod scenario;
mod suite;

pub use metrics::{
    convergence_metric, cost_deterioration, performance_deterioration, ranked_first_fraction,
};
pub use scenario::{
    generate_scenarios, generate_trace, generate_world, scatter_sites, Layout, ObservationRecord,
    Scenario, ScenarioConfig, ScenarioFile, WorldSpec, CLUSTER_RADIUS, SCATTER_SEPARATION,
};
pub use suite::{
    deterioration, parse_approaches, run_scenario, run_suite, summarize, Approach, ApproachSummary,
    Deterioration, ScenarioRecord, SuiteOptions, SuiteResult,
};

use thiserror::Error;

use crate::geometry::GeometryError;
use crate::heuristics::PolicyError;
use crate::planner::QueryError;
use crate::recognizer::RecognizerError;

#[derive(Debug, Error)]
pub enum BenchmarkError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("scenario schema violation: {0}")]
    Schema(String),
    #[error("unknown approach `{0}` (expected baseline, recompute, prune, both or norecompute)")]
    UnknownApproach(String),
    #[error("could not place {0} after repeated attempts")]
    Placement(&'static str),
    #[error("trace planner found no path to the true goal")]
    Unreachable,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error(transparent)]
    Recognizer(#[from] RecognizerError),
}
