// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{
    convergence_metric, cost_deterioration, performance_deterioration, ranked_first_fraction,
};
use super::scenario::{mix, Scenario};
use super::BenchmarkError;
use crate::heuristics::{PrunePolicy, RecomputePolicy, DEFAULT_ANGLE_THRESHOLD_DEG};
use crate::planner::PlannerConfig;
use crate::recognizer::{RankingResult, Recognizer, RecognizerConfig};

/// Named policy combinations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Approach {
    /// Always recompute, never prune.
    Baseline,
    /// Nearest-plan recompute, never prune.
    Recompute,
    /// Always recompute, angle pruning.
    Prune,
    /// Nearest-plan recompute with angle pruning.
    Both,
    /// Plan once per goal and only trim afterwards.
    NoRecompute,
}

impl Approach {
    pub const ALL: [Approach; 5] = [
        Approach::Baseline,
        Approach::Recompute,
        Approach::Prune,
        Approach::Both,
        Approach::NoRecompute,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Approach::Baseline => "baseline",
            Approach::Recompute => "recompute",
            Approach::Prune => "prune",
            Approach::Both => "both",
            Approach::NoRecompute => "norecompute",
        }
    }

    pub fn policies(&self, threshold_deg: f64) -> (RecomputePolicy, PrunePolicy) {
        let angle = PrunePolicy::AngleThreshold { threshold_deg };
        match self {
            Approach::Baseline => (RecomputePolicy::Always, PrunePolicy::Never),
            Approach::Recompute => (RecomputePolicy::NearestPlan, PrunePolicy::Never),
            Approach::Prune => (RecomputePolicy::Always, angle),
            Approach::Both => (RecomputePolicy::NearestPlan, angle),
            Approach::NoRecompute => (RecomputePolicy::Never, PrunePolicy::Never),
        }
    }
}

impl fmt::Display for Approach {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Approach {
    type Err = BenchmarkError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Approach::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| BenchmarkError::UnknownApproach(s.to_string()))
    }
}

/// Parses every name up front so a typo fails before any work starts.
pub fn parse_approaches<S: AsRef<str>>(names: &[S]) -> Result<Vec<Approach>, BenchmarkError> {
    names.iter().map(|n| n.as_ref().parse()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteOptions {
    pub planner: PlannerConfig,
    pub angle_threshold_deg: f64,
    /// Record wall-clock planning time; when false the column is 0.
    pub record_time: bool,
}

impl SuiteOptions {
    pub fn new(planner: PlannerConfig) -> Self {
        Self {
            planner,
            angle_threshold_deg: DEFAULT_ANGLE_THRESHOLD_DEG,
            record_time: true,
        }
    }
}

/// One (scenario, approach) run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioRecord {
    pub scenario_id: String,
    pub approach: String,
    pub planner: String,
    pub calls: u64,
    pub plan_time_s: f64,
    pub convergence: usize,
    pub ranked_first_frac: f64,
    pub pruned_count: usize,
    pub seed: u64,
}

/// Runs one approach on one scenario; returns the record and per-observation rankings.
pub fn run_scenario(
    scenario: &Scenario,
    approach: Approach,
    options: &SuiteOptions,
) -> Result<(ScenarioRecord, Vec<RankingResult>), BenchmarkError> {
    let (recompute, prune) = approach.policies(options.angle_threshold_deg);
    if let PrunePolicy::AngleThreshold { threshold_deg } = prune {
        PrunePolicy::angle(threshold_deg)?;
    }
    let mut config = RecognizerConfig::new(recompute, prune);
    config.budget = options.planner.budget;
    let seed = mix(options.planner.seed, scenario.seed);
    let planner = PlannerConfig {
        seed,
        ..options.planner
    }
    .build();
    let mut recognizer = Recognizer::initialize(scenario.problem.clone(), config, planner)?;
    let rankings = scenario
        .trace
        .iter()
        .map(|o| recognizer.observe(o))
        .collect::<Result<Vec<_>, _>>()?;
    let stats = recognizer.stats();
    let record = ScenarioRecord {
        scenario_id: scenario.id.clone(),
        approach: approach.as_str().to_string(),
        planner: options.planner.kind.as_str().to_string(),
        calls: stats.calls,
        plan_time_s: if options.record_time {
            stats.total_time
        } else {
            0.0
        },
        convergence: convergence_metric(&rankings, scenario.true_goal),
        ranked_first_frac: ranked_first_fraction(&rankings, scenario.true_goal),
        pruned_count: recognizer.hypotheses().iter().filter(|h| h.pruned).count(),
        seed,
    };
    Ok((record, rankings))
}

/// Per-approach means over a suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproachSummary {
    pub approach: String,
    pub runs: usize,
    pub calls: f64,
    pub plan_time_s: f64,
    pub convergence: f64,
    pub ranked_first_frac: f64,
    pub pruned_count: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    /// Scenario-major, approaches in the requested order.
    pub records: Vec<ScenarioRecord>,
    pub summaries: Vec<ApproachSummary>,
}

/// Runs every approach on every scenario on the current rayon pool.
/// Output order is independent of scheduling.
pub fn run_suite(
    scenarios: &[Scenario],
    approaches: &[Approach],
    options: &SuiteOptions,
) -> Result<SuiteResult, BenchmarkError> {
    let jobs: Vec<(&Scenario, Approach)> = scenarios
        .iter()
        .flat_map(|s| approaches.iter().map(move |&a| (s, a)))
        .collect();
    let records = jobs
        .par_iter()
        .map(|(s, a)| run_scenario(s, *a, options).map(|(r, _)| r))
        .collect::<Result<Vec<_>, _>>()?;
    let summaries = summarize(&records, approaches);
    Ok(SuiteResult { records, summaries })
}

pub fn summarize(records: &[ScenarioRecord], approaches: &[Approach]) -> Vec<ApproachSummary> {
    approaches
        .iter()
        .map(|a| {
            let rows: Vec<&ScenarioRecord> = records
                .iter()
                .filter(|r| r.approach == a.as_str())
                .collect();
            let mean = |f: &dyn Fn(&ScenarioRecord) -> f64| {
                if rows.is_empty() {
                    0.0
                } else {
                    rows.iter().map(|r| f(r)).sum::<f64>() / rows.len() as f64
                }
            };
            ApproachSummary {
                approach: a.as_str().to_string(),
                runs: rows.len(),
                calls: mean(&|r| r.calls as f64),
                plan_time_s: mean(&|r| r.plan_time_s),
                convergence: mean(&|r| r.convergence as f64),
                ranked_first_frac: mean(&|r| r.ranked_first_frac),
                pruned_count: mean(&|r| r.pruned_count as f64),
            }
        })
        .collect()
}

/// Percentage change from the scattered to the clustered suite.
/// Positive values are worse for every column.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Deterioration {
    pub approach: String,
    pub plan_time_s: Option<f64>,
    pub calls: Option<f64>,
    pub convergence: Option<f64>,
    pub ranked_first_frac: Option<f64>,
}

/// Pairs summaries by approach name; approaches missing from either side are skipped.
pub fn deterioration(
    scattered: &[ApproachSummary],
    clustered: &[ApproachSummary],
) -> Vec<Deterioration> {
    scattered
        .iter()
        .filter_map(|s| {
            let c = clustered.iter().find(|c| c.approach == s.approach)?;
            Some(Deterioration {
                approach: s.approach.clone(),
                plan_time_s: cost_deterioration(s.plan_time_s, c.plan_time_s),
                calls: cost_deterioration(s.calls, c.calls),
                convergence: performance_deterioration(s.convergence, c.convergence),
                ranked_first_frac: performance_deterioration(
                    s.ranked_first_frac,
                    c.ranked_first_frac,
                ),
            })
        })
        .collect()
}
