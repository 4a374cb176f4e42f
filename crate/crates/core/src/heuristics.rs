// SPDX-License-Identifier: Apache-2.0

//! RECOMPUTE and PRUNE decision policies.
//!
//! Both are pure functions of the recognizer's current plans and the newest
//! observation; they hold no state of their own.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{angle_deg, Point, Trajectory, EPS};

pub const DEFAULT_ANGLE_THRESHOLD_DEG: f64 = 120.0;

/// Lookahead along the old plan, as a fraction of the ideal plan cost.
pub const LOOKAHEAD_FRACTION: f64 = 0.05;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolicyError {
    #[error("angle threshold must be in (0, 180], got {0}")]
    InvalidThreshold(f64),
    #[error("unknown recompute policy `{0}` (expected always, never or nearest)")]
    UnknownRecompute(String),
    #[error("unknown prune policy `{0}` (expected never or angle)")]
    UnknownPrune(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecomputePolicy {
    Always,
    Never,
    /// Recompute unless the current top goal's plan is (one of) the nearest.
    NearestPlan,
}

impl RecomputePolicy {
    pub fn as_str(&self) -> &'static str {
        match self {
            RecomputePolicy::Always => "always",
            RecomputePolicy::Never => "never",
            RecomputePolicy::NearestPlan => "nearest",
        }
    }
}

impl fmt::Display for RecomputePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RecomputePolicy {
    type Err = PolicyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "always" => Ok(RecomputePolicy::Always),
            "never" => Ok(RecomputePolicy::Never),
            "nearest" | "nearest_plan" => Ok(RecomputePolicy::NearestPlan),
            other => Err(PolicyError::UnknownRecompute(other.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrunePolicy {
    Never,
    AngleThreshold { threshold_deg: f64 },
}

impl PrunePolicy {
    pub fn angle(threshold_deg: f64) -> Result<Self, PolicyError> {
        if !(threshold_deg > 0.0 && threshold_deg <= 180.0) {
            return Err(PolicyError::InvalidThreshold(threshold_deg));
        }
        Ok(PrunePolicy::AngleThreshold { threshold_deg })
    }

    pub fn default_angle() -> Self {
        PrunePolicy::AngleThreshold {
            threshold_deg: DEFAULT_ANGLE_THRESHOLD_DEG,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            PrunePolicy::Never => "never",
            PrunePolicy::AngleThreshold { .. } => "angle",
        }
    }
}

/// Should the planner be re-invoked for every goal on this observation?
///
/// `plans` holds `(goal index, current full plan)` for the non-pruned goals
/// with a plan; `top` is the current top-ranked goal index.
pub fn recompute_decide(
    policy: RecomputePolicy,
    plans: &[(usize, &Trajectory)],
    top: usize,
    observed: &Point,
) -> bool {
    match policy {
        RecomputePolicy::Always => true,
        RecomputePolicy::Never => false,
        RecomputePolicy::NearestPlan => {
            let Some(top_dist) = plans
                .iter()
                .find(|(g, _)| *g == top)
                .map(|(_, m)| m.distance_to(observed))
            else {
                return true;
            };
            let nearest = plans
                .iter()
                .map(|(_, m)| m.distance_to(observed))
                .fold(f64::INFINITY, f64::min);
            top_dist > nearest + EPS
        }
    }
}

/// Inputs to the angle test for one goal.
#[derive(Clone, Copy, Debug)]
pub struct PruneInput<'a> {
    /// The previously calculated full plan `m_g`.
    pub plan: &'a Trajectory,
    /// End of the old prefix, or the initial pose before any observation.
    pub previous: Point,
    /// End of the new observation.
    pub observed: Point,
    pub ideal_cost: f64,
    pub goal: Point,
}

/// Angle between the movement vector and the old plan's heading, in degrees.
///
/// The heading points from the observation to the plan point `λ` past its
/// closest point (`λ` = [`LOOKAHEAD_FRACTION`] of the ideal cost), or to the
/// goal when that runs off the end. `None` when either vector is degenerate.
pub fn prune_angle(input: &PruneInput<'_>) -> Option<f64> {
    let movement = input.observed.sub(&input.previous);
    let projection = input.plan.closest_point(&input.observed);
    let lookahead = projection.arc_length + LOOKAHEAD_FRACTION * input.ideal_cost;
    let reference = if lookahead <= input.plan.length() {
        input.plan.point_at(lookahead)
    } else {
        input.goal
    };
    let heading = reference.sub(&input.observed);
    angle_deg(&movement, &heading).ok()
}

/// Should this goal be permanently eliminated? Strictly greater than the
/// threshold prunes; degenerate directions never do.
pub fn prune_decide(policy: PrunePolicy, input: &PruneInput<'_>) -> bool {
    match policy {
        PrunePolicy::Never => false,
        PrunePolicy::AngleThreshold { threshold_deg } => {
            prune_angle(input).is_some_and(|a| a > threshold_deg)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(a: (f64, f64), b: (f64, f64)) -> Trajectory {
        Trajectory::segment(Point::xy(a.0, a.1), Point::xy(b.0, b.1))
    }

    #[test]
    fn constant_policies() {
        let m = line((0.0, 0.0), (1.0, 0.0));
        let plans = [(0, &m)];
        let o = Point::xy(5.0, 5.0);
        assert!(recompute_decide(RecomputePolicy::Always, &plans, 0, &o));
        assert!(!recompute_decide(RecomputePolicy::Never, &plans, 0, &o));
        assert!(recompute_decide(RecomputePolicy::Always, &[], 3, &o));
    }

    #[test]
    fn nearest_plan_on_top_plan_is_false() {
        let top = line((0.0, 0.0), (10.0, 0.0));
        let other = line((0.0, 0.0), (0.0, 10.0));
        let plans = [(0, &top), (1, &other)];
        assert!(!recompute_decide(
            RecomputePolicy::NearestPlan,
            &plans,
            0,
            &Point::xy(4.0, 0.0)
        ));
    }

    #[test]
    fn nearest_plan_other_corridor_is_true() {
        // two corridors; observation strictly closer to goal 1's plan
        let top = line((0.0, 0.0), (10.0, 0.0));
        let other = line((0.0, 2.0), (10.0, 2.0));
        let plans = [(0, &top), (1, &other)];
        assert!(recompute_decide(
            RecomputePolicy::NearestPlan,
            &plans,
            0,
            &Point::xy(5.0, 1.5)
        ));
        // exact tie keeps the current ranking
        assert!(!recompute_decide(
            RecomputePolicy::NearestPlan,
            &plans,
            0,
            &Point::xy(5.0, 1.0)
        ));
    }

    #[test]
    fn nearest_plan_without_top_plan_recomputes() {
        let m = line((0.0, 0.0), (1.0, 0.0));
        assert!(recompute_decide(
            RecomputePolicy::NearestPlan,
            &[(1, &m)],
            0,
            &Point::xy(0.5, 0.0)
        ));
    }

    #[test]
    fn moving_toward_goal_is_zero_degrees() {
        let plan = line((0.0, 0.0), (10.0, 0.0));
        let input = PruneInput {
            plan: &plan,
            previous: Point::xy(1.0, 0.0),
            observed: Point::xy(2.0, 0.0),
            ideal_cost: 10.0,
            goal: Point::xy(10.0, 0.0),
        };
        assert_eq!(prune_angle(&input), Some(0.0));
        assert!(!prune_decide(PrunePolicy::default_angle(), &input));
    }

    #[test]
    fn moving_away_is_pruned() {
        // goal to the east, agent stepping west
        let plan = line((5.0, 0.0), (10.0, 0.0));
        let input = PruneInput {
            plan: &plan,
            previous: Point::xy(5.0, 0.0),
            observed: Point::xy(4.0, 0.0),
            ideal_cost: 10.0,
            goal: Point::xy(10.0, 0.0),
        };
        assert!((prune_angle(&input).unwrap() - 180.0).abs() < 1e-12);
        assert!(prune_decide(PrunePolicy::default_angle(), &input));
    }

    #[test]
    fn angle_equal_to_threshold_does_not_prune() {
        let plan = line((0.0, 0.0), (10.0, 0.0));
        let input = PruneInput {
            plan: &plan,
            previous: Point::xy(0.0, 0.0),
            observed: Point::xy(1.0, 1.0),
            ideal_cost: 10.0,
            goal: Point::xy(10.0, 0.0),
        };
        let a = prune_angle(&input).unwrap();
        assert!(!prune_decide(PrunePolicy::angle(a).unwrap(), &input));
        assert!(prune_decide(PrunePolicy::angle(a - 1e-6).unwrap(), &input));
    }

    #[test]
    fn stationary_agent_never_pruned() {
        let plan = line((0.0, 0.0), (10.0, 0.0));
        let input = PruneInput {
            plan: &plan,
            previous: Point::xy(3.0, 3.0),
            observed: Point::xy(3.0, 3.0),
            ideal_cost: 10.0,
            goal: Point::xy(10.0, 0.0),
        };
        assert_eq!(prune_angle(&input), None);
        assert!(!prune_decide(PrunePolicy::angle(1.0).unwrap(), &input));
    }

    #[test]
    fn at_goal_is_degenerate() {
        let plan = line((0.0, 0.0), (10.0, 0.0));
        let input = PruneInput {
            plan: &plan,
            previous: Point::xy(9.9, 0.0),
            observed: Point::xy(10.0, 0.0),
            ideal_cost: 10.0,
            goal: Point::xy(10.0, 0.0),
        };
        assert!(!prune_decide(PrunePolicy::angle(1.0).unwrap(), &input));
    }

    #[test]
    fn threshold_validation_and_parsing() {
        assert!(PrunePolicy::angle(0.0).is_err());
        assert!(PrunePolicy::angle(180.0).is_ok());
        assert!(PrunePolicy::angle(181.0).is_err());
        assert!(PrunePolicy::angle(f64::NAN).is_err());
        assert_eq!("nearest".parse(), Ok(RecomputePolicy::NearestPlan));
        assert!("sometimes".parse::<RecomputePolicy>().is_err());
    }
}
