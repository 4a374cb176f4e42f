// SPDX-License-Identifier: Apache-2.0

//! Two-agent coordination on a four-goal field.
//!
//! An observed agent drives to one goal; the observer must reach the
//! complementary goal. Strategies differ only in when the observer learns
//! which goal that is.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Aabb, GeometryError, Point, Trajectory, World};
use crate::planner::{Planner, PlannerQuery, QueryError, VisibilityPlanner};
use crate::recognizer::{Problem, Recognizer, RecognizerConfig, RecognizerError};

#[derive(Debug, Error)]
pub enum TeamTaskError {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("no path from {from:?} to {to:?}")]
    Unreachable { from: Point, to: Point },
    #[error("episode did not finish within {0} ticks")]
    Timeout(usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error(transparent)]
    Recognizer(#[from] RecognizerError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    /// Observer is told the goal at t = 0.
    #[serde(rename = "FK")]
    FullKnowledge,
    /// Observer follows the recognizer's current top goal.
    #[serde(rename = "OGR")]
    OnlineRecognition,
    /// Observer waits until the observed agent arrives.
    #[serde(rename = "ZK")]
    ZeroKnowledge,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [
        Strategy::FullKnowledge,
        Strategy::OnlineRecognition,
        Strategy::ZeroKnowledge,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Strategy::FullKnowledge => "FK",
            Strategy::OnlineRecognition => "OGR",
            Strategy::ZeroKnowledge => "ZK",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "FK" => Ok(Strategy::FullKnowledge),
            "OGR" => Ok(Strategy::OnlineRecognition),
            "ZK" => Ok(Strategy::ZeroKnowledge),
            _ => Err(format!("unknown strategy `{s}` (expected FK, OGR or ZK)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldConfig {
    pub world: World,
    pub goals: Vec<Point>,
    /// `complement[g]` is the observer's target when the agent heads to `g`.
    pub complement: Vec<usize>,
    pub observed_start: Point,
    pub observer_starts: Vec<Point>,
    /// Meters per second, both agents.
    pub speed: f64,
    /// Seconds between observations.
    pub tick: f64,
}

impl Default for FieldConfig {
    /// A 30 x 20 m empty field with the observed agent in the middle, goals
    /// near the four corners, two observer starts behind the agent and one
    /// past it.
    fn default() -> Self {
        let bounds = Aabb::new(Point::xy(0.0, 0.0), Point::xy(30.0, 20.0)).expect("valid bounds");
        Self {
            world: World::empty(bounds),
            goals: vec![
                Point::xy(5.0, 17.0),
                Point::xy(5.0, 3.0),
                Point::xy(25.0, 17.0),
                Point::xy(25.0, 3.0),
            ],
            complement: vec![1, 0, 3, 2],
            observed_start: Point::xy(15.0, 10.0),
            observer_starts: vec![
                Point::xy(10.0, 15.0),
                Point::xy(10.0, 5.0),
                Point::xy(20.0, 10.0),
            ],
            speed: 1.0,
            tick: 0.25,
        }
    }
}

impl FieldConfig {
    pub fn validate(&self) -> Result<(), TeamTaskError> {
        let bad = |m: &str| Err(TeamTaskError::InvalidField(m.to_string()));
        if !(self.speed > 0.0 && self.speed.is_finite())
            || !(self.tick > 0.0 && self.tick.is_finite())
        {
            return bad("speed and tick must be positive");
        }
        if self.goals.len() < 2 {
            return bad("need at least two goals");
        }
        let n = self.goals.len();
        if self.complement.len() != n
            || self
                .complement
                .iter()
                .enumerate()
                .any(|(g, &c)| c >= n || c == g || self.complement[c] != g)
        {
            return bad("complement must be a fixed-point-free involution over the goals");
        }
        if self.observer_starts.is_empty() {
            return bad("need at least one observer start");
        }
        let all = std::iter::once(&self.observed_start)
            .chain(&self.goals)
            .chain(&self.observer_starts);
        for p in all {
            if p.dim() != 2 || !self.world.is_free(p) {
                return bad("points must be 2D, inside the field and collision-free");
            }
        }
        Ok(())
    }
}

/// Source of the observer's belief about the observed agent's goal.
pub trait GoalEstimator {
    /// Consumes the next observation. `None` means no single goal is
    /// preferred yet.
    fn update(&mut self, observation: &Trajectory) -> Result<Option<usize>, TeamTaskError>;
}

/// Online recognizer; abstains while the top posterior is tied.
pub struct RecognizerEstimator<P> {
    recognizer: Recognizer<P>,
}

impl<P: Planner> RecognizerEstimator<P> {
    pub fn new(
        problem: Problem,
        config: RecognizerConfig,
        planner: P,
    ) -> Result<Self, TeamTaskError> {
        Ok(Self {
            recognizer: Recognizer::initialize(problem, config, planner)?,
        })
    }

    pub fn recognizer(&self) -> &Recognizer<P> {
        &self.recognizer
    }
}

impl<P: Planner> GoalEstimator for RecognizerEstimator<P> {
    fn update(&mut self, observation: &Trajectory) -> Result<Option<usize>, TeamTaskError> {
        let r = self.recognizer.observe(observation)?;
        let leaders = (0..r.posteriors.len())
            .filter(|&g| r.is_top_ranked(g))
            .count();
        Ok((leaders == 1).then_some(r.top))
    }
}

/// Always reports the same goal.
pub struct PinnedEstimator(pub usize);

impl GoalEstimator for PinnedEstimator {
    fn update(&mut self, _: &Trajectory) -> Result<Option<usize>, TeamTaskError> {
        Ok(Some(self.0))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpisodeResult {
    pub strategy: Strategy,
    pub observed_goal: usize,
    pub observer_start: usize,
    pub completion_time: f64,
    pub observed_arrival: f64,
    /// Target changes after the first assignment.
    pub retargets: usize,
}

/// Upper bound on simulated ticks before giving up.
const MAX_TICKS: usize = 1_000_000;

fn plan_path(world: &World, from: Point, to: Point) -> Result<Trajectory, TeamTaskError> {
    VisibilityPlanner::new()
        .plan(&PlannerQuery::new(from, to, world))?
        .into_trajectory()
        .ok_or(TeamTaskError::Unreachable { from, to })
}

/// Point agent following a polyline at constant speed.
struct Mover {
    path: Trajectory,
    travelled: f64,
}

impl Mover {
    fn idle(at: Point) -> Self {
        Self {
            path: Trajectory::from_point(at),
            travelled: 0.0,
        }
    }

    fn position(&self) -> Point {
        self.path.point_at(self.travelled.min(self.path.length()))
    }

    fn remaining(&self) -> f64 {
        (self.path.length() - self.travelled).max(0.0)
    }

    /// Moves up to `distance`; returns the distance actually covered.
    fn advance(&mut self, distance: f64) -> f64 {
        let step = distance.min(self.remaining());
        self.travelled += step;
        step
    }
}

/// Simulates one episode with the strategy's default estimator. OGR uses a
/// fresh recognizer with a visibility-graph planner.
pub fn simulate_episode(
    cfg: &FieldConfig,
    strategy: Strategy,
    observed_goal: usize,
    observer_start: usize,
    recognizer_config: &RecognizerConfig,
) -> Result<EpisodeResult, TeamTaskError> {
    cfg.validate()?;
    check_indices(cfg, observed_goal, observer_start)?;
    match strategy {
        Strategy::FullKnowledge => {
            let mut r = simulate_with(
                cfg,
                &mut PinnedEstimator(observed_goal),
                observed_goal,
                observer_start,
            )?;
            r.strategy = strategy;
            Ok(r)
        }
        Strategy::OnlineRecognition => {
            let problem = Problem::new(cfg.world.clone(), cfg.observed_start, cfg.goals.clone())?;
            let mut est =
                RecognizerEstimator::new(problem, *recognizer_config, VisibilityPlanner::new())?;
            simulate_with(cfg, &mut est, observed_goal, observer_start)
        }
        Strategy::ZeroKnowledge => {
            let agent = plan_path(&cfg.world, cfg.observed_start, cfg.goals[observed_goal])?;
            let target = cfg.goals[cfg.complement[observed_goal]];
            let own = plan_path(&cfg.world, cfg.observer_starts[observer_start], target)?;
            let arrival = agent.length() / cfg.speed;
            Ok(EpisodeResult {
                strategy,
                observed_goal,
                observer_start,
                completion_time: arrival + own.length() / cfg.speed,
                observed_arrival: arrival,
                retargets: 0,
            })
        }
    }
}

fn check_indices(cfg: &FieldConfig, goal: usize, start: usize) -> Result<(), TeamTaskError> {
    if goal >= cfg.goals.len() || start >= cfg.observer_starts.len() {
        return Err(TeamTaskError::InvalidField(format!(
            "goal {goal} or observer start {start} out of range"
        )));
    }
    Ok(())
}

/// Discrete-time loop with an arbitrary estimator.
///
/// At each tick the estimator sees the stretch of the agent's path covered
/// since the previous tick (the start pose at t = 0). Whenever it names a
/// goal whose complement differs from the current target, the observer
/// re-plans from where it stands. Between ticks the observer moves toward
/// its target; arrival inside a tick is interpolated. The episode ends once
/// the agent has arrived, observations have stopped and the observer stands
/// on its final target.
pub fn simulate_with<E: GoalEstimator + ?Sized>(
    cfg: &FieldConfig,
    estimator: &mut E,
    observed_goal: usize,
    observer_start: usize,
) -> Result<EpisodeResult, TeamTaskError> {
    cfg.validate()?;
    check_indices(cfg, observed_goal, observer_start)?;
    let agent = plan_path(&cfg.world, cfg.observed_start, cfg.goals[observed_goal])?;
    let agent_len = agent.length();
    let arrival = agent_len / cfg.speed;
    let step = cfg.speed * cfg.tick;

    let mut observer = Mover::idle(cfg.observer_starts[observer_start]);
    let mut target: Option<usize> = None;
    let mut retargets = 0;
    // time at which the observer last reached its current target
    let mut reached_at: Option<f64> = None;
    let mut covered = 0.0;

    for k in 0..MAX_TICKS {
        let t = k as f64 * cfg.tick;
        let observing = k == 0 || covered < agent_len;
        if observing {
            let observation = if k == 0 {
                Trajectory::from_point(cfg.observed_start)
            } else {
                let next = (covered + step).min(agent_len);
                let piece = agent.slice(covered, next);
                covered = next;
                let pts = piece.points();
                if pts.len() > 1 {
                    Trajectory::new(pts[1..].to_vec())?
                } else {
                    piece
                }
            };
            if let Some(goal) = estimator.update(&observation)? {
                let wanted = cfg.complement[goal];
                if target != Some(wanted) {
                    if target.is_some() {
                        retargets += 1;
                    }
                    target = Some(wanted);
                    let here = observer.position();
                    observer = Mover {
                        path: plan_path(&cfg.world, here, cfg.goals[wanted])?,
                        travelled: 0.0,
                    };
                    reached_at = (observer.remaining() == 0.0).then_some(t);
                }
            }
        }
        let done_observing = covered >= agent_len && k > 0;
        if target.is_some() {
            if let Some(at) = reached_at {
                if done_observing {
                    return Ok(EpisodeResult {
                        strategy: Strategy::OnlineRecognition,
                        observed_goal,
                        observer_start,
                        completion_time: at,
                        observed_arrival: arrival,
                        retargets,
                    });
                }
            } else {
                let left = observer.remaining();
                if done_observing {
                    // nothing can change the target any more
                    return Ok(EpisodeResult {
                        strategy: Strategy::OnlineRecognition,
                        observed_goal,
                        observer_start,
                        completion_time: t + left / cfg.speed,
                        observed_arrival: arrival,
                        retargets,
                    });
                }
                let moved = observer.advance(step);
                if moved >= left {
                    reached_at = Some(t + left / cfg.speed);
                }
            }
        } else if done_observing {
            return Err(TeamTaskError::InvalidField(
                "estimator never settled on a goal".into(),
            ));
        }
    }
    Err(TeamTaskError::Timeout(MAX_TICKS))
}

/// One row per (observer start, observed goal), strategies side by side.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TeamTaskRow {
    pub observer_start: String,
    pub observed_goal: String,
    #[serde(rename = "FK")]
    pub fk: f64,
    #[serde(rename = "OGR")]
    pub ogr: f64,
    #[serde(rename = "ZK")]
    pub zk: f64,
    pub ogr_retargets: usize,
}

/// Full starts x goals x strategies matrix.
pub fn run_matrix(
    cfg: &FieldConfig,
    recognizer_config: &RecognizerConfig,
) -> Result<Vec<TeamTaskRow>, TeamTaskError> {
    cfg.validate()?;
    let mut rows = Vec::with_capacity(cfg.observer_starts.len() * cfg.goals.len());
    for s in 0..cfg.observer_starts.len() {
        for g in 0..cfg.goals.len() {
            let run = |strategy| simulate_episode(cfg, strategy, g, s, recognizer_config);
            let fk = run(Strategy::FullKnowledge)?;
            let ogr = run(Strategy::OnlineRecognition)?;
            let zk = run(Strategy::ZeroKnowledge)?;
            rows.push(TeamTaskRow {
                observer_start: format!("I{}", s + 1),
                observed_goal: format!("G{}", g + 1),
                fk: fk.completion_time,
                ogr: ogr.completion_time,
                zk: zk.completion_time,
                ogr_retargets: ogr.retargets,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn baseline() -> RecognizerConfig {
        RecognizerConfig::baseline()
    }

    #[test]
    fn default_field_is_valid() {
        FieldConfig::default().validate().unwrap();
    }

    #[test]
    fn complement_must_be_involution() {
        let mut cfg = FieldConfig {
            complement: vec![1, 2, 3, 0],
            ..FieldConfig::default()
        };
        assert!(cfg.validate().is_err());
        cfg.complement = vec![0, 1, 3, 2];
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn fk_is_straight_line_time() {
        let cfg = FieldConfig::default();
        for s in 0..3 {
            for g in 0..4 {
                let r = simulate_episode(&cfg, Strategy::FullKnowledge, g, s, &baseline()).unwrap();
                let d = cfg.observer_starts[s].distance(&cfg.goals[cfg.complement[g]]);
                assert!((r.completion_time - d / cfg.speed).abs() < 1e-9, "{s} {g}");
                assert_eq!(r.retargets, 0);
            }
        }
    }

    #[test]
    fn zk_is_two_leg_sum() {
        let cfg = FieldConfig {
            speed: 2.0,
            ..FieldConfig::default()
        };
        let r = simulate_episode(&cfg, Strategy::ZeroKnowledge, 0, 2, &baseline()).unwrap();
        let leg1 = cfg.observed_start.distance(&cfg.goals[0]);
        let leg2 = cfg.observer_starts[2].distance(&cfg.goals[1]);
        assert!((r.completion_time - (leg1 + leg2) / 2.0).abs() < 1e-9);
    }

    #[test]
    fn pinned_estimator_matches_fk() {
        let cfg = FieldConfig::default();
        for g in 0..4 {
            let pinned = simulate_with(&cfg, &mut PinnedEstimator(g), g, 1).unwrap();
            let fk = simulate_episode(&cfg, Strategy::FullKnowledge, g, 1, &baseline()).unwrap();
            assert_eq!(pinned.completion_time, fk.completion_time);
        }
    }

    #[test]
    fn ogr_between_fk_and_zk() {
        let cfg = FieldConfig::default();
        for row in run_matrix(&cfg, &baseline()).unwrap() {
            assert!(row.fk <= row.ogr + 1e-9, "{row:?}");
            assert!(row.ogr <= row.zk + 1e-9, "{row:?}");
            assert!(row.fk < row.zk, "{row:?}");
        }
    }

    /// Never names a goal.
    struct Undecided;

    impl GoalEstimator for Undecided {
        fn update(&mut self, _: &Trajectory) -> Result<Option<usize>, TeamTaskError> {
            Ok(None)
        }
    }

    #[test]
    fn undecided_estimator_is_an_error() {
        let cfg = FieldConfig::default();
        assert!(simulate_with(&cfg, &mut Undecided, 0, 0).is_err());
    }

    /// Names goal `wrong` for the first `n` observations, then the truth.
    struct LateSwitch {
        wrong: usize,
        right: usize,
        n: usize,
        seen: usize,
    }

    impl GoalEstimator for LateSwitch {
        fn update(&mut self, _: &Trajectory) -> Result<Option<usize>, TeamTaskError> {
            self.seen += 1;
            Ok(Some(if self.seen <= self.n {
                self.wrong
            } else {
                self.right
            }))
        }
    }

    #[test]
    fn switching_counts_one_retarget_and_costs_time() {
        let cfg = FieldConfig::default();
        let mut est = LateSwitch {
            wrong: 2,
            right: 0,
            n: 8,
            seen: 0,
        };
        let r = simulate_with(&cfg, &mut est, 0, 0).unwrap();
        assert_eq!(r.retargets, 1);
        let fk = simulate_episode(&cfg, Strategy::FullKnowledge, 0, 0, &baseline()).unwrap();
        assert!(r.completion_time > fk.completion_time);
    }
}
