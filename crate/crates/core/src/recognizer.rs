// SPDX-License-Identifier: Apache-2.0

//! Online goal recognition over streaming observations.
//!
//! Each goal carries a hypothesis plan `m_g = m_g^- ⊕ m_g^+`: the prefix is
//! the concatenation of every observation so far, the suffix a plan from the
//! last observed point to the goal. A goal scores `cost(i_g) / cost(m_g)`
//! against its ideal plan `i_g`, and posteriors are the normalized scores.
//!
//! On every observation the RECOMPUTE policy decides between re-planning all
//! suffixes (consulting PRUNE per goal first) and cheaply trimming the old
//! suffixes at the point closest to the observation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{GeometryError, Point, Trajectory, World, EPS};
use crate::heuristics::{prune_decide, recompute_decide, PruneInput, PrunePolicy, RecomputePolicy};
use crate::planner::{Budget, Instrumented, Planner, PlannerQuery, PlannerStats, QueryError};

/// Posteriors closer than this are tied.
pub const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RecognizerError {
    #[error("goal set is empty")]
    NoGoals,
    #[error("initial pose is outside the world or inside an obstacle")]
    InvalidInitial,
    #[error("goal {0} is outside the world or inside an obstacle")]
    InvalidGoal(usize),
    #[error("observation has dimension {found}, world has {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("observation lies outside the world bounds")]
    ObservationOutOfBounds,
    #[error("observation ends inside an obstacle")]
    ObservationInCollision,
    #[error(transparent)]
    Planner(#[from] QueryError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// World, initial pose, and ordered goal set. Goal order breaks ranking ties.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Problem {
    world: World,
    initial: Point,
    goals: Vec<Point>,
}

impl Problem {
    pub fn new(world: World, initial: Point, goals: Vec<Point>) -> Result<Self, RecognizerError> {
        if goals.is_empty() {
            return Err(RecognizerError::NoGoals);
        }
        if initial.dim() != world.dim() || !world.is_free(&initial) {
            return Err(RecognizerError::InvalidInitial);
        }
        if let Some(i) = goals
            .iter()
            .position(|g| g.dim() != world.dim() || !world.is_free(g))
        {
            return Err(RecognizerError::InvalidGoal(i));
        }
        Ok(Self {
            world,
            initial,
            goals,
        })
    }

    pub fn world(&self) -> &World {
        &self.world
    }

    pub fn initial(&self) -> Point {
        self.initial
    }

    pub fn goals(&self) -> &[Point] {
        &self.goals
    }
}

/// Per-goal state.
#[derive(Clone, Debug, PartialEq)]
pub struct GoalHypothesis {
    pub goal: Point,
    /// Ideal plan from the initial pose; `None` if the planner found none.
    pub ideal: Option<Trajectory>,
    /// `+inf` when unreachable.
    pub ideal_cost: f64,
    /// Concatenated observations; `None` before the first observation.
    pub prefix: Option<Trajectory>,
    pub suffix: Option<Trajectory>,
    /// `prefix ⊕ suffix`; `None` before the first observation.
    pub full: Option<Trajectory>,
    pub score: f64,
    pub pruned: bool,
    /// The planner failed on this goal in the latest round.
    pub planner_failed: bool,
}

impl GoalHypothesis {
    pub fn is_reachable(&self) -> bool {
        self.ideal.is_some()
    }

    /// `cost(m_g)`; `+inf` when the latest planning round failed.
    pub fn cost(&self) -> f64 {
        if !self.is_reachable() || self.planner_failed {
            return f64::INFINITY;
        }
        match (&self.full, &self.suffix) {
            (Some(full), _) => full.length(),
            (None, Some(suffix)) => suffix.length(),
            (None, None) => f64::INFINITY,
        }
    }

    /// Current best plan `m_g` (the suffix alone before any observation).
    pub fn plan(&self) -> Option<&Trajectory> {
        self.full.as_ref().or(self.suffix.as_ref())
    }
}

/// `cost(i_g) / cost(m_g)`: 1 when both are zero, 0 for the failure sentinel.
/// Not clamped, so a suboptimal planner can push it above 1.
pub fn score(h: &GoalHypothesis) -> f64 {
    let cost = h.cost();
    if !cost.is_finite() || !h.ideal_cost.is_finite() {
        return 0.0;
    }
    if cost == 0.0 {
        return 1.0;
    }
    h.ideal_cost / cost
}

/// Trims `suffix` to continue from `observed` (`m_g^+ ⊖ prefix(o, m_g^+)`).
///
/// The part of the old suffix up to the point closest to `observed` is
/// dropped; when `observed` is off the suffix a straight bridge joins them.
pub fn modify_suffix(suffix: &Trajectory, observed: Point) -> Trajectory {
    let projection = suffix.closest_point(&observed);
    let s = projection.arc_length.min(suffix.length());
    let rest = suffix
        .remove_prefix(s)
        .expect("closest-point arc length lies on the suffix");
    if rest.start() == observed {
        return rest;
    }
    if projection.distance <= EPS {
        let mut points = rest.points().to_vec();
        points[0] = observed;
        return Trajectory::new(points).expect("non-empty");
    }
    Trajectory::segment(observed, rest.start())
        .concat(&rest)
        .expect("same dimension")
}

/// Plans a fresh suffix from `from` to the goal; exactly one planner call.
pub fn recompute_suffix<P: Planner + ?Sized>(
    planner: &P,
    world: &World,
    from: Point,
    goal: Point,
    budget: Budget,
) -> Result<Option<Trajectory>, QueryError> {
    let query = PlannerQuery::new(from, goal, world).with_budget(budget);
    Ok(planner.plan(&query)?.into_trajectory())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecognizerConfig {
    pub recompute: RecomputePolicy,
    pub prune: PrunePolicy,
    pub budget: Budget,
    /// Re-plan suffixes for different goals concurrently.
    pub parallel: bool,
}

impl RecognizerConfig {
    pub fn new(recompute: RecomputePolicy, prune: PrunePolicy) -> Self {
        Self {
            recompute,
            prune,
            budget: Budget::default(),
            parallel: false,
        }
    }

    /// Always recompute, never prune.
    pub fn baseline() -> Self {
        Self::new(RecomputePolicy::Always, PrunePolicy::Never)
    }
}

/// One record per observation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankingResult {
    /// Zero-based observation index.
    pub index: usize,
    /// `Pr(g|O)` per goal in goal order; pruned goals hold 0.
    pub posteriors: Vec<f64>,
    pub scores: Vec<f64>,
    pub top: usize,
    pub pruned: Vec<usize>,
    pub recomputed: bool,
    /// Cumulative planner calls including initialization.
    pub planner_calls: u64,
    pub planning_time: f64,
}

impl RankingResult {
    /// True when `goal` shares the maximal posterior (ties share rank 1).
    pub fn is_top_ranked(&self, goal: usize) -> bool {
        if self.pruned.contains(&goal) {
            return false;
        }
        let max = self
            .posteriors
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.pruned.contains(i))
            .map(|(_, p)| *p)
            .fold(f64::NEG_INFINITY, f64::max);
        self.posteriors[goal] >= max - TIE_TOLERANCE
    }
}

enum SuffixUpdate {
    Planned(Option<Trajectory>),
    Modified(Trajectory),
}

/// Recognizer state for one problem. `observe` calls are sequential.
pub struct Recognizer<P> {
    problem: Problem,
    config: RecognizerConfig,
    planner: Instrumented<P>,
    hypotheses: Vec<GoalHypothesis>,
    top: Option<usize>,
    observations: usize,
    last_point: Point,
    safeguard_activations: usize,
}

impl<P: Planner> Recognizer<P> {
    /// Plans the ideal path for every goal (exactly `|G|` planner calls).
    /// Goals without a path stay in the set with a permanent score of 0.
    pub fn initialize(
        problem: Problem,
        config: RecognizerConfig,
        planner: P,
    ) -> Result<Self, RecognizerError> {
        let planner = Instrumented::new(planner);
        let mut hypotheses = Vec::with_capacity(problem.goals.len());
        for &goal in &problem.goals {
            let ideal = recompute_suffix(
                &planner,
                &problem.world,
                problem.initial,
                goal,
                config.budget,
            )?;
            let ideal_cost = ideal.as_ref().map_or(f64::INFINITY, Trajectory::length);
            let mut h = GoalHypothesis {
                goal,
                suffix: ideal.clone(),
                ideal,
                ideal_cost,
                prefix: None,
                full: None,
                score: 0.0,
                pruned: false,
                planner_failed: false,
            };
            h.score = score(&h);
            hypotheses.push(h);
        }
        let last_point = problem.initial;
        Ok(Self {
            problem,
            config,
            planner,
            hypotheses,
            top: None,
            observations: 0,
            last_point,
            safeguard_activations: 0,
        })
    }

    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    pub fn config(&self) -> &RecognizerConfig {
        &self.config
    }

    pub fn hypotheses(&self) -> &[GoalHypothesis] {
        &self.hypotheses
    }

    pub fn stats(&self) -> PlannerStats {
        self.planner.stats()
    }

    pub fn planner(&self) -> &P {
        self.planner.inner()
    }

    /// Current top-ranked goal; `None` before the first observation.
    pub fn top(&self) -> Option<usize> {
        self.top
    }

    /// Prune decisions skipped because they would have emptied the goal set.
    pub fn safeguard_activations(&self) -> usize {
        self.safeguard_activations
    }

    pub fn observations(&self) -> usize {
        self.observations
    }

    fn active(&self) -> Vec<usize> {
        (0..self.hypotheses.len())
            .filter(|&i| !self.hypotheses[i].pruned && self.hypotheses[i].is_reachable())
            .collect()
    }

    fn validate(&self, o: &Trajectory) -> Result<(), RecognizerError> {
        let world = &self.problem.world;
        if o.dim() != world.dim() {
            return Err(RecognizerError::DimensionMismatch {
                expected: world.dim(),
                found: o.dim(),
            });
        }
        if !o.points().iter().all(|p| world.contains(p)) {
            return Err(RecognizerError::ObservationOutOfBounds);
        }
        if !world.is_free(&o.end()) {
            return Err(RecognizerError::ObservationInCollision);
        }
        Ok(())
    }

    /// One loop iteration for a new observation (point or fragment).
    ///
    /// On error the state is left as it was.
    pub fn observe(&mut self, o: &Trajectory) -> Result<RankingResult, RecognizerError> {
        self.validate(o)?;
        let end = o.end();
        let active = self.active();

        // Nearest-plan needs a top-ranked plan, which the first observation
        // lacks; the constant policies are taken literally.
        let recompute = match (self.config.recompute, self.top) {
            (RecomputePolicy::NearestPlan, None) => true,
            (policy, top) => {
                let plans: Vec<(usize, &Trajectory)> = active
                    .iter()
                    .filter_map(|&g| self.hypotheses[g].plan().map(|m| (g, m)))
                    .collect();
                recompute_decide(policy, &plans, top.unwrap_or(0), &end)
            }
        };

        let mut newly_pruned = Vec::new();
        let mut safeguard = 0;
        let mut updates: Vec<(usize, SuffixUpdate)> = Vec::with_capacity(active.len());
        if recompute {
            let mut alive = active.len();
            let mut to_plan = Vec::with_capacity(active.len());
            for &g in &active {
                let h = &self.hypotheses[g];
                let prune = h.plan().is_some_and(|plan| {
                    prune_decide(
                        self.config.prune,
                        &PruneInput {
                            plan,
                            previous: self.last_point,
                            observed: end,
                            ideal_cost: h.ideal_cost,
                            goal: h.goal,
                        },
                    )
                });
                // never prune the last remaining goal
                if prune && alive > 1 {
                    newly_pruned.push(g);
                    alive -= 1;
                } else {
                    if prune {
                        safeguard += 1;
                    }
                    to_plan.push(g);
                }
            }
            let world = &self.problem.world;
            let planner = &self.planner;
            let budget = self.config.budget;
            let plan_one = |&g: &usize| {
                recompute_suffix(planner, world, end, self.hypotheses[g].goal, budget)
                    .map(|s| (g, SuffixUpdate::Planned(s)))
            };
            let planned: Result<Vec<_>, QueryError> = if self.config.parallel {
                to_plan.par_iter().map(plan_one).collect()
            } else {
                to_plan.iter().map(plan_one).collect()
            };
            updates = planned?;
        } else {
            for &g in &active {
                if let Some(suffix) = &self.hypotheses[g].suffix {
                    updates.push((g, SuffixUpdate::Modified(modify_suffix(suffix, end))));
                }
            }
        }

        // commit
        for g in newly_pruned {
            self.hypotheses[g].pruned = true;
        }
        for (g, update) in updates {
            let h = &mut self.hypotheses[g];
            match update {
                SuffixUpdate::Planned(Some(s)) | SuffixUpdate::Modified(s) => {
                    h.suffix = Some(s);
                    h.planner_failed = false;
                }
                SuffixUpdate::Planned(None) => h.planner_failed = true,
            }
        }
        for h in self.hypotheses.iter_mut().filter(|h| !h.pruned) {
            let prefix = match &h.prefix {
                Some(p) => p.concat(o)?,
                None => o.clone(),
            };
            h.full = match &h.suffix {
                Some(s) if h.is_reachable() => Some(prefix.concat(s)?),
                _ => None,
            };
            h.prefix = Some(prefix);
            h.score = score(h);
        }
        self.observations += 1;
        self.last_point = end;
        self.safeguard_activations += safeguard;

        let mut result = self.rank();
        result.recomputed = recompute;
        self.top = Some(result.top);
        Ok(result)
    }

    /// Posteriors over the non-pruned goals and the top goal.
    ///
    /// All-zero scores give a uniform posterior; ties go to the earliest goal.
    pub fn rank(&self) -> RankingResult {
        let live: Vec<usize> = (0..self.hypotheses.len())
            .filter(|&i| !self.hypotheses[i].pruned)
            .collect();
        let scores: Vec<f64> = self.hypotheses.iter().map(|h| h.score).collect();
        let total: f64 = live.iter().map(|&i| scores[i]).sum();
        let mut posteriors = vec![0.0; scores.len()];
        for &i in &live {
            posteriors[i] = if total > 0.0 {
                scores[i] / total
            } else {
                1.0 / live.len() as f64
            };
        }
        let mut top = live[0];
        for &i in &live[1..] {
            if posteriors[i] > posteriors[top] + TIE_TOLERANCE {
                top = i;
            }
        }
        let stats = self.planner.stats();
        RankingResult {
            index: self.observations.saturating_sub(1),
            posteriors,
            scores,
            top,
            pruned: (0..self.hypotheses.len())
                .filter(|&i| self.hypotheses[i].pruned)
                .collect(),
            recomputed: false,
            planner_calls: stats.calls,
            planning_time: stats.total_time,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Aabb, Obstacle};
    use crate::planner::VisibilityPlanner;

    fn p(x: f64, y: f64) -> Point {
        Point::xy(x, y)
    }

    fn obs(x: f64, y: f64) -> Trajectory {
        Trajectory::from_point(p(x, y))
    }

    fn open_world() -> World {
        World::empty(Aabb::new(p(-20.0, -20.0), p(20.0, 20.0)).unwrap())
    }

    fn hyp(ideal_cost: f64, full_len: f64) -> GoalHypothesis {
        let ideal = Trajectory::segment(p(0.0, 0.0), p(ideal_cost, 0.0));
        GoalHypothesis {
            goal: p(ideal_cost, 0.0),
            ideal: Some(ideal.clone()),
            ideal_cost,
            prefix: None,
            suffix: Some(ideal),
            full: Some(Trajectory::segment(p(0.0, 0.0), p(full_len, 0.0))),
            score: 0.0,
            pruned: false,
            planner_failed: false,
        }
    }

    #[test]
    fn score_examples() {
        assert_eq!(score(&hyp(10.0, 10.0)), 1.0);
        assert_eq!(score(&hyp(10.0, 20.0)), 0.5);
        let mut failed = hyp(10.0, 10.0);
        failed.planner_failed = true;
        assert_eq!(score(&failed), 0.0);
        assert_eq!(score(&hyp(0.0, 0.0)), 1.0);
    }

    #[test]
    fn modify_suffix_examples() {
        let suffix = Trajectory::segment(p(0.0, 0.0), p(10.0, 0.0));
        let m = modify_suffix(&suffix, p(5.0, 1.0));
        assert_eq!(
            m,
            Trajectory::new(vec![p(5.0, 1.0), p(5.0, 0.0), p(10.0, 0.0)]).unwrap()
        );
        assert_eq!(m.length(), 6.0);

        assert_eq!(modify_suffix(&suffix, p(0.0, 0.0)), suffix);

        // on the suffix: plain trim, no bridge
        let m = modify_suffix(&suffix, p(3.0, 0.0));
        assert_eq!(m, Trajectory::segment(p(3.0, 0.0), p(10.0, 0.0)));

        // past the end collapses onto the goal
        let m = modify_suffix(&suffix, p(12.0, 0.0));
        assert_eq!(m, Trajectory::segment(p(12.0, 0.0), p(10.0, 0.0)));
    }

    #[test]
    fn recompute_suffix_examples() {
        let w = open_world();
        let planner = VisibilityPlanner::new();
        let s = recompute_suffix(&planner, &w, p(0.0, 0.0), p(3.0, 4.0), Budget::default())
            .unwrap()
            .unwrap();
        assert_eq!(s.length(), 5.0);
        let s = recompute_suffix(&planner, &w, p(3.0, 4.0), p(3.0, 4.0), Budget::default())
            .unwrap()
            .unwrap();
        assert_eq!(s.length(), 0.0);
    }

    #[test]
    fn initialize_sets_ideal_as_suffix() {
        let problem = Problem::new(open_world(), p(0.0, 0.0), vec![p(1.0, 0.0)]).unwrap();
        let r = Recognizer::initialize(
            problem,
            RecognizerConfig::baseline(),
            VisibilityPlanner::new(),
        )
        .unwrap();
        let h = &r.hypotheses()[0];
        assert_eq!(h.ideal, Some(Trajectory::segment(p(0.0, 0.0), p(1.0, 0.0))));
        assert_eq!(h.ideal_cost, 1.0);
        assert_eq!(h.suffix, h.ideal);
        assert!(h.prefix.is_none() && !h.pruned);
        assert_eq!(r.top(), None);
        assert_eq!(r.stats().calls, 1);
    }

    #[test]
    fn rank_examples() {
        let problem = Problem::new(
            open_world(),
            p(0.0, 0.0),
            vec![p(1.0, 0.0), p(2.0, 0.0), p(3.0, 0.0)],
        )
        .unwrap();
        let mut r = Recognizer::initialize(
            problem,
            RecognizerConfig::baseline(),
            VisibilityPlanner::new(),
        )
        .unwrap();
        r.hypotheses[0].score = 0.5;
        r.hypotheses[1].score = 0.5;
        r.hypotheses[2].pruned = true;
        let res = r.rank();
        assert_eq!(res.posteriors, vec![0.5, 0.5, 0.0]);
        assert_eq!(res.top, 0);
        assert_eq!(res.pruned, vec![2]);

        r.hypotheses[2].pruned = false;
        r.hypotheses[0].score = 1.0;
        r.hypotheses[1].score = 0.25;
        r.hypotheses[2].score = 0.25;
        let res = r.rank();
        let expect = [2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0];
        for (a, b) in res.posteriors.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }

        for h in &mut r.hypotheses {
            h.score = 0.0;
        }
        let res = r.rank();
        assert_eq!(res.posteriors, vec![1.0 / 3.0; 3]);
        assert_eq!(res.top, 0);
    }

    #[test]
    fn observation_outside_bounds_leaves_state() {
        let problem = Problem::new(open_world(), p(0.0, 0.0), vec![p(5.0, 0.0)]).unwrap();
        let mut r = Recognizer::initialize(
            problem,
            RecognizerConfig::baseline(),
            VisibilityPlanner::new(),
        )
        .unwrap();
        let before = r.hypotheses().to_vec();
        assert_eq!(
            r.observe(&obs(50.0, 0.0)),
            Err(RecognizerError::ObservationOutOfBounds)
        );
        assert_eq!(r.hypotheses(), &before[..]);
        assert_eq!(r.observations(), 0);
        assert_eq!(r.stats().calls, 1);
    }

    #[test]
    fn sealed_goal_scores_zero_and_is_not_replanned() {
        let ring = vec![
            Obstacle::aabb(p(7.0, 2.0), p(13.0, 3.0)).unwrap(),
            Obstacle::aabb(p(7.0, -3.0), p(13.0, -2.0)).unwrap(),
            Obstacle::aabb(p(7.0, -3.0), p(8.0, 3.0)).unwrap(),
            Obstacle::aabb(p(12.0, -3.0), p(13.0, 3.0)).unwrap(),
        ];
        let w = World::new(open_world().bounds().to_owned(), ring).unwrap();
        let problem = Problem::new(w, p(0.0, 0.0), vec![p(10.0, 0.0), p(0.0, 10.0)]).unwrap();
        let mut r = Recognizer::initialize(
            problem,
            RecognizerConfig::baseline(),
            VisibilityPlanner::new(),
        )
        .unwrap();
        assert!(!r.hypotheses()[0].is_reachable());
        assert_eq!(r.stats().calls, 2);
        let res = r.observe(&obs(0.0, 0.0)).unwrap();
        let res2 = r.observe(&obs(0.0, 1.0)).unwrap();
        // only the reachable goal is replanned
        assert_eq!(res.planner_calls, 3);
        assert_eq!(res2.planner_calls, 4);
        assert_eq!(res2.scores[0], 0.0);
        assert!(!r.hypotheses()[0].pruned);
        assert_eq!(res2.top, 1);
    }

    #[test]
    fn observation_on_top_plan_skips_planner() {
        let problem =
            Problem::new(open_world(), p(0.0, 0.0), vec![p(10.0, 0.0), p(0.0, 10.0)]).unwrap();
        let config = RecognizerConfig::new(RecomputePolicy::NearestPlan, PrunePolicy::Never);
        let mut r = Recognizer::initialize(problem, config, VisibilityPlanner::new()).unwrap();
        r.observe(&obs(0.0, 0.0)).unwrap();
        let first = r.observe(&obs(1.0, 0.0)).unwrap();
        assert_eq!(first.top, 0);
        let calls = first.planner_calls;
        let next = r.observe(&obs(2.0, 0.0)).unwrap();
        assert!(!next.recomputed);
        assert_eq!(next.planner_calls, calls);
        assert_eq!(next.top, 0);
    }

    #[test]
    fn keep_one_goal_alive() {
        // both goals behind the agent: only one may be pruned
        let problem = Problem::new(
            open_world(),
            p(0.0, 0.0),
            vec![p(-10.0, 1.0), p(-10.0, -1.0)],
        )
        .unwrap();
        let config = RecognizerConfig::new(RecomputePolicy::Always, PrunePolicy::default_angle());
        let mut r = Recognizer::initialize(problem, config, VisibilityPlanner::new()).unwrap();
        for x in 0..6 {
            r.observe(&obs(x as f64, 0.0)).unwrap();
        }
        let alive = r.hypotheses().iter().filter(|h| !h.pruned).count();
        assert_eq!(alive, 1);
    }

    #[test]
    fn never_recompute_plans_only_once() {
        let problem =
            Problem::new(open_world(), p(0.0, 0.0), vec![p(10.0, 0.0), p(0.0, 10.0)]).unwrap();
        let config = RecognizerConfig::new(RecomputePolicy::Never, PrunePolicy::Never);
        let mut r = Recognizer::initialize(problem, config, VisibilityPlanner::new()).unwrap();
        for x in 0..5 {
            let res = r.observe(&obs(x as f64, 0.0)).unwrap();
            assert!(!res.recomputed);
        }
        assert_eq!(r.stats().calls, 2);
        assert!((r.hypotheses()[0].score - 1.0).abs() < 1e-12);
    }

    #[test]
    fn safeguard_activations_counted() {
        let problem = Problem::new(
            open_world(),
            p(0.0, 0.0),
            vec![p(-10.0, 1.0), p(-10.0, -1.0)],
        )
        .unwrap();
        let config = RecognizerConfig::new(RecomputePolicy::Always, PrunePolicy::default_angle());
        let mut r = Recognizer::initialize(problem, config, VisibilityPlanner::new()).unwrap();
        r.observe(&obs(0.0, 0.0)).unwrap();
        assert_eq!(r.safeguard_activations(), 0);
        r.observe(&obs(1.0, 0.0)).unwrap();
        assert_eq!(r.safeguard_activations(), 1);
    }
}
