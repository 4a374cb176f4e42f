// SPDX-License-Identifier: Apache-2.0

use goalrec::geometry::{Aabb, Point, Trajectory, World};
use goalrec::heuristics::{PrunePolicy, RecomputePolicy};
use goalrec::planner::VisibilityPlanner;
use goalrec::recognizer::{modify_suffix, Problem, Recognizer, RecognizerConfig};
use proptest::prelude::*;

fn field() -> World {
    World::empty(Aabb::new(Point::xy(0.0, 0.0), Point::xy(100.0, 100.0)).unwrap())
}

fn point() -> impl Strategy<Value = Point> {
    (1.0..99.0f64, 1.0..99.0f64).prop_map(|(x, y)| Point::xy(x, y))
}

fn all_configs() -> Vec<RecognizerConfig> {
    let mut out = Vec::new();
    for r in [
        RecomputePolicy::Always,
        RecomputePolicy::Never,
        RecomputePolicy::NearestPlan,
    ] {
        for p in [PrunePolicy::Never, PrunePolicy::default_angle()] {
            out.push(RecognizerConfig::new(r, p));
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn straight_walk_keeps_true_goal_on_top(
        start in point(),
        goals in prop::collection::vec(point(), 2..6),
        target in 0usize..6,
        k in 2usize..15,
    ) {
        let target = target % goals.len();
        prop_assume!(goals.iter().all(|g| g.distance(&start) > 1.0));
        let problem = Problem::new(field(), start, goals.clone()).unwrap();
        let path = Trajectory::segment(start, goals[target]);
        for config in all_configs() {
            let mut r = Recognizer::initialize(problem.clone(), config, VisibilityPlanner::new()).unwrap();
            for p in Trajectory::new(path.resample(k)).unwrap().points() {
                let res = r.observe(&Trajectory::from_point(*p)).unwrap();
                prop_assert!((res.scores[target] - 1.0).abs() < 1e-9);
                prop_assert!(res.is_top_ranked(target));
                let total: f64 = res.posteriors.iter().sum();
                prop_assert!((total - 1.0).abs() < 1e-9);
                prop_assert!(res.posteriors.iter().all(|&p| p >= 0.0));
            }
            // moving exactly along the goal's own plan is never pruned
            prop_assert!(!r.hypotheses()[target].pruned);
        }
    }

    #[test]
    fn modified_suffix_starts_at_observation(
        a in point(), b in point(), c in point(), o in point(),
    ) {
        let suffix = Trajectory::new(vec![a, b, c]).unwrap();
        let m = modify_suffix(&suffix, o);
        prop_assert_eq!(m.start(), o);
        prop_assert_eq!(m.end(), c);
        let proj = suffix.closest_point(&o);
        let expect = proj.distance + (suffix.length() - proj.arc_length);
        prop_assert!((m.length() - expect).abs() < 1e-7);
    }

    #[test]
    fn parallel_and_sequential_agree(
        start in point(),
        goals in prop::collection::vec(point(), 2..6),
        walk in prop::collection::vec(point(), 1..8),
    ) {
        let problem = Problem::new(field(), start, goals).unwrap();
        let mut seq_cfg = RecognizerConfig::new(RecomputePolicy::NearestPlan, PrunePolicy::default_angle());
        let mut par_cfg = seq_cfg;
        seq_cfg.parallel = false;
        par_cfg.parallel = true;
        let mut a = Recognizer::initialize(problem.clone(), seq_cfg, VisibilityPlanner::new()).unwrap();
        let mut b = Recognizer::initialize(problem, par_cfg, VisibilityPlanner::new()).unwrap();
        for p in &walk {
            let o = Trajectory::from_point(*p);
            let (x, y) = (a.observe(&o).unwrap(), b.observe(&o).unwrap());
            prop_assert_eq!(x.posteriors, y.posteriors);
            prop_assert_eq!(x.planner_calls, y.planner_calls);
        }
    }
}

#[test]
fn fragments_and_points_build_the_same_prefix() {
    let problem = Problem::new(
        field(),
        Point::xy(10.0, 10.0),
        vec![Point::xy(90.0, 10.0), Point::xy(10.0, 90.0)],
    )
    .unwrap();
    let mut frag = Recognizer::initialize(
        problem.clone(),
        RecognizerConfig::baseline(),
        VisibilityPlanner::new(),
    )
    .unwrap();
    let mut pts = Recognizer::initialize(
        problem,
        RecognizerConfig::baseline(),
        VisibilityPlanner::new(),
    )
    .unwrap();
    frag.observe(&Trajectory::from_point(Point::xy(10.0, 10.0)))
        .unwrap();
    frag.observe(&Trajectory::new(vec![Point::xy(20.0, 10.0), Point::xy(30.0, 10.0)]).unwrap())
        .unwrap();
    for x in [10.0, 20.0, 30.0] {
        pts.observe(&Trajectory::from_point(Point::xy(x, 10.0)))
            .unwrap();
    }
    let (a, b) = (&frag.hypotheses()[0], &pts.hypotheses()[0]);
    assert_eq!(a.prefix, b.prefix);
    assert_eq!(a.score, b.score);
    assert_eq!(frag.stats().calls, 6);
    assert_eq!(pts.stats().calls, 8);
}

#[test]
fn problem_rejects_bad_inputs() {
    assert!(Problem::new(field(), Point::xy(1.0, 1.0), vec![]).is_err());
    assert!(Problem::new(field(), Point::xy(-1.0, 1.0), vec![Point::xy(2.0, 2.0)]).is_err());
    assert!(Problem::new(
        field(),
        Point::xy(1.0, 1.0),
        vec![Point::xyz(2.0, 2.0, 2.0)]
    )
    .is_err());
}
