// SPDX-License-Identifier: Apache-2.0

use goalrec::benchmark::{generate_world, scatter_sites, WorldSpec};
use goalrec::geometry::{Aabb, Obstacle, Point, Trajectory, World};
use goalrec::planner::{
    Instrumented, PlanFailure, PlanResult, Planner, PlannerQuery, RrtStarPlanner, VisibilityPlanner,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn assert_valid_path(world: &World, path: &Trajectory, start: Point, goal: Point) {
    assert_eq!(path.start(), start);
    assert_eq!(path.end(), goal);
    for w in path.points().windows(2) {
        assert!(
            world.collision_free(&w[0], &w[1]),
            "segment {:?} -> {:?} collides",
            w[0],
            w[1]
        );
    }
}

#[test]
fn detour_around_single_box_matches_hand_computation() {
    let bounds = Aabb::new(Point::xy(0.0, 0.0), Point::xy(20.0, 20.0)).unwrap();
    let block = Obstacle::aabb(Point::xy(8.0, 6.0), Point::xy(12.0, 12.0)).unwrap();
    let world = World::new(bounds, vec![block]).unwrap();
    let (s, g) = (Point::xy(2.0, 10.0), Point::xy(18.0, 10.0));
    // over the top: two legs through (8,12) and (12,12)
    let top = s.distance(&Point::xy(8.0, 12.0)) + 4.0 + Point::xy(12.0, 12.0).distance(&g);
    let bottom = s.distance(&Point::xy(8.0, 6.0)) + 4.0 + Point::xy(12.0, 6.0).distance(&g);
    let r = VisibilityPlanner::new()
        .plan(&PlannerQuery::new(s, g, &world))
        .unwrap();
    assert!((r.cost() - top.min(bottom)).abs() < 1e-9);
    assert_valid_path(&world, r.trajectory().unwrap(), s, g);
}

#[test]
fn random_worlds_visibility_is_a_lower_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..25 {
        let world = generate_world(i, &WorldSpec::default()).unwrap();
        let ends = scatter_sites(&mut rng, &world, 2, 20.0).unwrap();
        let (s, g) = (ends[0], ends[1]);
        let q = PlannerQuery::new(s, g, &world);
        let opt = VisibilityPlanner::new().plan(&q).unwrap();
        let back = VisibilityPlanner::new()
            .plan(&PlannerQuery::new(g, s, &world))
            .unwrap();
        let Some(path) = opt.trajectory() else {
            continue;
        };
        assert_valid_path(&world, path, s, g);
        assert!(opt.cost() >= s.distance(&g) - 1e-9);
        assert!((opt.cost() - back.cost()).abs() < 1e-9, "asymmetric cost");
        let rrt = RrtStarPlanner::new(i).plan(&q).unwrap();
        if let Some(p) = rrt.trajectory() {
            assert_valid_path(&world, p, s, g);
            assert!(
                rrt.cost() >= opt.cost() - 1e-9,
                "sampling planner beat the optimum"
            );
        }
    }
}

#[test]
fn rrt_star_is_reproducible_per_query() {
    let world = generate_world(8, &WorldSpec::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let ends = scatter_sites(&mut rng, &world, 2, 30.0).unwrap();
    let q = PlannerQuery::new(ends[0], ends[1], &world);
    let a = RrtStarPlanner::new(99).plan(&q).unwrap();
    let b = RrtStarPlanner::new(99).plan(&q).unwrap();
    assert_eq!(a, b);
}

#[test]
fn three_dimensional_rrt_star_avoids_boxes() {
    let spec = WorldSpec {
        dimension: 3,
        size: 50.0,
        obstacles: 5,
    };
    let world = generate_world(4, &spec).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let ends = scatter_sites(&mut rng, &world, 2, 20.0).unwrap();
    let r = RrtStarPlanner::new(1)
        .plan(&PlannerQuery::new(ends[0], ends[1], &world))
        .unwrap();
    let path = r.trajectory().expect("open 3D world is solvable");
    assert_valid_path(&world, path, ends[0], ends[1]);
    assert!(VisibilityPlanner::new()
        .plan(&PlannerQuery::new(ends[0], ends[1], &world))
        .is_err());
}

#[test]
fn instrumentation_counts_every_call() {
    let bounds = Aabb::new(Point::xy(0.0, 0.0), Point::xy(10.0, 10.0)).unwrap();
    let ring: Vec<Obstacle> = [
        (3.0, 3.0, 7.0, 4.0),
        (3.0, 6.0, 7.0, 7.0),
        (3.0, 3.5, 4.0, 6.5),
        (6.0, 3.5, 7.0, 6.5),
    ]
    .iter()
    .map(|&(a, b, c, d)| Obstacle::aabb(Point::xy(a, b), Point::xy(c, d)).unwrap())
    .collect();
    let world = World::new(bounds, ring).unwrap();
    let p = Instrumented::new(VisibilityPlanner::new());
    let ok = p
        .plan(&PlannerQuery::new(
            Point::xy(1.0, 1.0),
            Point::xy(9.0, 9.0),
            &world,
        ))
        .unwrap();
    let sealed = p
        .plan(&PlannerQuery::new(
            Point::xy(1.0, 1.0),
            Point::xy(5.0, 5.0),
            &world,
        ))
        .unwrap();
    assert!(ok.is_success());
    assert_eq!(sealed, PlanResult::Failure(PlanFailure::Unreachable));
    let stats = p.stats();
    assert_eq!(stats.calls, 2);
    assert_eq!(stats.failures, 1);
    assert!(stats.total_time >= 0.0);
}
