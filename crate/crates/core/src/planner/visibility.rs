// SPDX-License-Identifier: Apache-2.0

//! Exact shortest paths in 2D polygonal worlds.
//!
//! The shortest collision-free path between two points among convex polygons
//! bends only at obstacle vertices, so a uniform-cost search over the
//! visibility graph (obstacle vertices plus start and goal) is optimal.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::{Arc, Mutex};

use super::{PlanFailure, PlanResult, Planner, PlannerQuery, QueryError};
use crate::geometry::{Point, Trajectory, World};

/// Static part of the visibility graph: obstacle vertices and their mutual
/// visibility. Depends only on the world.
#[derive(Debug)]
struct VertexGraph {
    world: World,
    nodes: Vec<Point>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl VertexGraph {
    fn build(world: &World) -> Self {
        let mut nodes: Vec<Point> = Vec::new();
        for o in world.obstacles() {
            for v in o.vertices_2d().unwrap_or_default() {
                if world.is_free(&v) && !nodes.contains(&v) {
                    nodes.push(v);
                }
            }
        }
        let mut adjacency = vec![Vec::new(); nodes.len()];
        for i in 0..nodes.len() {
            for j in (i + 1)..nodes.len() {
                if world.collision_free(&nodes[i], &nodes[j]) {
                    let d = nodes[i].distance(&nodes[j]);
                    adjacency[i].push((j, d));
                    adjacency[j].push((i, d));
                }
            }
        }
        Self {
            world: world.clone(),
            nodes,
            adjacency,
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Frontier {
    cost: f64,
    node: usize,
}

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on cost, then on node index
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn search(graph: &VertexGraph, start: Point, goal: Point) -> PlanResult {
    let world = &graph.world;
    if start == goal {
        return PlanResult::Success(Trajectory::from_point(start));
    }
    if world.collision_free(&start, &goal) {
        return PlanResult::Success(Trajectory::segment(start, goal));
    }
    let n = graph.nodes.len();
    let (s_idx, g_idx) = (n, n + 1);
    let goal_visible: Vec<bool> = graph
        .nodes
        .iter()
        .map(|v| world.collision_free(v, &goal))
        .collect();

    let mut dist = vec![f64::INFINITY; n + 2];
    let mut prev = vec![usize::MAX; n + 2];
    let mut heap = BinaryHeap::new();
    dist[s_idx] = 0.0;
    heap.push(Frontier {
        cost: 0.0,
        node: s_idx,
    });

    while let Some(Frontier { cost, node }) = heap.pop() {
        if cost > dist[node] {
            continue;
        }
        if node == g_idx {
            break;
        }
        let here = if node == s_idx {
            start
        } else {
            graph.nodes[node]
        };
        let mut relax = |next: usize, step: f64, heap: &mut BinaryHeap<Frontier>| {
            let c = cost + step;
            if c < dist[next] {
                dist[next] = c;
                prev[next] = node;
                heap.push(Frontier {
                    cost: c,
                    node: next,
                });
            }
        };
        if node == s_idx {
            for (j, v) in graph.nodes.iter().enumerate() {
                if world.collision_free(&start, v) {
                    relax(j, start.distance(v), &mut heap);
                }
            }
        } else {
            for &(j, d) in &graph.adjacency[node] {
                relax(j, d, &mut heap);
            }
            if goal_visible[node] {
                relax(g_idx, here.distance(&goal), &mut heap);
            }
        }
    }

    if !dist[g_idx].is_finite() {
        return PlanResult::Failure(PlanFailure::Unreachable);
    }
    let mut rev = vec![goal];
    let mut cur = prev[g_idx];
    while cur != s_idx {
        rev.push(graph.nodes[cur]);
        cur = prev[cur];
    }
    rev.push(start);
    rev.reverse();
    rev.dedup();
    PlanResult::Success(Trajectory::new(rev).expect("non-empty path"))
}

/// One-shot visibility-graph planning (builds the graph for this call).
pub fn visibility_plan(query: &PlannerQuery<'_>) -> Result<PlanResult, QueryError> {
    check(query)?;
    Ok(search(
        &VertexGraph::build(query.world),
        query.start,
        query.goal,
    ))
}

fn check(query: &PlannerQuery<'_>) -> Result<(), QueryError> {
    if query.world.dim() != 2 {
        return Err(QueryError::UnsupportedDimension {
            planner: "visibility",
            dim: query.world.dim(),
        });
    }
    query.validate()
}

/// Deterministic optimal 2D planner.
///
/// Keeps the vertex graph of the most recently seen world, so repeated
/// queries in one world only pay for start/goal visibility.
#[derive(Debug, Default)]
pub struct VisibilityPlanner {
    cache: Mutex<Option<Arc<VertexGraph>>>,
}

impl VisibilityPlanner {
    pub fn new() -> Self {
        Self::default()
    }

    fn graph_for(&self, world: &World) -> Arc<VertexGraph> {
        let mut cache = self.cache.lock().unwrap_or_else(|e| e.into_inner());
        match cache.as_ref() {
            Some(g) if g.world == *world => Arc::clone(g),
            _ => {
                let g = Arc::new(VertexGraph::build(world));
                *cache = Some(Arc::clone(&g));
                g
            }
        }
    }
}

impl Planner for VisibilityPlanner {
    fn name(&self) -> &'static str {
        "visibility"
    }

    fn plan(&self, query: &PlannerQuery<'_>) -> Result<PlanResult, QueryError> {
        check(query)?;
        let graph = self.graph_for(query.world);
        Ok(search(&graph, query.start, query.goal))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Aabb, Obstacle};

    fn bounds() -> Aabb {
        Aabb::new(Point::xy(-10.0, -10.0), Point::xy(10.0, 10.0)).unwrap()
    }

    fn plan(w: &World, a: Point, b: Point) -> PlanResult {
        VisibilityPlanner::new()
            .plan(&PlannerQuery::new(a, b, w))
            .unwrap()
    }

    #[test]
    fn no_obstacles_straight_segment() {
        let w = World::empty(bounds());
        let r = plan(&w, Point::xy(0.0, 0.0), Point::xy(3.0, 4.0));
        assert_eq!(
            r.trajectory().unwrap(),
            &Trajectory::segment(Point::xy(0.0, 0.0), Point::xy(3.0, 4.0))
        );
        assert_eq!(r.cost(), 5.0);
    }

    #[test]
    fn start_equals_goal() {
        let w = World::empty(bounds());
        let r = plan(&w, Point::xy(1.0, 1.0), Point::xy(1.0, 1.0));
        assert_eq!(r.trajectory().unwrap().num_points(), 1);
        assert_eq!(r.cost(), 0.0);
    }

    #[test]
    fn unit_square_between_start_and_goal() {
        // square [-0.5,0.5]^2, start (-2,0), goal (2,0): path over one corner
        let sq = Obstacle::aabb(Point::xy(-0.5, -0.5), Point::xy(0.5, 0.5)).unwrap();
        let w = World::new(bounds(), vec![sq]).unwrap();
        let r = plan(&w, Point::xy(-2.0, 0.0), Point::xy(2.0, 0.0));
        // (-2,0) -> (-0.5,±0.5) -> (0.5,±0.5) -> (2,0)
        let leg = (1.5f64 * 1.5 + 0.25).sqrt();
        let expected = 2.0 * leg + 1.0;
        assert!((r.cost() - expected).abs() < 1e-12, "{}", r.cost());
        let t = r.trajectory().unwrap();
        assert_eq!(t.points()[1], Point::xy(-0.5, -0.5));
        for w2 in t.points().windows(2) {
            assert!(w.collision_free(&w2[0], &w2[1]));
        }
    }

    #[test]
    fn sealed_goal_is_unreachable() {
        // overlapping boxes form a closed ring around the goal
        let ring = vec![
            Obstacle::aabb(Point::xy(-3.0, 2.0), Point::xy(3.0, 3.0)).unwrap(),
            Obstacle::aabb(Point::xy(-3.0, -3.0), Point::xy(3.0, -2.0)).unwrap(),
            Obstacle::aabb(Point::xy(-3.0, -3.0), Point::xy(-2.0, 3.0)).unwrap(),
            Obstacle::aabb(Point::xy(2.0, -3.0), Point::xy(3.0, 3.0)).unwrap(),
        ];
        let w = World::new(bounds(), ring).unwrap();
        let r = plan(&w, Point::xy(-8.0, 0.0), Point::xy(0.0, 0.0));
        assert_eq!(r, PlanResult::Failure(PlanFailure::Unreachable));
    }

    #[test]
    fn rejects_3d() {
        let b = Aabb::new(Point::xyz(0.0, 0.0, 0.0), Point::xyz(1.0, 1.0, 1.0)).unwrap();
        let w = World::empty(b);
        let q = PlannerQuery::new(Point::xyz(0.1, 0.1, 0.1), Point::xyz(0.9, 0.9, 0.9), &w);
        assert!(matches!(
            VisibilityPlanner::new().plan(&q),
            Err(QueryError::UnsupportedDimension { .. })
        ));
    }

    #[test]
    fn cached_and_one_shot_agree() {
        let sq = Obstacle::aabb(Point::xy(-0.5, -0.5), Point::xy(0.5, 0.5)).unwrap();
        let w = World::new(bounds(), vec![sq]).unwrap();
        let p = VisibilityPlanner::new();
        let q = PlannerQuery::new(Point::xy(-2.0, 0.1), Point::xy(2.0, -0.3), &w);
        let a = p.plan(&q).unwrap();
        let b = p.plan(&q).unwrap();
        let c = visibility_plan(&q).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }
}
