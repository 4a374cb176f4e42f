// SPDX-License-Identifier: Apache-2.0

//! Seeded RRT* for 2D and 3D worlds.
//!
//! Tree growth with choose-parent and rewiring; the connection radius
//! shrinks as `gamma * (ln n / n)^(1/d)`. Given the same seed and query the
//! output is bitwise identical, and because the random stream does not
//! depend on the budget, a larger iteration budget replays the smaller run
//! and can only lower the returned cost.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{PlanFailure, PlanResult, Planner, PlannerQuery, QueryError};
use crate::geometry::{Aabb, Point, Trajectory, World};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RrtStarConfig {
    /// Steering step as a fraction of the world diagonal.
    pub step_fraction: f64,
    /// Multiplier on the asymptotic-optimality lower bound for gamma.
    pub gamma_factor: f64,
    /// Probability of sampling the goal.
    pub goal_bias: f64,
    /// States within this distance of the goal count as reaching it.
    pub goal_tolerance: f64,
}

impl Default for RrtStarConfig {
    fn default() -> Self {
        Self {
            step_fraction: 0.02,
            gamma_factor: 1.5,
            goal_bias: 0.05,
            goal_tolerance: 1e-6,
        }
    }
}

const NO_PARENT: usize = usize::MAX;

struct Node {
    point: Point,
    parent: usize,
    cost: f64,
}

/// Uniform bucket grid over the world bounds for neighbor queries.
struct Grid {
    min: Point,
    cell: f64,
    shape: [usize; 3],
    dim: usize,
    buckets: Vec<Vec<usize>>,
}

impl Grid {
    fn new(bounds: &Aabb, cell: f64) -> Self {
        let dim = bounds.dim();
        let mut shape = [1usize; 3];
        for (i, s) in shape.iter_mut().enumerate().take(dim) {
            let extent = bounds.max.get(i) - bounds.min.get(i);
            *s = ((extent / cell).ceil() as usize).max(1);
        }
        Self {
            min: bounds.min,
            cell,
            shape,
            dim,
            buckets: vec![Vec::new(); shape.iter().product()],
        }
    }

    fn key(&self, p: &Point) -> [usize; 3] {
        let mut k = [0usize; 3];
        for (i, slot) in k.iter_mut().enumerate().take(self.dim) {
            let c = ((p.get(i) - self.min.get(i)) / self.cell).floor();
            *slot = (c.max(0.0) as usize).min(self.shape[i] - 1);
        }
        k
    }

    fn index(&self, k: [usize; 3]) -> usize {
        (k[2] * self.shape[1] + k[1]) * self.shape[0] + k[0]
    }

    fn insert(&mut self, p: &Point, id: usize) {
        let i = self.index(self.key(p));
        self.buckets[i].push(id);
    }

    fn for_cells_in(&self, lo: [isize; 3], hi: [isize; 3], mut f: impl FnMut(&[usize])) {
        let clamp = |v: isize, axis: usize| v.clamp(0, self.shape[axis] as isize - 1) as usize;
        let (x0, x1) = (clamp(lo[0], 0), clamp(hi[0], 0));
        let (y0, y1) = (clamp(lo[1], 1), clamp(hi[1], 1));
        let (z0, z1) = (clamp(lo[2], 2), clamp(hi[2], 2));
        for z in z0..=z1 {
            for y in y0..=y1 {
                for x in x0..=x1 {
                    f(&self.buckets[self.index([x, y, z])]);
                }
            }
        }
    }

    fn nearest(&self, p: &Point, nodes: &[Node]) -> usize {
        let k = self.key(p);
        let max_ring = *self.shape.iter().max().unwrap_or(&1);
        let (mut best, mut best_d) = (0usize, f64::INFINITY);
        for ring in 0..=max_ring as isize {
            let mut lo = [0isize; 3];
            let mut hi = [0isize; 3];
            for i in 0..self.dim {
                lo[i] = k[i] as isize - ring;
                hi[i] = k[i] as isize + ring;
            }
            self.for_cells_in(lo, hi, |bucket| {
                for &id in bucket {
                    let d = nodes[id].point.distance_squared(p);
                    if d < best_d || (d == best_d && id < best) {
                        best_d = d;
                        best = id;
                    }
                }
            });
            // everything outside this ring is at least `ring * cell` away
            if best_d.is_finite() && best_d.sqrt() <= ring as f64 * self.cell {
                break;
            }
        }
        best
    }

    fn within(&self, p: &Point, radius: f64, nodes: &[Node], out: &mut Vec<usize>) {
        out.clear();
        let reach = (radius / self.cell).ceil() as isize;
        let k = self.key(p);
        let mut lo = [0isize; 3];
        let mut hi = [0isize; 3];
        for i in 0..self.dim {
            lo[i] = k[i] as isize - reach;
            hi[i] = k[i] as isize + reach;
        }
        let r2 = radius * radius;
        self.for_cells_in(lo, hi, |bucket| {
            out.extend(
                bucket
                    .iter()
                    .copied()
                    .filter(|&id| nodes[id].point.distance_squared(p) <= r2),
            );
        });
        out.sort_unstable();
    }
}

fn unit_ball_volume(dim: usize) -> f64 {
    if dim == 2 {
        PI
    } else {
        4.0 / 3.0 * PI
    }
}

fn sample(rng: &mut ChaCha8Rng, bounds: &Aabb) -> Point {
    let mut c = [0.0; 3];
    for (i, slot) in c.iter_mut().enumerate().take(bounds.dim()) {
        *slot = rng.gen_range(bounds.min.get(i)..=bounds.max.get(i));
    }
    Point::new(&c[..bounds.dim()]).expect("sample inside bounds")
}

fn reroot_subtree_costs(nodes: &mut [Node], children: &[Vec<usize>], root: usize, delta: f64) {
    let mut stack: Vec<usize> = children[root].clone();
    while let Some(n) = stack.pop() {
        nodes[n].cost += delta;
        stack.extend_from_slice(&children[n]);
    }
}

/// RRT* with an explicit seed.
pub fn rrt_star_plan(
    query: &PlannerQuery<'_>,
    seed: u64,
    config: &RrtStarConfig,
) -> Result<PlanResult, QueryError> {
    query.validate()?;
    let (start, goal, world) = (query.start, query.goal, query.world);
    if start == goal {
        return Ok(PlanResult::Success(Trajectory::from_point(start)));
    }
    Ok(grow(start, goal, world, query, seed, config))
}

fn grow(
    start: Point,
    goal: Point,
    world: &World,
    query: &PlannerQuery<'_>,
    seed: u64,
    config: &RrtStarConfig,
) -> PlanResult {
    let bounds = world.bounds();
    let dim = bounds.dim() as f64;
    let step = config.step_fraction * bounds.diagonal();
    let gamma = config.gamma_factor
        * 2.0
        * (1.0 + 1.0 / dim).powf(1.0 / dim)
        * (bounds.volume() / unit_ball_volume(bounds.dim())).powf(1.0 / dim);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut grid = Grid::new(bounds, step);
    let mut nodes = vec![Node {
        point: start,
        parent: NO_PARENT,
        cost: 0.0,
    }];
    let mut children: Vec<Vec<usize>> = vec![Vec::new()];
    grid.insert(&start, 0);
    let mut goal_nodes: Vec<usize> = Vec::new();
    let mut near = Vec::new();
    let mut candidates: Vec<(f64, usize)> = Vec::new();
    let started = Instant::now();

    for iter in 0..query.budget.max_iterations {
        if let Some(limit) = query.budget.max_seconds {
            if iter % 64 == 0 && started.elapsed().as_secs_f64() > limit {
                break;
            }
        }
        let target = if rng.gen::<f64>() < config.goal_bias {
            goal
        } else {
            sample(&mut rng, bounds)
        };
        let nearest = grid.nearest(&target, &nodes);
        let from = nodes[nearest].point;
        let d = from.distance(&target);
        if d == 0.0 {
            continue;
        }
        let new = if d <= step {
            target
        } else {
            from.lerp(&target, step / d)
        };
        if !world.is_free(&new) || !world.collision_free(&from, &new) {
            continue;
        }

        let n = nodes.len() as f64 + 1.0;
        let radius = (gamma * (n.ln() / n).powf(1.0 / dim))
            .max(step)
            .min(bounds.diagonal());
        grid.within(&new, radius, &nodes, &mut near);
        if !near.contains(&nearest) {
            near.push(nearest);
        }

        candidates.clear();
        candidates.extend(
            near.iter()
                .map(|&i| (nodes[i].cost + nodes[i].point.distance(&new), i)),
        );
        candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let Some(&(cost, parent)) = candidates
            .iter()
            .find(|&&(_, i)| i == nearest || world.collision_free(&nodes[i].point, &new))
        else {
            continue;
        };

        let id = nodes.len();
        nodes.push(Node {
            point: new,
            parent,
            cost,
        });
        children.push(Vec::new());
        children[parent].push(id);
        grid.insert(&new, id);

        for &x in &near {
            if x == parent {
                continue;
            }
            let via = cost + new.distance(&nodes[x].point);
            if via < nodes[x].cost - 1e-12 && world.collision_free(&new, &nodes[x].point) {
                let old_parent = nodes[x].parent;
                children[old_parent].retain(|&c| c != x);
                children[id].push(x);
                let delta = via - nodes[x].cost;
                nodes[x].parent = id;
                nodes[x].cost = via;
                reroot_subtree_costs(&mut nodes, &children, x, delta);
            }
        }

        if new.distance(&goal) <= config.goal_tolerance {
            goal_nodes.push(id);
        }
    }

    let best = goal_nodes
        .iter()
        .copied()
        .min_by(|&a, &b| nodes[a].cost.total_cmp(&nodes[b].cost).then(a.cmp(&b)));
    let Some(best) = best else {
        return PlanResult::Failure(PlanFailure::BudgetExhausted);
    };
    let mut rev = Vec::new();
    let mut cur = best;
    while cur != NO_PARENT {
        rev.push(nodes[cur].point);
        cur = nodes[cur].parent;
    }
    rev.reverse();
    let last = rev.len() - 1;
    rev[last] = goal;
    rev.dedup();
    PlanResult::Success(Trajectory::new(rev).expect("non-empty path"))
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed for one query: a pure function of the base seed and the endpoints,
/// so call order and parallelism cannot change results.
pub(crate) fn query_seed(base: u64, start: &Point, goal: &Point) -> u64 {
    start
        .coords()
        .iter()
        .chain(goal.coords())
        .fold(splitmix(base), |acc, c| splitmix(acc ^ c.to_bits()))
}

/// [`rrt_star_plan`] behind the [`Planner`] contract.
#[derive(Clone, Debug)]
pub struct RrtStarPlanner {
    seed: u64,
    config: RrtStarConfig,
}

impl RrtStarPlanner {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            config: RrtStarConfig::default(),
        }
    }

    pub fn with_config(seed: u64, config: RrtStarConfig) -> Self {
        Self { seed, config }
    }
}

impl Planner for RrtStarPlanner {
    fn name(&self) -> &'static str {
        "rrtstar"
    }

    fn plan(&self, query: &PlannerQuery<'_>) -> Result<PlanResult, QueryError> {
        let seed = query_seed(self.seed, &query.start, &query.goal);
        rrt_star_plan(query, seed, &self.config)
    }
}
