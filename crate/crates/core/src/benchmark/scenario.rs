// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::BenchmarkError;
use crate::geometry::{Aabb, Obstacle, Point, Trajectory, World};
use crate::planner::{Planner, PlannerConfig, PlannerQuery};
use crate::recognizer::Problem;

/// Minimum pairwise goal separation in scattered layouts, fraction of the diagonal.
pub const SCATTER_SEPARATION: f64 = 0.15;
/// Maximum distance of a clustered extra goal from its anchor, fraction of the diagonal.
pub const CLUSTER_RADIUS: f64 = 0.03;
/// Minimum distance of an extra goal from any other goal, fraction of the diagonal.
const CLUSTER_MIN_GAP: f64 = 0.01;
const MAX_RETRIES: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layout {
    Scattered,
    Clustered,
}

impl fmt::Display for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Layout::Scattered => "scattered",
            Layout::Clustered => "clustered",
        })
    }
}

impl FromStr for Layout {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "scattered" => Ok(Layout::Scattered),
            "clustered" => Ok(Layout::Clustered),
            other => Err(format!(
                "unknown layout `{other}` (expected scattered or clustered)"
            )),
        }
    }
}

/// One recognition problem with its observation trace.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub id: String,
    pub problem: Problem,
    pub true_goal: usize,
    pub trace: Vec<Trajectory>,
    pub label: Layout,
    pub seed: u64,
}

impl Scenario {
    pub fn num_goals(&self) -> usize {
        self.problem.goals().len()
    }
}

/// Observation entry in scenario files: a bare point or a point list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ObservationRecord {
    Point(Point),
    Fragment(Trajectory),
}

impl From<&Trajectory> for ObservationRecord {
    fn from(t: &Trajectory) -> Self {
        if t.num_points() == 1 {
            ObservationRecord::Point(t.start())
        } else {
            ObservationRecord::Fragment(t.clone())
        }
    }
}

impl From<ObservationRecord> for Trajectory {
    fn from(r: ObservationRecord) -> Self {
        match r {
            ObservationRecord::Point(p) => Trajectory::from_point(p),
            ObservationRecord::Fragment(t) => t,
        }
    }
}

/// On-disk scenario schema.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub dimension: usize,
    pub bounds: Aabb,
    #[serde(default)]
    pub obstacles: Vec<Obstacle>,
    pub initial: Point,
    pub goals: Vec<Point>,
    pub true_goal: usize,
    pub trace: Vec<ObservationRecord>,
    pub seed: u64,
    pub label: Layout,
}

impl From<&Scenario> for ScenarioFile {
    fn from(s: &Scenario) -> Self {
        let world = s.problem.world();
        ScenarioFile {
            id: Some(s.id.clone()),
            dimension: world.dim(),
            bounds: *world.bounds(),
            obstacles: world.obstacles().to_vec(),
            initial: s.problem.initial(),
            goals: s.problem.goals().to_vec(),
            true_goal: s.true_goal,
            trace: s.trace.iter().map(ObservationRecord::from).collect(),
            seed: s.seed,
            label: s.label,
        }
    }
}

impl ScenarioFile {
    /// Validates the file against the schema invariants. `fallback_id` is
    /// used when the file carries no id.
    pub fn into_scenario(self, fallback_id: &str) -> Result<Scenario, BenchmarkError> {
        let schema = |m: String| BenchmarkError::Schema(m);
        if self.dimension != self.bounds.dim() {
            return Err(schema(format!(
                "dimension {} does not match bounds dimension {}",
                self.dimension,
                self.bounds.dim()
            )));
        }
        let world = World::new(self.bounds, self.obstacles).map_err(|e| schema(e.to_string()))?;
        let problem =
            Problem::new(world, self.initial, self.goals).map_err(|e| schema(e.to_string()))?;
        if self.true_goal >= problem.goals().len() {
            return Err(schema(format!("true_goal {} out of range", self.true_goal)));
        }
        if self.trace.len() < 2 {
            return Err(schema("trace needs at least two observations".into()));
        }
        let trace: Vec<Trajectory> = self.trace.into_iter().map(Trajectory::from).collect();
        if let Some(bad) = trace.iter().find(|o| o.dim() != self.dimension) {
            return Err(schema(format!("observation has dimension {}", bad.dim())));
        }
        Ok(Scenario {
            id: self.id.unwrap_or_else(|| fallback_id.to_string()),
            problem,
            true_goal: self.true_goal,
            trace,
            label: self.label,
            seed: self.seed,
        })
    }
}

/// Random obstacle field parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorldSpec {
    pub dimension: usize,
    /// Side length of the cubic/square bounds, meters.
    pub size: f64,
    pub obstacles: usize,
}

impl Default for WorldSpec {
    fn default() -> Self {
        Self {
            dimension: 2,
            size: 100.0,
            obstacles: 8,
        }
    }
}

/// Non-overlapping convex polygons (2D) or boxes (3D) at random.
pub fn generate_world(seed: u64, spec: &WorldSpec) -> Result<World, BenchmarkError> {
    if !(2..=3).contains(&spec.dimension) {
        return Err(BenchmarkError::Config(format!(
            "dimension must be 2 or 3, got {}",
            spec.dimension
        )));
    }
    let d = spec.dimension;
    let size = spec.size;
    let bounds = Aabb::new(Point::zeros(d), Point::new(&vec![size; d])?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut placed: Vec<(Point, f64)> = Vec::new();
    let mut obstacles = Vec::new();
    let mut tries = 0;
    while obstacles.len() < spec.obstacles {
        tries += 1;
        if tries > MAX_RETRIES {
            return Err(BenchmarkError::Placement("obstacles"));
        }
        let center: Vec<f64> = (0..d)
            .map(|_| rng.gen_range(0.15 * size..0.85 * size))
            .collect();
        let center = Point::new(&center)?;
        let radius = rng.gen_range(0.04 * size..0.09 * size);
        if placed
            .iter()
            .any(|(c, r)| c.distance(&center) < r + radius + 0.04 * size)
        {
            continue;
        }
        let obstacle = if d == 2 {
            let k = rng.gen_range(3..=6);
            let mut angles: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..TAU)).collect();
            angles.sort_by(f64::total_cmp);
            let verts: Vec<Point> = angles
                .iter()
                .map(|a| Point::xy(center.x() + radius * a.cos(), center.y() + radius * a.sin()))
                .collect();
            match Obstacle::polygon(verts) {
                Ok(o) => o,
                Err(_) => continue,
            }
        } else {
            let half: Vec<f64> = (0..d)
                .map(|_| rng.gen_range(0.5 * radius..radius) / 3f64.sqrt())
                .collect();
            let lo: Vec<f64> = (0..d).map(|i| center.get(i) - half[i]).collect();
            let hi: Vec<f64> = (0..d).map(|i| center.get(i) + half[i]).collect();
            Obstacle::aabb(Point::new(&lo)?, Point::new(&hi)?)?
        };
        placed.push((center, radius));
        obstacles.push(obstacle);
    }
    Ok(World::new(bounds, obstacles)?)
}

fn random_free_point(rng: &mut ChaCha8Rng, world: &World, margin: f64) -> Option<Point> {
    let b = world.bounds();
    for _ in 0..MAX_RETRIES {
        let c: Vec<f64> = (0..b.dim())
            .map(|i| rng.gen_range(b.min.get(i) + margin..b.max.get(i) - margin))
            .collect();
        let p = Point::new(&c).ok()?;
        if has_clearance(world, &p, margin) {
            return Some(p);
        }
    }
    None
}

/// Free, and free at `margin` along every axis direction.
fn has_clearance(world: &World, p: &Point, margin: f64) -> bool {
    if !world.is_free(p) {
        return false;
    }
    (0..p.dim()).all(|axis| {
        [-margin, margin].iter().all(|&m| {
            let mut c = p.coords().to_vec();
            c[axis] += m;
            Point::new(&c).is_ok_and(|q| world.is_free(&q) && world.collision_free(p, &q))
        })
    })
}

/// `count` sites with pairwise separation of at least `min_sep`.
pub fn scatter_sites(
    rng: &mut ChaCha8Rng,
    world: &World,
    count: usize,
    min_sep: f64,
) -> Result<Vec<Point>, BenchmarkError> {
    let margin = 0.02 * world.bounds().diagonal();
    'restart: for _ in 0..100 {
        let mut sites: Vec<Point> = Vec::with_capacity(count);
        let mut misses = 0;
        while sites.len() < count {
            let p =
                random_free_point(rng, world, margin).ok_or(BenchmarkError::Placement("goals"))?;
            if sites.iter().all(|s| s.distance(&p) >= min_sep) {
                sites.push(p);
            } else {
                misses += 1;
                if misses > 2_000 {
                    continue 'restart;
                }
            }
        }
        return Ok(sites);
    }
    Err(BenchmarkError::Placement("goals"))
}

/// Observation trace toward `true_goal`.
///
/// The planned path is cut at `k` equally spaced arc-length stations. Without
/// noise, each observation is the stretch of path since the previous station,
/// so the concatenated trace reproduces the path exactly. With noise, interior
/// stations get an isotropic Gaussian offset (kept only if it stays free) and
/// each observation is the single perturbed point. The first observation is
/// the initial pose and the last ends exactly at the goal.
pub fn generate_trace<P: Planner + ?Sized>(
    problem: &Problem,
    true_goal: usize,
    planner: &P,
    k: usize,
    noise_sigma: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Trajectory>, BenchmarkError> {
    if k < 2 {
        return Err(BenchmarkError::Config(
            "trace needs at least two observations".into(),
        ));
    }
    let goal = *problem
        .goals()
        .get(true_goal)
        .ok_or_else(|| BenchmarkError::Config(format!("true goal {true_goal} out of range")))?;
    let world = problem.world();
    let path = planner
        .plan(&PlannerQuery::new(problem.initial(), goal, world))?
        .into_trajectory()
        .ok_or(BenchmarkError::Unreachable)?;
    let total = path.length();
    let station = |j: usize| total * j as f64 / (k - 1) as f64;

    let mut trace = Vec::with_capacity(k);
    trace.push(Trajectory::from_point(problem.initial()));
    if noise_sigma <= 0.0 {
        for j in 1..k {
            let piece = path.slice(station(j - 1), station(j));
            let points = if j == k - 1 {
                let mut p = piece.points().to_vec();
                let last = p.len() - 1;
                p[last] = goal;
                p
            } else {
                piece.points().to_vec()
            };
            let points = if points.len() > 1 {
                points[1..].to_vec()
            } else {
                points
            };
            trace.push(Trajectory::new(points)?);
        }
    } else {
        let normal = Normal::new(0.0, noise_sigma)
            .map_err(|e| BenchmarkError::Config(format!("noise sigma: {e}")))?;
        for j in 1..k - 1 {
            let base = path.point_at(station(j));
            let mut chosen = base;
            for _ in 0..32 {
                let c: Vec<f64> = base
                    .coords()
                    .iter()
                    .map(|v| v + normal.sample(rng))
                    .collect();
                let q = Point::new(&c)?;
                if world.is_free(&q) {
                    chosen = q;
                    break;
                }
            }
            trace.push(Trajectory::from_point(chosen));
        }
        trace.push(Trajectory::from_point(goal));
    }
    Ok(trace)
}

/// Scenario-suite generation parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub world_seed: u64,
    pub world: WorldSpec,
    pub n_goals: usize,
    pub mode: Layout,
    /// Extra goals added next to existing ones in clustered mode.
    pub extra_goals: usize,
    pub count: usize,
    pub min_observations: usize,
    pub max_observations: usize,
    pub noise_sigma: f64,
    /// Planner that produces the observed agent's path.
    pub trace_planner: PlannerConfig,
}

impl ScenarioConfig {
    pub fn new(world_seed: u64, n_goals: usize, mode: Layout, count: usize) -> Self {
        Self {
            world_seed,
            world: WorldSpec::default(),
            n_goals,
            mode,
            extra_goals: 9,
            count,
            min_observations: 20,
            max_observations: 76,
            noise_sigma: 0.0,
            trace_planner: PlannerConfig::rrt_star(world_seed),
        }
    }
}

pub(crate) fn mix(a: u64, b: u64) -> u64 {
    let mut x = a ^ b.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Generates `count` scenarios in one world.
///
/// `n_goals + 1` well-separated sites are placed; scenario `i` walks the
/// ordered (start, goal) site pairs, using the remaining `n_goals` sites as
/// the goal set. Clustered mode builds the identical scattered scenario and
/// then appends `extra_goals` goals, each within [`CLUSTER_RADIUS`] of a
/// distinct existing goal, so the two suites differ only in the distractors.
pub fn generate_scenarios(cfg: &ScenarioConfig) -> Result<Vec<Scenario>, BenchmarkError> {
    if cfg.n_goals < 2 {
        return Err(BenchmarkError::Config("n_goals must be at least 2".into()));
    }
    if cfg.min_observations < 2 || cfg.min_observations > cfg.max_observations {
        return Err(BenchmarkError::Config(
            "observation range must satisfy 2 <= min <= max".into(),
        ));
    }
    if cfg.count == 0 {
        return Ok(Vec::new());
    }
    let world = generate_world(cfg.world_seed, &cfg.world)?;
    let diag = world.bounds().diagonal();
    let mut site_rng = ChaCha8Rng::seed_from_u64(mix(cfg.world_seed, 1));
    let sites = scatter_sites(
        &mut site_rng,
        &world,
        cfg.n_goals + 1,
        SCATTER_SEPARATION * diag,
    )?;
    let trace_planner = cfg.trace_planner.build();
    let pairs = sites.len() * cfg.n_goals;

    (0..cfg.count)
        .map(|i| {
            let seed = mix(cfg.world_seed, 1000 + i as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pair = i % pairs;
            let start = pair / cfg.n_goals;
            let target_local = pair % cfg.n_goals;
            let mut goals: Vec<Point> = sites
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != start)
                .map(|(_, p)| *p)
                .collect();
            let true_goal = target_local;
            let k = rng.gen_range(cfg.min_observations..=cfg.max_observations);
            let base = Problem::new(world.clone(), sites[start], goals.clone())?;
            let trace = generate_trace(
                &base,
                true_goal,
                &trace_planner,
                k,
                cfg.noise_sigma,
                &mut rng,
            )?;

            if cfg.mode == Layout::Clustered {
                let mut extra_rng = ChaCha8Rng::seed_from_u64(mix(seed, 2));
                let extras = cluster_goals(
                    &mut extra_rng,
                    &world,
                    sites[start],
                    &goals,
                    cfg.extra_goals,
                    diag,
                )?;
                goals.extend(extras);
            }
            let problem = Problem::new(world.clone(), sites[start], goals)?;
            Ok(Scenario {
                id: format!("{}-s{}-{:04}", cfg.mode, cfg.world_seed, i),
                problem,
                true_goal,
                trace,
                label: cfg.mode,
                seed,
            })
        })
        .collect()
}

fn cluster_goals(
    rng: &mut ChaCha8Rng,
    world: &World,
    initial: Point,
    goals: &[Point],
    extra: usize,
    diag: f64,
) -> Result<Vec<Point>, BenchmarkError> {
    let mut anchors: Vec<usize> = (0..goals.len()).collect();
    anchors.shuffle(rng);
    let mut out: Vec<Point> = Vec::with_capacity(extra);
    for n in 0..extra {
        let anchor = goals[anchors[n % anchors.len()]];
        let mut placed = None;
        for _ in 0..MAX_RETRIES {
            let r = rng.gen_range(CLUSTER_MIN_GAP * 1.5 * diag..=CLUSTER_RADIUS * diag);
            let dir: Vec<f64> = (0..anchor.dim())
                .map(|_| rng.gen_range(-1.0..1.0))
                .collect();
            let dir = Point::new(&dir)?;
            let norm = dir.norm();
            if !(1e-3..=1.0).contains(&norm) {
                continue;
            }
            let p = anchor.add(&dir.scale(r / norm));
            let clear = std::iter::once(&initial)
                .chain(goals)
                .chain(&out)
                .all(|q| q.distance(&p) >= CLUSTER_MIN_GAP * diag);
            if clear && world.is_free(&p) && world.collision_free(&anchor, &p) {
                placed = Some(p);
                break;
            }
        }
        out.push(placed.ok_or(BenchmarkError::Placement("clustered goals"))?);
    }
    Ok(out)
}
