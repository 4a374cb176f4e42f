// SPDX-License-Identifier: Apache-2.0

//! `goalrec` command-line driver.
//!
//! Exit codes: 0 success, 1 other failure, 2 usage error, 3 missing input
//! file, 4 schema violation, 5 no results found.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use goalrec::benchmark::{
    deterioration, generate_scenarios, parse_approaches, run_suite, summarize, Approach,
    ApproachSummary, Layout, Scenario, ScenarioConfig, ScenarioFile, ScenarioRecord, SuiteOptions,
    WorldSpec,
};
use goalrec::heuristics::{PrunePolicy, DEFAULT_ANGLE_THRESHOLD_DEG};
use goalrec::planner::{Budget, PlannerConfig, PlannerKind};
use goalrec::recognizer::RecognizerConfig;
use goalrec::teamtask::{run_matrix, FieldConfig};

const RESULTS_CSV: &str = "results.csv";
const RESULTS_META: &str = "results.meta.json";
const MANIFEST: &str = "manifest.json";

#[derive(Parser, Debug)]
#[command(
    name = "goalrec",
    version,
    about = "Online goal recognition benchmark driver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a scenario suite as JSON files.
    Gen(GenArgs),
    /// Run recognition approaches over scenario files.
    Run(RunArgs),
    /// Simulate the observer/observed team task.
    Teamtask(TeamArgs),
    /// Summarize result directories.
    Report(ReportArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
struct OutArgs {
    /// Output directory.
    #[arg(long, env = "GOALREC_OUT", default_value = "out")]
    out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct GenArgs {
    #[arg(long, default_value_t = 10)]
    goals: usize,
    #[arg(long, default_value = "scattered")]
    mode: Layout,
    #[arg(long, default_value_t = 110)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Distractor goals added in clustered mode.
    #[arg(long, default_value_t = 9)]
    extra: usize,
    /// Standard deviation of observation noise, meters.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long, default_value_t = 20)]
    min_obs: usize,
    #[arg(long, default_value_t = 76)]
    max_obs: usize,
    #[arg(long, default_value_t = 2)]
    dimension: usize,
    #[arg(long, default_value_t = 8)]
    obstacles: usize,
    #[arg(long, default_value_t = 100.0)]
    size: f64,
    /// Planner that produces the observed paths.
    #[arg(long, default_value = "rrtstar")]
    trace_planner: PlannerKind,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Timing {
    /// Record measured planning time.
    Wall,
    /// Write 0 to the timing column so outputs are reproducible byte for byte.
    Off,
}

#[derive(Args, Debug, Serialize)]
struct PlannerArgs {
    #[arg(long, default_value = "visibility")]
    planner: PlannerKind,
    #[arg(long = "planner-seed", default_value_t = 0)]
    planner_seed: u64,
    /// Iteration budget per sampling-planner query.
    #[arg(long, default_value_t = 4000)]
    iterations: usize,
    /// Optional wall-clock cap per query, seconds.
    #[arg(long)]
    max_seconds: Option<f64>,
}

impl PlannerArgs {
    fn config(&self) -> PlannerConfig {
        PlannerConfig {
            kind: self.planner,
            seed: self.planner_seed,
            budget: Budget {
                max_iterations: self.iterations,
                max_seconds: self.max_seconds,
            },
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct RunArgs {
    /// Scenario files or directories of them.
    #[arg(long = "scenarios", required = true, num_args = 1..)]
    scenarios: Vec<PathBuf>,
    /// Comma-separated approach names.
    #[arg(long = "approach", value_delimiter = ',', default_value = "baseline")]
    approaches: Vec<String>,
    #[command(flatten)]
    planner: PlannerArgs,
    #[arg(long = "angle", default_value_t = DEFAULT_ANGLE_THRESHOLD_DEG)]
    angle_threshold: f64,
    #[arg(long, value_enum, default_value_t = Timing::Wall)]
    timing: Timing,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug, Serialize)]
struct TeamArgs {
    /// Field description as JSON; the built-in field when omitted.
    #[arg(long)]
    field: Option<PathBuf>,
    #[arg(long)]
    speed: Option<f64>,
    #[arg(long)]
    tick: Option<f64>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug, Serialize)]
struct ReportArgs {
    /// Result directory (or results CSV) of the reference suite.
    #[arg(long, required = true)]
    results: PathBuf,
    /// Optional result directory of a harder suite to compare against.
    #[arg(long)]
    against: Option<PathBuf>,
    #[command(flatten)]
    out: OutArgs,
}

// Error markers mapped to exit codes.
#[derive(Debug)]
struct MissingFile(PathBuf);
#[derive(Debug)]
struct SchemaViolation(String);
#[derive(Debug)]
struct NoResults(PathBuf);

impl fmt::Display for MissingFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "file not found: {}", self.0.display())
    }
}

impl fmt::Display for SchemaViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "schema violation: {}", self.0)
    }
}

impl fmt::Display for NoResults {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "no results found in {}", self.0.display())
    }
}

impl std::error::Error for MissingFile {}
impl std::error::Error for SchemaViolation {}
impl std::error::Error for NoResults {}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<MissingFile>() {
            return 3;
        }
        if cause.is::<SchemaViolation>() {
            return 4;
        }
        if cause.is::<NoResults>() {
            return 5;
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Gen(a) => cmd_gen(&a),
        Command::Run(a) => cmd_run(&a),
        Command::Teamtask(a) => cmd_teamtask(&a),
        Command::Report(a) => cmd_report(&a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    write_atomic(path, &bytes)
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| anyhow::anyhow!("csv buffer: {e}"))?;
    write_atomic(path, &bytes)
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'static str,
    version: &'static str,
    config: &'a ScenarioConfig,
    scenarios: Vec<ManifestEntry>,
}

#[derive(Serialize)]
struct ManifestEntry {
    id: String,
    file: String,
    seed: u64,
    true_goal: usize,
    goals: usize,
    observations: usize,
}

fn cmd_gen(a: &GenArgs) -> Result<()> {
    let mut cfg = ScenarioConfig::new(a.seed, a.goals, a.mode, a.count);
    cfg.extra_goals = a.extra;
    cfg.noise_sigma = a.noise;
    cfg.min_observations = a.min_obs;
    cfg.max_observations = a.max_obs;
    cfg.world = WorldSpec {
        dimension: a.dimension,
        size: a.size,
        obstacles: a.obstacles,
    };
    cfg.trace_planner = match a.trace_planner {
        PlannerKind::Visibility => PlannerConfig::visibility(),
        PlannerKind::RrtStar => PlannerConfig::rrt_star(a.seed),
    };
    if cfg.noise_sigma < 0.0 || !cfg.noise_sigma.is_finite() {
        bail!("noise must be a finite non-negative number");
    }
    let scenarios = generate_scenarios(&cfg)?;
    let mut entries = Vec::with_capacity(scenarios.len());
    for s in &scenarios {
        let file = format!("{}.json", s.id);
        write_json(&a.out.out.join(&file), &ScenarioFile::from(s))?;
        entries.push(ManifestEntry {
            id: s.id.clone(),
            file,
            seed: s.seed,
            true_goal: s.true_goal,
            goals: s.num_goals(),
            observations: s.trace.len(),
        });
    }
    write_json(
        &a.out.out.join(MANIFEST),
        &Manifest {
            command: "gen",
            version: env!("CARGO_PKG_VERSION"),
            config: &cfg,
            scenarios: entries,
        },
    )?;
    println!(
        "wrote {} scenarios to {}",
        scenarios.len(),
        a.out.out.display()
    );
    Ok(())
}

fn scenario_paths(inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(input)
                .with_context(|| format!("reading {}", input.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| {
                    p.extension().is_some_and(|x| x == "json")
                        && p.file_name().is_some_and(|n| n != MANIFEST)
                })
                .collect();
            found.sort();
            files.extend(found);
        } else if input.is_file() {
            files.push(input.clone());
        } else {
            return Err(MissingFile(input.clone()).into());
        }
    }
    Ok(files)
}

fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = fs::read_to_string(path).map_err(|_| MissingFile(path.to_path_buf()))?;
    let file: ScenarioFile = serde_json::from_str(&text)
        .map_err(|e| SchemaViolation(format!("{}: {e}", path.display())))?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    file.into_scenario(&stem)
        .map_err(|e| SchemaViolation(format!("{}: {e}", path.display())).into())
}

#[derive(Serialize)]
struct RunMeta<'a> {
    command: &'static str,
    version: &'static str,
    args: &'a RunArgs,
    approaches: Vec<&'static str>,
    planner: PlannerConfig,
    angle_threshold_deg: f64,
    scenarios: Vec<ScenarioSeed>,
    summaries: &'a [ApproachSummary],
}

#[derive(Serialize)]
struct ScenarioSeed {
    id: String,
    seed: u64,
    label: Layout,
}

fn cmd_run(a: &RunArgs) -> Result<()> {
    let approaches = parse_approaches(&a.approaches)?;
    PrunePolicy::angle(a.angle_threshold)?;
    let paths = scenario_paths(&a.scenarios)?;
    let mut scenarios = paths
        .iter()
        .map(|p| load_scenario(p))
        .collect::<Result<Vec<_>>>()?;
    if scenarios.is_empty() {
        return Err(MissingFile(a.scenarios[0].clone()))
            .context("no scenario files among the inputs");
    }
    scenarios.sort_by(|x, y| x.id.cmp(&y.id));
    if let Some(w) = scenarios.windows(2).find(|w| w[0].id == w[1].id) {
        return Err(SchemaViolation(format!("duplicate scenario id `{}`", w[0].id)).into());
    }

    let mut options = SuiteOptions::new(a.planner.config());
    options.angle_threshold_deg = a.angle_threshold;
    options.record_time = a.timing == Timing::Wall;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs)
        .build()?;
    let result = pool.install(|| run_suite(&scenarios, &approaches, &options))?;

    write_csv(&a.out.out.join(RESULTS_CSV), &result.records)?;
    write_json(
        &a.out.out.join(RESULTS_META),
        &RunMeta {
            command: "run",
            version: env!("CARGO_PKG_VERSION"),
            args: a,
            approaches: approaches.iter().map(Approach::as_str).collect(),
            planner: options.planner,
            angle_threshold_deg: options.angle_threshold_deg,
            scenarios: scenarios
                .iter()
                .map(|s| ScenarioSeed {
                    id: s.id.clone(),
                    seed: s.seed,
                    label: s.label,
                })
                .collect(),
            summaries: &result.summaries,
        },
    )?;
    print_summaries(&result.summaries);
    Ok(())
}

fn print_summaries(rows: &[ApproachSummary]) {
    println!(
        "{:<12} {:>5} {:>10} {:>10} {:>11} {:>11} {:>8}",
        "approach", "runs", "calls", "time_s", "convergence", "ranked_1st", "pruned"
    );
    for s in rows {
        println!(
            "{:<12} {:>5} {:>10.2} {:>10.4} {:>11.2} {:>11.3} {:>8.2}",
            s.approach,
            s.runs,
            s.calls,
            s.plan_time_s,
            s.convergence,
            s.ranked_first_frac,
            s.pruned_count
        );
    }
}

#[derive(Serialize)]
struct TeamMeta<'a> {
    command: &'static str,
    version: &'static str,
    field: &'a FieldConfig,
    recognizer: RecognizerConfig,
}

fn cmd_teamtask(a: &TeamArgs) -> Result<()> {
    let mut field = match &a.field {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|_| MissingFile(path.clone()))?;
            serde_json::from_str::<FieldConfig>(&text)
                .map_err(|e| SchemaViolation(format!("{}: {e}", path.display())))?
        }
        None => FieldConfig::default(),
    };
    if let Some(s) = a.speed {
        field.speed = s;
    }
    if let Some(t) = a.tick {
        field.tick = t;
    }
    field.validate()?;
    let recognizer = RecognizerConfig::baseline();
    let rows = run_matrix(&field, &recognizer)?;
    write_csv(&a.out.out.join("teamtask.csv"), &rows)?;
    write_json(
        &a.out.out.join("teamtask.meta.json"),
        &TeamMeta {
            command: "teamtask",
            version: env!("CARGO_PKG_VERSION"),
            field: &field,
            recognizer,
        },
    )?;
    println!(
        "{:<6} {:<6} {:>8} {:>8} {:>8}",
        "start", "goal", "FK", "OGR", "ZK"
    );
    for r in &rows {
        println!(
            "{:<6} {:<6} {:>8.2} {:>8.2} {:>8.2}",
            r.observer_start, r.observed_goal, r.fk, r.ogr, r.zk
        );
    }
    Ok(())
}

fn load_records(input: &Path) -> Result<Vec<ScenarioRecord>> {
    let path = if input.is_dir() {
        input.join(RESULTS_CSV)
    } else {
        input.to_path_buf()
    };
    if !input.exists() {
        return Err(MissingFile(input.to_path_buf()).into());
    }
    if !path.is_file() {
        return Err(NoResults(input.to_path_buf()).into());
    }
    let mut reader = csv::Reader::from_path(&path).map_err(|_| MissingFile(path.clone()))?;
    let rows = reader
        .deserialize()
        .collect::<Result<Vec<ScenarioRecord>, _>>()
        .map_err(|e| SchemaViolation(format!("{}: {e}", path.display())))?;
    if rows.is_empty() {
        return Err(NoResults(input.to_path_buf()).into());
    }
    Ok(rows)
}

/// Approaches in first-seen order.
fn approaches_in(records: &[ScenarioRecord]) -> Result<Vec<Approach>> {
    let mut seen: Vec<Approach> = Vec::new();
    for r in records {
        let a: Approach = r
            .approach
            .parse()
            .map_err(|e| SchemaViolation(format!("{e}")))?;
        if !seen.contains(&a) {
            seen.push(a);
        }
    }
    Ok(seen)
}

#[derive(Serialize)]
struct Report<'a> {
    command: &'static str,
    version: &'static str,
    args: &'a ReportArgs,
    summaries: Vec<ApproachSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    against: Option<Vec<ApproachSummary>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    deterioration_pct: Option<Vec<goalrec::benchmark::Deterioration>>,
}

fn cmd_report(a: &ReportArgs) -> Result<()> {
    let base = load_records(&a.results)?;
    let summaries = summarize(&base, &approaches_in(&base)?);
    print_summaries(&summaries);
    let (against, det) = match &a.against {
        Some(path) => {
            let other = load_records(path)?;
            let other_summaries = summarize(&other, &approaches_in(&other)?);
            println!();
            print_summaries(&other_summaries);
            let det = deterioration(&summaries, &other_summaries);
            println!();
            println!(
                "{:<12} {:>10} {:>10} {:>12} {:>11}",
                "deterior.%", "time_s", "calls", "convergence", "ranked_1st"
            );
            let show = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.2}"));
            for d in &det {
                println!(
                    "{:<12} {:>10} {:>10} {:>12} {:>11}",
                    d.approach,
                    show(d.plan_time_s),
                    show(d.calls),
                    show(d.convergence),
                    show(d.ranked_first_frac)
                );
            }
            (Some(other_summaries), Some(det))
        }
        None => (None, None),
    };
    write_json(
        &a.out.out.join("report.json"),
        &Report {
            command: "report",
            version: env!("CARGO_PKG_VERSION"),
            args: a,
            summaries,
            against,
            deterioration_pct: det,
        },
    )
}
