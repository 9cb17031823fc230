//! Command-line front end: argument definitions, command execution and the
//! CSV/PGM file formats.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use cournot_core::analysis::{
    bifurcation, containment_probe, lyapunov, sweep2d, verify, BifurcationOptions,
    ContainmentReport, Coordinate, Interval, ProbeBox, ProbeKind, SampleRanges, SweepMode,
};
use cournot_core::stability::agreement_detail;
use cournot_core::{
    nash_equilibrium, orbit, Axis, CostKind, CostSide, CournotError, Model, ModelSpec, State,
    SweepGrid, VerdictClass,
};
use thiserror::Error;

pub mod format;

pub use format::{fmt_f64, write_pgm};

/// Environment variable that caps the worker count.
pub const THREADS_ENV: &str = "COURNOT_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] CournotError),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(
                CournotError::InvalidParameter(_)
                | CournotError::MixedCostKinds
                | CournotError::AxisNotApplicable { .. },
            ) => 2,
            CliError::Core(_) => 1,
            CliError::Io { .. } => 3,
        }
    }
}

fn io_err(path: &str) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_string(),
        source,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "cournot",
    version,
    about = "Cournot duopoly dynamics with isoelastic demand"
)]
pub struct Cli {
    /// Worker threads (default: all cores, capped by COURNOT_THREADS).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form equilibrium with criterion and Jury verdicts.
    Equilibrium(EquilibriumArgs),
    /// Iterate a map and write the orbit as CSV.
    Simulate(SimulateArgs),
    /// Stability classes on a 2-D parameter lattice.
    Sweep(SweepArgs),
    /// Post-transient orbit samples across one parameter.
    Bifurcation(BifurcationArgs),
    /// Largest Lyapunov exponent along an orbit.
    Lyapunov(LyapunovArgs),
    /// Criterion vs Jury agreement on random parameter draws.
    Verify(VerifyArgs),
    /// Linear-cost vs quadratic-cost stable region probe.
    Containment(ContainmentArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Gr,
    Gb,
    Gl,
    Ga,
    Gg,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Gr => Model::Gr,
            ModelArg::Gb => Model::Gb,
            ModelArg::Gl => Model::Gl,
            ModelArg::Ga => Model::Ga,
            ModelArg::Gg => Model::Gg,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CostArg {
    Quadratic,
    Linear,
}

impl From<CostArg> for CostKind {
    fn from(c: CostArg) -> Self {
        match c {
            CostArg::Quadratic => CostKind::Quadratic,
            CostArg::Linear => CostKind::Linear,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value = "gr")]
    pub model: ModelArg,
    #[arg(long, value_enum, default_value = "quadratic")]
    pub cost: CostArg,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub c1: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub c2: f64,
    /// Gradient speed of firm 1.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub k: f64,
    /// Gradient speed of firm 2 (GG).
    #[arg(long, allow_negative_numbers = true)]
    pub k2: Option<f64>,
    /// Adaptive weight (GA).
    #[arg(long, allow_negative_numbers = true)]
    pub l: Option<f64>,
}

impl ModelArgs {
    pub fn spec(&self) -> ModelSpec {
        let kind: CostKind = self.cost.into();
        let mut spec = ModelSpec::new(
            self.model.into(),
            [CostSide::new(kind, self.c1), CostSide::new(kind, self.c2)],
            self.k,
        );
        spec.k2 = self.k2;
        spec.l = self.l;
        spec
    }
}

#[derive(Debug, Args)]
pub struct EquilibriumArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Also print a single-line JSON record.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Initial q1 (default: 0.9 times the equilibrium).
    #[arg(long)]
    pub q1: Option<f64>,
    #[arg(long)]
    pub q2: Option<f64>,
    #[arg(long, default_value_t = 5_000)]
    pub steps: usize,
    /// Steps to drop before recording.
    #[arg(long, default_value_t = 0)]
    pub transient: usize,
    /// CSV output (default: stdout).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Criterion,
    Numeric,
    Both,
}

impl From<ModeArg> for SweepMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Criterion => SweepMode::Criterion,
            ModeArg::Numeric => SweepMode::Numeric,
            ModeArg::Both => SweepMode::Both,
        }
    }
}

fn parse_axis(s: &str) -> Result<Axis, String> {
    s.parse::<Axis>().map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Horizontal axis `name:min:max:n` (names: c1 c2 c k k2 kk l).
    #[arg(long, value_parser = parse_axis)]
    pub x: Axis,
    /// Vertical axis `name:min:max:n`.
    #[arg(long, value_parser = parse_axis)]
    pub y: Axis,
    #[arg(long, value_enum, default_value = "both")]
    pub mode: ModeArg,
    /// CSV output (default: stdout).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Plain PGM raster of the classes.
    #[arg(long)]
    pub pgm: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoordArg {
    Q1,
    Q2,
}

#[derive(Debug, Args)]
pub struct BifurcationArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Scanned parameter `name:min:max:n`.
    #[arg(long, value_parser = parse_axis)]
    pub param: Axis,
    #[arg(long, value_enum, default_value = "q1")]
    pub coord: CoordArg,
    #[arg(long, default_value_t = 5_000)]
    pub steps: usize,
    #[arg(long, default_value_t = 1_000)]
    pub transient: usize,
    /// Trailing orbit values kept per parameter value.
    #[arg(long, default_value_t = 100)]
    pub keep: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LyapunovArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub q1: Option<f64>,
    #[arg(long)]
    pub q2: Option<f64>,
    #[arg(long, default_value_t = 5_000)]
    pub steps: usize,
    /// Steps iterated before the exponent is accumulated.
    #[arg(long, default_value_t = 1_000)]
    pub transient: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Model to check (default: all five).
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
    /// Cost kind to check (default: both).
    #[arg(long, value_enum)]
    pub cost: Option<CostArg>,
    /// Draws per model and cost kind.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Per-sample CSV.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProbeArg {
    /// Report linear-stable, quadratic-unstable points as violations.
    Containment,
    /// Search for one such point, refining near misses.
    Witness,
}

fn parse_interval(s: &str) -> Result<Interval, String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected lo:hi, got '{s}'"))?;
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad number '{lo}'"))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|_| format!("bad number '{hi}'"))?;
    Ok(Interval::new(lo, hi))
}

#[derive(Debug, Args)]
pub struct ContainmentArgs {
    #[arg(long, value_enum, default_value = "gr")]
    pub model: ModelArg,
    #[arg(long, value_enum, default_value = "containment")]
    pub mode: ProbeArg,
    /// Sampled range `lo:hi` of c1, drawn from (lo, hi].
    #[arg(long, value_parser = parse_interval, default_value = "0:20")]
    pub c1: Interval,
    #[arg(long, value_parser = parse_interval, default_value = "0:20")]
    pub c2: Interval,
    #[arg(long, value_parser = parse_interval, default_value = "0:5")]
    pub k: Interval,
    /// K2 range (GG without --tie-k).
    #[arg(long, value_parser = parse_interval, default_value = "0:5")]
    pub k2: Interval,
    /// L range (GA).
    #[arg(long, value_parser = parse_interval, default_value = "0:0.999999")]
    pub l: Interval,
    /// Force K2 = K1 (GG).
    #[arg(long)]
    pub tie_k: bool,
    /// Probe the union "c1 > A or c2 > B" given as `A:B`, splitting the
    /// samples over the two half-boxes.
    #[arg(long, value_parser = parse_interval)]
    pub either: Option<Interval>,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// CSV of the points found.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Worker count: `--threads`, else all cores capped by `COURNOT_THREADS`.
pub fn thread_count(flag: Option<usize>) -> Result<usize, CliError> {
    if let Some(n) = flag {
        return if n == 0 {
            Err(CliError::Usage("threads must be positive".into()))
        } else {
            Ok(n)
        };
    }
    let cores = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(cap) if cap > 0 => Ok(cores.min(cap)),
            _ => Err(CliError::Usage(format!(
                "{THREADS_ENV} must be a positive integer"
            ))),
        },
        Err(_) => Ok(cores),
    }
}

/// Runs the parsed command on a dedicated pool, writing the summary to `out`.
/// Returns the process exit code for runs that completed.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let threads = thread_count(cli.threads)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    // output is buffered so that worker threads never touch the caller's sink
    let mut buffer: Vec<u8> = Vec::new();
    let result = pool.install(|| {
        let out: &mut dyn Write = &mut buffer;
        match cli.command {
            Command::Equilibrium(a) => cmd_equilibrium(&a, out),
            Command::Simulate(a) => cmd_simulate(&a, out),
            Command::Sweep(a) => cmd_sweep(&a, out),
            Command::Bifurcation(a) => cmd_bifurcation(&a, out),
            Command::Lyapunov(a) => cmd_lyapunov(&a, out),
            Command::Verify(a) => cmd_verify(&a, out),
            Command::Containment(a) => cmd_containment(&a, out),
        }
    });
    out.write_all(&buffer).map_err(io_err(STDOUT))?;
    result
}

const STDOUT: &str = "<stdout>";

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(io_err(STDOUT))
}

/// Writes `body` to `path`, or to `fallback` when no path is given.
fn write_output(path: Option<&Path>, fallback: &mut dyn Write, body: &str) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let name = p.display().to_string();
            let file = File::create(p).map_err(io_err(&name))?;
            let mut w = BufWriter::new(file);
            w.write_all(body.as_bytes()).map_err(io_err(&name))?;
            w.flush().map_err(io_err(&name))
        }
        None => emit(fallback, body),
    }
}

fn class_name(c: VerdictClass) -> &'static str {
    c.name()
}

fn cmd_equilibrium(a: &EquilibriumArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let spec = a.model.spec().validate()?;
    let e = nash_equilibrium(spec.costs)?;
    let detail = agreement_detail(&spec)?;
    let crit = &detail.criteria;
    let crit_class = if crit.near_boundary(cournot_core::types::DEFAULT_BOUNDARY_TOL) {
        VerdictClass::Boundary
    } else if crit.stable {
        VerdictClass::Stable
    } else {
        VerdictClass::Unstable
    };
    let mut pairs: Vec<(String, String)> = vec![
        ("model".into(), spec.model.name().into()),
        ("cost".into(), spec.cost_kind().name().into()),
        ("c1".into(), fmt_f64(spec.c1())),
        ("c2".into(), fmt_f64(spec.c2())),
        ("k".into(), fmt_f64(spec.k)),
    ];
    if spec.model == Model::Gg {
        pairs.push(("k2".into(), fmt_f64(spec.k2_or_k())));
    }
    if spec.model == Model::Ga {
        pairs.push(("l".into(), fmt_f64(spec.l_or_one())));
    }
    pairs.extend([
        ("q1".into(), fmt_f64(e.state.q1)),
        ("q2".into(), fmt_f64(e.state.q2)),
        ("residual1".into(), fmt_f64(e.residuals[0])),
        ("residual2".into(), fmt_f64(e.residuals[1])),
    ]);
    for (name, value) in crit.named_values() {
        pairs.push((name, fmt_f64(value)));
    }
    let jury = detail.numeric.jury;
    pairs.extend([
        ("criterion_verdict".into(), class_name(crit_class).into()),
        (
            "numeric_verdict".into(),
            class_name(detail.numeric.class).into(),
        ),
        ("jury1".into(), fmt_f64(jury[0])),
        ("jury2".into(), fmt_f64(jury[1])),
        ("jury3".into(), fmt_f64(jury[2])),
        (
            "spectral_radius".into(),
            fmt_f64(detail.numeric.spectral_radius),
        ),
        ("agreement".into(), detail.outcome.name().into()),
    ]);
    let mut text: String = pairs.iter().map(|(k, v)| format!("{k}={v}\n")).collect();
    if a.json {
        let record: serde_json::Map<String, serde_json::Value> = pairs
            .iter()
            .map(|(k, v)| {
                let value = v.parse::<f64>().ok().and_then(serde_json::Number::from_f64);
                (
                    k.clone(),
                    value.map_or_else(
                        || serde_json::Value::String(v.clone()),
                        serde_json::Value::Number,
                    ),
                )
            })
            .collect();
        text.push_str(&serde_json::Value::Object(record).to_string());
        text.push('\n');
    }
    emit(out, &text)?;
    Ok(0)
}

fn start_state(spec: &ModelSpec, q1: Option<f64>, q2: Option<f64>) -> Result<State, CliError> {
    let e = nash_equilibrium(spec.costs)?.state;
    let s = State::new(q1.unwrap_or(0.9 * e.q1), q2.unwrap_or(0.9 * e.q2));
    if !s.is_feasible() {
        return Err(CliError::Usage("initial outputs must be positive".into()));
    }
    Ok(s)
}

fn cmd_simulate(a: &SimulateArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let spec = a.model.spec().validate()?;
    let s0 = start_state(&spec, a.q1, a.q2)?;
    let o = orbit(&spec, s0, a.steps, a.transient);
    let mut csv = String::from("t,q1,q2\n");
    if a.transient == 0 {
        csv.push_str(&format!("0,{},{}\n", fmt_f64(s0.q1), fmt_f64(s0.q2)));
    }
    let first = a.transient.min(a.steps) + 1;
    for (i, s) in o.states.iter().enumerate() {
        csv.push_str(&format!(
            "{},{},{}\n",
            first + i,
            fmt_f64(s.q1),
            fmt_f64(s.q2)
        ));
    }
    let last = o.last().unwrap_or(s0);
    let summary = format!(
        "steps={} recorded={} escaped={} escape_step={} last_q1={} last_q2={}\n",
        a.steps,
        o.states.len(),
        o.escaped,
        o.escape_index
            .map_or_else(|| "none".to_string(), |i| i.to_string()),
        fmt_f64(last.q1),
        fmt_f64(last.q2)
    );
    match &a.output {
        Some(p) => {
            write_output(Some(p), out, &csv)?;
            emit(out, &summary)?;
        }
        None => {
            emit(out, &csv)?;
            eprint!("{summary}");
        }
    }
    Ok(0)
}

/// Sweep CSV: one row per cell, x fastest.
pub fn sweep_csv(grid: &SweepGrid) -> String {
    let mut csv = String::from("x,y,class,jury1,jury2,jury3,rho,crit_primary\n");
    let nx = grid.x_axis.n;
    for (idx, cell) in grid.cells.iter().enumerate() {
        let (x, y) = (grid.x_axis.value(idx % nx), grid.y_axis.value(idx / nx));
        let primary = cell.criterion_values.first().map_or(f64::NAN, |(_, v)| *v);
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            fmt_f64(x),
            fmt_f64(y),
            cell.class.name(),
            fmt_f64(cell.jury[0]),
            fmt_f64(cell.jury[1]),
            fmt_f64(cell.jury[2]),
            fmt_f64(cell.spectral_radius),
            fmt_f64(primary)
        ));
    }
    csv
}

fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let template = a.model.spec();
    // catch bad fixed flags before the lattice turns them into infeasible cells
    template
        .with(a.x.param, a.x.min)
        .with(a.y.param, a.y.min)
        .validate()?;
    let grid = sweep2d(&template, a.x, a.y, a.mode.into())?;
    let csv = sweep_csv(&grid);
    let count = |c: VerdictClass| grid.cells.iter().filter(|v| v.class == c).count();
    let summary = format!(
        "cells={} stable={} unstable={} boundary={} infeasible={} disagreements={}\n",
        grid.cells.len(),
        count(VerdictClass::Stable),
        count(VerdictClass::Unstable),
        count(VerdictClass::Boundary),
        count(VerdictClass::Infeasible),
        grid.disagreements.len()
    );
    if let Some(p) = &a.pgm {
        let mut body = Vec::new();
        write_pgm(&grid, &mut body).map_err(io_err(STDOUT))?;
        write_output(Some(p), out, &String::from_utf8_lossy(&body))?;
    }
    match &a.output {
        Some(p) => {
            write_output(Some(p), out, &csv)?;
            emit(out, &summary)?;
        }
        None => {
            emit(out, &csv)?;
            eprint!("{summary}");
        }
    }
    Ok(0)
}

fn cmd_bifurcation(a: &BifurcationArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let template = a.model.spec();
    template.with(a.param.param, a.param.min).validate()?;
    let coordinate = match a.coord {
        CoordArg::Q1 => Coordinate::Q1,
        CoordArg::Q2 => Coordinate::Q2,
    };
    let opts = BifurcationOptions {
        n_steps: a.steps,
        transient: a.transient,
        keep: a.keep,
        ..Default::default()
    };
    let scan = bifurcation(
        &template,
        a.param.param,
        (a.param.min, a.param.max),
        a.param.n,
        coordinate,
        &opts,
    )?;
    let mut csv = String::from("param,value\n");
    for (p, values) in &scan.samples {
        for v in values {
            csv.push_str(&format!("{},{}\n", fmt_f64(*p), fmt_f64(*v)));
        }
    }
    let escaped = scan.samples.iter().filter(|(_, v)| v.is_empty()).count();
    let summary = format!(
        "points={} escaped={} first_split={}\n",
        scan.samples.len(),
        escaped,
        scan.first_split(1e-4)
            .map_or_else(|| "none".to_string(), fmt_f64)
    );
    match &a.output {
        Some(p) => {
            write_output(Some(p), out, &csv)?;
            emit(out, &summary)?;
        }
        None => {
            emit(out, &csv)?;
            eprint!("{summary}");
        }
    }
    Ok(0)
}

fn cmd_lyapunov(a: &LyapunovArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let spec = a.model.spec().validate()?;
    let s0 = start_state(&spec, a.q1, a.q2)?;
    let o = orbit(&spec, s0, a.transient, 0);
    if o.escaped {
        return Err(CournotError::Escape {
            step: o.escape_index.unwrap_or(0),
            state: o.last().unwrap_or(s0),
        }
        .into());
    }
    let start = o.last().unwrap_or(s0);
    let lam = lyapunov(&spec, start, a.steps)?;
    emit(
        out,
        &format!(
            "lyapunov={}\nsteps={}\ntransient={}\n",
            fmt_f64(lam),
            a.steps,
            a.transient
        ),
    )?;
    Ok(0)
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let models: Vec<Model> = a
        .model
        .map_or_else(|| Model::ALL.to_vec(), |m| vec![m.into()]);
    let kinds: Vec<CostKind> = a.cost.map_or_else(
        || vec![CostKind::Quadratic, CostKind::Linear],
        |c| vec![c.into()],
    );
    let ranges = SampleRanges::default();
    let mut csv = String::from("model,cost,c1,c2,k,k2,l,outcome\n");
    let (mut agree, mut near, mut disagree) = (0, 0, 0);
    let mut lines = String::new();
    for &model in &models {
        for &kind in &kinds {
            let report = verify(model, kind, a.samples, a.seed, &ranges)?;
            agree += report.agree;
            near += report.near_boundary;
            disagree += report.disagree;
            lines.push_str(&format!(
                "model={} cost={} agree={} near_boundary={} disagree={}\n",
                model.name(),
                kind.name(),
                report.agree,
                report.near_boundary,
                report.disagree
            ));
            if a.output.is_some() {
                for (spec, outcome) in &report.outcomes {
                    let p = cournot_core::stability::param_point(spec);
                    csv.push_str(&format!(
                        "{},{},{},{},{},{},{},{}\n",
                        model.name(),
                        kind.name(),
                        fmt_f64(p.c1),
                        fmt_f64(p.c2),
                        fmt_f64(p.k),
                        fmt_f64(p.k2),
                        fmt_f64(p.l),
                        outcome.name()
                    ));
                }
            }
        }
    }
    if let Some(p) = &a.output {
        write_output(Some(p), out, &csv)?;
    }
    lines.push_str(&format!(
        "agree={agree} near_boundary={near} disagree={disagree}\n"
    ));
    emit(out, &lines)?;
    Ok(if disagree > 0 { 1 } else { 0 })
}

/// CSV of the points a probe found.
pub fn containment_csv(report: &ContainmentReport) -> String {
    let mut csv = String::from("c1,c2,k,k2,l,score,orbit_confirmed\n");
    for v in &report.violations {
        let p = v.point;
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt_f64(p.c1),
            fmt_f64(p.c2),
            fmt_f64(p.k),
            fmt_f64(p.k2),
            fmt_f64(p.l),
            fmt_f64(v.score),
            v.orbit_confirmed
        ));
    }
    csv
}

fn cmd_containment(a: &ContainmentArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    if a.samples == 0 {
        return Err(CliError::Usage("samples must be positive".into()));
    }
    let model: Model = a.model.into();
    let kind = match a.mode {
        ProbeArg::Containment => ProbeKind::Containment,
        ProbeArg::Witness => ProbeKind::Witness,
    };
    let mut region = ProbeBox::new(a.c1, a.c2, a.k).with_k2(a.k2).with_l(a.l);
    region.tie_k = a.tie_k;
    let reports: Vec<ContainmentReport> = match a.either {
        None => vec![containment_probe(model, &region, a.samples, a.seed, kind)?],
        Some(Interval { lo: t1, hi: t2 }) => {
            let first = ProbeBox {
                c1: Interval::new(t1.max(a.c1.lo), a.c1.hi),
                ..region
            };
            let second = ProbeBox {
                c2: Interval::new(t2.max(a.c2.lo), a.c2.hi),
                ..region
            };
            let half = a.samples / 2;
            vec![
                containment_probe(model, &first, half, a.seed, kind)?,
                containment_probe(
                    model,
                    &second,
                    a.samples - half,
                    a.seed.wrapping_add(1),
                    kind,
                )?,
            ]
        }
    };
    let mut csv = String::new();
    let (mut linear_stable, mut found, mut confirmed, mut unconfirmed) = (0, 0, 0, 0);
    for (i, r) in reports.iter().enumerate() {
        let body = containment_csv(r);
        csv.push_str(if i == 0 {
            &body
        } else {
            body.split_once('\n').map_or("", |(_, rest)| rest)
        });
        linear_stable += r.linear_stable;
        found += r.violations.len();
        confirmed += r.violations.iter().filter(|v| v.orbit_confirmed).count();
        unconfirmed += r.unconfirmed;
    }
    if let Some(p) = &a.output {
        write_output(Some(p), out, &csv)?;
    }
    let label = match kind {
        ProbeKind::Containment => "violations",
        ProbeKind::Witness => "hits",
    };
    let mut summary = format!(
        "model={} mode={} samples={} seed={} linear_stable={} {label}={found} orbit_confirmed={confirmed} unconfirmed={unconfirmed}",
        model.name(),
        match kind {
            ProbeKind::Containment => "containment",
            ProbeKind::Witness => "witness",
        },
        a.samples,
        a.seed,
        linear_stable
    );
    if kind == ProbeKind::Witness {
        match reports
            .iter()
            .filter_map(|r| r.witness)
            .max_by(|x, y| x.score.total_cmp(&y.score))
        {
            Some(w) => summary.push_str(&format!(
                " witness=c1:{},c2:{},k:{},k2:{},l:{}",
                fmt_f64(w.point.c1),
                fmt_f64(w.point.c2),
                fmt_f64(w.point.k),
                fmt_f64(w.point.k2),
                fmt_f64(w.point.l)
            )),
            None => summary.push_str(" witness=none"),
        }
    }
    summary.push('\n');
    emit(out, &summary)?;
    Ok(if kind == ProbeKind::Containment && found > 0 {
        1
    } else {
        0
    })
}
