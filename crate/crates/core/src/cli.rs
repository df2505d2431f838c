//! Command-line front end: build, plan, rank, bench and render.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::baseline::{compare, csv_header, ComparisonReport};
use crate::cover::{build_with_length, CoverComplex, CoverStats};
use crate::environment::{load_environment, random_environment, serialize_environment, validate, ValidatedEnvironment};
use crate::error::{Error, Result};
use crate::geometry::{Point, Polyline};
use crate::planner::{plan, plan_report, rank_homotopy_classes, search_on_graph, PlanQuery, PlanResult, SearchMode};
use crate::render::{render_environment, render_layers, render_plan_result, render_triangulation};

#[derive(Parser, Debug)]
#[command(name = "tether", version, about = "Tethered robot planning on a truncated universal cover")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the cover and write its dump, statistics and layer panels.
    Build(BuildArgs),
    /// Plan from the current tether configuration to a goal.
    Plan(PlanArgs),
    /// Rank the homotopy classes in which a point is reachable.
    Rank(RankArgs),
    /// Compare the cover with grid graphs; writes a CSV report.
    Bench(BenchArgs),
    /// Render environment, triangulation, layers and plans as SVG.
    Render(RenderArgs),
}

#[derive(Args, Debug, Clone)]
pub struct EnvArgs {
    #[arg(long)]
    pub env: PathBuf,
    /// Tether length override.
    #[arg(long)]
    pub length: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct BuildArgs {
    #[command(flatten)]
    pub env: EnvArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct PlanArgs {
    #[command(flatten)]
    pub env: EnvArgs,
    #[arg(long)]
    pub out: PathBuf,
    /// Goal as `X,Y`.
    #[arg(long)]
    pub goal: String,
    /// Tether waypoints as `x0,y0;x1,y1;...`, starting at the anchor.
    #[arg(long)]
    pub tether: String,
    #[arg(long, default_value = "dual")]
    pub mode: String,
}

#[derive(Args, Debug, Clone)]
pub struct RankArgs {
    #[command(flatten)]
    pub env: EnvArgs,
    #[arg(long)]
    pub goal: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct BenchArgs {
    /// Environment files; when absent, random environments are generated.
    #[arg(long)]
    pub env: Vec<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value = "10,12,15,20")]
    pub lengths: String,
    #[arg(long, default_value = "0.5,0.25")]
    pub resolutions: String,
    /// Obstacle counts of the generated environments.
    #[arg(long, default_value = "1,2,6,8")]
    pub obstacles: String,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Sampled points for the agreement column.
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
}

#[derive(Args, Debug, Clone)]
pub struct RenderArgs {
    #[command(flatten)]
    pub env: EnvArgs,
    #[arg(long)]
    pub out: PathBuf,
    /// Also render the cover layers.
    #[arg(long)]
    pub layers: bool,
    #[arg(long)]
    pub goal: Option<String>,
    #[arg(long)]
    pub tether: Option<String>,
}

pub fn parse_point(s: &str) -> Result<Point> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(Error::Parse(format!("expected X,Y but got {s:?}")));
    }
    let x: f64 = parts[0].parse().map_err(|_| Error::Parse(format!("bad number {:?}", parts[0])))?;
    let y: f64 = parts[1].parse().map_err(|_| Error::Parse(format!("bad number {:?}", parts[1])))?;
    if !x.is_finite() || !y.is_finite() {
        return Err(Error::Parse(format!("non-finite point {s:?}")));
    }
    Ok(Point::new(x, y))
}

pub fn parse_polyline(s: &str) -> Result<Polyline> {
    let pts = s.split(';').filter(|p| !p.trim().is_empty()).map(parse_point).collect::<Result<Vec<_>>>()?;
    Polyline::new(pts).map_err(|e| Error::Parse(e.to_string()))
}

pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number {x:?}"))))
        .collect()
}

pub fn load_env(args: &EnvArgs) -> Result<ValidatedEnvironment> {
    let text = fs::read_to_string(&args.env)?;
    let venv = load_environment(&text)?;
    match args.length {
        Some(l) => {
            let mut env = venv.env;
            env.tether_length = l;
            validate(env)
        }
        None => Ok(venv),
    }
}

/// Hex digest identifying an environment for the complex cache.
pub fn environment_hash(venv: &ValidatedEnvironment) -> String {
    let mut h = Sha256::new();
    h.update(serialize_environment(&venv.env).as_bytes());
    h.update(venv.env.tether_length.to_bits().to_le_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Serialize, Deserialize)]
struct Cached {
    hash: String,
    complex: CoverComplex,
}

const CACHE_FILE: &str = "complex.json";

/// Loads the cached complex from `out` when the environment matches,
/// otherwise builds it and refreshes the cache.
pub fn cached_complex(venv: &ValidatedEnvironment, out: &Path) -> Result<CoverComplex> {
    let hash = environment_hash(venv);
    let path = out.join(CACHE_FILE);
    if let Ok(text) = fs::read_to_string(&path) {
        if let Ok(c) = serde_json::from_str::<Cached>(&text) {
            if c.hash == hash {
                return Ok(c.complex);
            }
        }
    }
    let complex = build_with_length(venv, venv.env.tether_length)?;
    fs::create_dir_all(out)?;
    fs::write(&path, serde_json::to_string(&Cached { hash, complex: complex.clone() })?)?;
    Ok(complex)
}

#[derive(Serialize)]
struct BuildStats<'a> {
    #[serde(flatten)]
    counts: &'a CoverStats,
    anchor_adjustment: Option<Point>,
    wall_time_s: f64,
}

pub struct BuildOutput {
    pub complex: CoverComplex,
    pub dump_path: PathBuf,
}

pub fn cmd_build(args: &BuildArgs) -> Result<BuildOutput> {
    let venv = load_env(&args.env)?;
    let t0 = Instant::now();
    let complex = build_with_length(&venv, venv.env.tether_length)?;
    let wall = t0.elapsed().as_secs_f64();
    fs::create_dir_all(&args.out)?;
    let dump_path = args.out.join("complex_dump.txt");
    fs::write(&dump_path, complex.dump())?;
    fs::write(args.out.join("triangulation.txt"), complex.triangulation.dump())?;
    let stats = complex.stats();
    let doc = BuildStats { counts: &stats, anchor_adjustment: complex.dual.anchor_adjustment, wall_time_s: wall };
    fs::write(args.out.join("stats.json"), serde_json::to_string_pretty(&doc)?)?;
    fs::write(args.out.join("layers.svg"), render_layers(&venv, &complex))?;
    let cached = Cached { hash: environment_hash(&venv), complex };
    fs::write(args.out.join(CACHE_FILE), serde_json::to_string(&cached)?)?;
    println!(
        "vertices {} edges {} triangles {} layers {} time {:.3}s",
        stats.vertices, stats.edges, stats.triangles, stats.layers, wall
    );
    Ok(BuildOutput { complex: cached.complex, dump_path })
}

pub fn cmd_plan(args: &PlanArgs) -> Result<Vec<PlanResult>> {
    let venv = load_env(&args.env)?;
    let goal = parse_point(&args.goal)?;
    let tether = parse_polyline(&args.tether)?;
    let mode: SearchMode = args.mode.parse()?;
    let complex = cached_complex(&venv, &args.out)?;
    let mut results = plan(&complex, &PlanQuery { tether: tether.clone(), goal })?;
    if mode == SearchMode::Primal {
        let robot = complex.lift_path(&tether)?;
        let lifts = complex.preimage(goal)?;
        for r in results.iter_mut() {
            let lift = lifts
                .iter()
                .find(|x| complex.triangles[x.copy].signature == r.goal_signature)
                .expect("result comes from a lift of the goal");
            r.path = search_on_graph(&complex, SearchMode::Primal, &robot, lift)?;
            r.path_length = r.path.length();
        }
    }
    let report = plan_report(&results);
    fs::create_dir_all(&args.out)?;
    fs::write(args.out.join("plan.txt"), &report)?;
    for (i, r) in results.iter().enumerate() {
        fs::write(args.out.join(format!("plan_{}.svg", i + 1)), render_plan_result(&venv, &complex.generators, r, i + 1))?;
    }
    print!("{report}");
    Ok(results)
}

pub fn rank_text(ranked: &[(crate::homotopy::Signature, f64)]) -> String {
    ranked.iter().map(|(s, l)| format!("\"{s}\" {l:.9}\n")).collect()
}

pub fn cmd_rank(args: &RankArgs) -> Result<Vec<(crate::homotopy::Signature, f64)>> {
    let venv = load_env(&args.env)?;
    let goal = parse_point(&args.goal)?;
    let complex = match &args.out {
        Some(out) => cached_complex(&venv, out)?,
        None => build_with_length(&venv, venv.env.tether_length)?,
    };
    let ranked = rank_homotopy_classes(&complex, goal)?;
    let text = rank_text(&ranked);
    if let Some(out) = &args.out {
        fs::write(out.join("rank.txt"), &text)?;
    }
    print!("{text}");
    Ok(ranked)
}

/// Rows of the bench CSV with time columns blanked, for comparing reruns.
pub fn strip_time_columns(csv: &str) -> String {
    csv.lines()
        .map(|line| {
            let header: Vec<&str> = csv.lines().next().unwrap_or("").split(',').collect();
            line.split(',')
                .enumerate()
                .map(|(i, v)| if header.get(i).is_some_and(|h| h.contains("time")) { "" } else { v })
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

pub struct BenchOutput {
    pub csv: String,
    pub reports: Vec<ComparisonReport>,
    pub errors: Vec<String>,
}

pub fn cmd_bench(args: &BenchArgs) -> Result<BenchOutput> {
    let lengths = parse_list(&args.lengths)?;
    let resolutions = parse_list(&args.resolutions)?;
    if resolutions.iter().any(|r| !r.is_finite() || *r <= 0.0) {
        return Err(Error::Parse("resolutions must be positive".into()));
    }
    let envs: Vec<ValidatedEnvironment> = if args.env.is_empty() {
        parse_list(&args.obstacles)?
            .into_iter()
            .enumerate()
            .map(|(k, m)| validate(random_environment(m as usize, 10.0, args.seed + k as u64)))
            .collect::<Result<_>>()?
    } else {
        args.env
            .iter()
            .map(|p| load_env(&EnvArgs { env: p.clone(), length: None }))
            .collect::<Result<_>>()?
    };
    let mut csv = csv_header(&resolutions);
    csv.push('\n');
    let mut reports = Vec::new();
    let mut errors = Vec::new();
    for (k, venv) in envs.iter().enumerate() {
        for &l in &lengths {
            match compare(venv, l, &resolutions, args.samples, args.seed) {
                Ok(r) => {
                    csv.push_str(&r.csv_row());
                    csv.push('\n');
                    reports.push(r);
                }
                Err(e) => errors.push(format!("env {k} l {l}: {e}")),
            }
        }
    }
    fs::create_dir_all(&args.out)?;
    fs::write(args.out.join("bench.csv"), &csv)?;
    fs::write(args.out.join("bench_errors.txt"), errors.iter().map(|e| format!("{e}\n")).collect::<String>())?;
    print!("{csv}");
    for r in &reports {
        if let Some(g) = r.grids.first() {
            println!(
                "m {} l {}: grid/cover size ratio {:.1} at resolution {}",
                r.m,
                r.tether_length,
                g.nodes as f64 / r.cover_triangles.max(1) as f64,
                g.resolution
            );
        }
    }
    for e in &errors {
        eprintln!("{e}");
    }
    Ok(BenchOutput { csv, reports, errors })
}

/// Writes the rendered panels and returns their paths.
pub fn cmd_render(args: &RenderArgs) -> Result<Vec<PathBuf>> {
    let venv = load_env(&args.env)?;
    fs::create_dir_all(&args.out)?;
    let gens = venv.generators()?;
    let mut written = Vec::new();
    let mut write = |name: &str, body: String| -> Result<()> {
        let p = args.out.join(name);
        fs::write(&p, body)?;
        written.push(p);
        Ok(())
    };
    let tether = args.tether.as_deref().map(parse_polyline).transpose()?;
    write("environment.svg", render_environment(&venv, &gens, tether.as_ref().map(Polyline::end)))?;
    let needs_complex = args.layers || args.goal.is_some();
    if needs_complex {
        let complex = cached_complex(&venv, &args.out)?;
        write("triangulation.svg", render_triangulation(&venv, &complex.triangulation, &complex.dual, &gens))?;
        if args.layers {
            write("layers.svg", render_layers(&venv, &complex))?;
        }
        if let Some(goal) = &args.goal {
            let goal = parse_point(goal)?;
            let tether = tether.clone().unwrap_or_else(|| Polyline { points: vec![venv.env.anchor] });
            let results = plan(&complex, &PlanQuery { tether, goal })?;
            for (i, r) in results.iter().enumerate() {
                write(&format!("plan_{}.svg", i + 1), render_plan_result(&venv, &gens, r, i + 1))?;
            }
        }
    }
    Ok(written)
}

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::TetherInfeasible(_) | Error::GoalUnreachable(..) | Error::LiftExceedsTether(_) => 2,
        _ => 1,
    }
}

/// Parses arguments, runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let res = match &cli.command {
        Command::Build(a) => cmd_build(a).map(|_| ()),
        Command::Plan(a) => cmd_plan(a).map(|_| ()),
        Command::Rank(a) => cmd_rank(a).map(|_| ()),
        Command::Bench(a) => cmd_bench(a).map(|_| ()),
        Command::Render(a) => cmd_render(a).map(|_| ()),
    };
    match res {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_points_and_lists() {
        assert_eq!(parse_point("1.5, -2").unwrap(), Point::new(1.5, -2.0));
        assert!(matches!(parse_point("1"), Err(Error::Parse(_))));
        assert_eq!(parse_polyline("0,0;1,0;1,1").unwrap().points.len(), 3);
        assert_eq!(parse_list("0.5,0.25").unwrap(), vec![0.5, 0.25]);
        assert!(parse_list("a").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::GoalUnreachable(0., 0.)), 2);
        assert_eq!(exit_code(&Error::Parse("x".into())), 1);
        assert_eq!(run(["tether", "frobnicate"]), 1);
    }

    #[test]
    fn time_columns_are_blanked() {
        let csv = "m,l,bar_T_time_s\n1,10,0.5";
        assert_eq!(strip_time_columns(csv), "m,l,\n1,10,");
    }
}
