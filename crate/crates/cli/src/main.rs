//! `pcd`: proximity catch digraphs from the command line.
//!
//! Results go to stdout (or `--out`) as JSON or CSV. Failures print one JSON
//! line `{"error": kind, "code": n, "message": …}` to stderr and exit with
//! 2 (usage), 3 (numeric failure) or 4 (I/O).

mod manifest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use pcd_core::asymptotics::{asymptotic_law, law_from_class, lift_law, p_r, GammaLaw, DEFAULT_TOL};
use pcd_core::domination::{domination_bruteforce, domination_exact, domination_multi, PcdInstance};
use pcd_core::geom2::{BasicTriangleParams, Point2, Triangle2};
use pcd_core::io::{read_points, read_text, to_json_pretty, write_atomic, write_triangulation};
use pcd_core::proximity::{classify_m_exact, tr_vertices_bary, Expansion, MSpec, ParamsConfig, ProximityParams, RValue};
use pcd_core::sim::{
    emit_p_r_curve, render_table, run_mc, trend_distinct_extrema, McConfig, Mode, TableFormat,
};
use pcd_core::PcdError;

use manifest::Manifest;

#[derive(Parser)]
#[command(name = "pcd", version, about = "r-factor proportional-edge proximity catch digraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate p_r, the limiting P(γ = 2) when M is a vertex of T_r.
    Pr(PrArgs),
    /// Domination number of the digraph on a points file in one triangle.
    Gamma(GammaArgs),
    /// Limiting law of the domination number.
    Law(LawArgs),
    /// Monte-Carlo distribution of the domination number.
    Simulate(SimArgs),
    /// Domination number over the Delaunay triangulation of anchor points.
    Multi(MultiArgs),
    /// Vertices of the inner triangle T_r.
    Tr(TrArgs),
    /// Print the tool version.
    Version,
}

#[derive(Args)]
struct PrArgs {
    /// Expansion factor in (1, 3/2]; fractions such as 4/3 are accepted.
    #[arg(long)]
    r: Option<String>,
    /// Absolute error tolerance.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Write the p_r curve over r = 1.05, 1.10, …, 1.50 to this CSV file.
    #[arg(long)]
    curve: Option<PathBuf>,
}

#[derive(Args)]
struct ParamArgs {
    /// Expansion factor r >= 1, a fraction, or "inf".
    #[arg(long)]
    r: Option<String>,
    /// Center: centroid | t1 | t2 | t3 | bary:m1,m2,m3 | point:x,y
    #[arg(long = "M", default_value = "centroid")]
    m: String,
    /// JSON file {"r": …, "M": [m1,m2,m3]} or {"r": …, "M_special": …}; overrides --r/--M.
    #[arg(long)]
    params: Option<PathBuf>,
}

#[derive(Args)]
struct GammaArgs {
    /// Points file (.csv or .json).
    #[arg(long)]
    points: PathBuf,
    /// "equilateral" or six comma-separated vertex coordinates x1,y1,x2,y2,x3,y3.
    #[arg(long, default_value = "equilateral")]
    triangle: String,
    #[command(flatten)]
    params: ParamArgs,
    /// Use exhaustive search instead of the candidate solver (n <= 25).
    #[arg(long)]
    bruteforce: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LawArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Number of Delaunay triangles.
    #[arg(long = "Jm")]
    jm: Option<u32>,
    #[arg(long, default_value = "equilateral")]
    triangle: String,
}

#[derive(Args)]
struct SimArgs {
    /// JSON run configuration, or a manifest written by an earlier run.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    r: Option<String>,
    #[arg(long = "M")]
    m: Option<String>,
    /// Sample sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    #[arg(long)]
    replicates: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Dimension (2 to 4); d > 2 requires M = centroid.
    #[arg(long)]
    d: Option<usize>,
    /// Multi-triangle mode with this many anchors in the unit square.
    #[arg(long)]
    anchors: Option<usize>,
    /// Output file; .json gives JSON, anything else CSV. Default: JSON on stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the fraction of replicates with distinct edge extrema (CSV).
    #[arg(long)]
    extrema_out: Option<PathBuf>,
}

#[derive(Args)]
struct MultiArgs {
    /// Anchor (Delaunay vertex) file.
    #[arg(long)]
    anchors: PathBuf,
    /// Data points file.
    #[arg(long)]
    data: PathBuf,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the triangulation as JSON.
    #[arg(long)]
    triangulation_out: Option<PathBuf>,
}

#[derive(Args)]
struct TrArgs {
    #[arg(long)]
    r: String,
    #[arg(long, default_value = "equilateral")]
    triangle: String,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Core(PcdError),
}

impl From<PcdError> for CliError {
    fn from(e: PcdError) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn kind_code(&self) -> (&'static str, u8) {
        match self {
            CliError::Usage(_) => ("usage", 2),
            CliError::Core(e) => match e {
                PcdError::Io { .. } | PcdError::Parse { .. } | PcdError::Json(_) => ("io", 4),
                PcdError::Quadrature { .. }
                | PcdError::DegenerateTriangle { .. }
                | PcdError::DegenerateSimplex(_)
                | PcdError::Collinear
                | PcdError::NonFinite(..) => ("numeric", 3),
                _ => ("usage", 2),
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_r(s: &str) -> CliResult<RValue> {
    Ok(s.parse::<RValue>()?)
}

fn parse_triangle(s: &str) -> CliResult<Triangle2> {
    if s.trim() == "equilateral" {
        return Ok(Triangle2::equilateral());
    }
    let c: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| usage(format!("cannot parse triangle {s:?}")))?;
    let c: [f64; 6] = c.try_into().map_err(|_| usage("triangle needs six coordinates"))?;
    Ok(Triangle2::from_coords(c)?)
}

/// `(r, M spec)` from `--params` or from `--r`/`--M`.
fn param_spec(a: &ParamArgs) -> CliResult<(RValue, MSpec)> {
    if let Some(path) = &a.params {
        let cfg: ParamsConfig = serde_json::from_str(&read_text(path)?).map_err(|e| PcdError::Parse {
            path: path.clone(),
            line: e.line(),
            msg: e.to_string(),
        })?;
        return Ok((cfg.r.clone(), cfg.m_spec()?));
    }
    let r = a.r.as_deref().ok_or_else(|| usage("--r (or --params) is required"))?;
    Ok((parse_r(r)?, a.m.parse()?))
}

fn resolve_params(a: &ParamArgs, tri: &Triangle2) -> CliResult<(RValue, MSpec, ProximityParams)> {
    let (r, spec) = param_spec(a)?;
    let m = spec.resolve(r.value, tri)?;
    let p = ProximityParams::new(r.value, m)?;
    Ok((r, spec, p))
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => Ok(write_atomic(path, text.as_bytes())?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_line<T: Serialize>(v: &T) -> CliResult<String> {
    let mut s = serde_json::to_string(v).map_err(PcdError::from)?;
    s.push('\n');
    Ok(s)
}

fn cmd_pr(a: PrArgs) -> CliResult<()> {
    if !(a.tol > 0.0 && a.tol.is_finite()) {
        return Err(usage("--tol must be a positive number"));
    }
    if let Some(path) = &a.curve {
        let curve = emit_p_r_curve(path, a.tol)?;
        Manifest::new("pr", json!({ "tol": a.tol, "curve": path }), None).finish(std::slice::from_ref(path))?;
        if a.r.is_none() {
            let rows: Vec<Value> = curve.iter().map(|(r, p)| json!({ "r": r, "p_r": p })).collect();
            return emit(None, &json_line(&json!({ "curve": rows, "tol": a.tol }))?);
        }
    }
    let text = a.r.as_deref().ok_or_else(|| usage("--r is required"))?;
    let r = parse_r(text)?;
    let Expansion::Finite(rv) = r.value else {
        return Err(usage("p_r needs a finite r in (1, 3/2]"));
    };
    if rv <= 1.0 {
        return Err(usage("r must exceed 1"));
    }
    let v = p_r(rv, a.tol)?;
    emit(None, &json_line(&json!({ "r": r, "p_r": v, "tol": a.tol }))?)
}

fn cmd_gamma(a: GammaArgs) -> CliResult<()> {
    let tri = parse_triangle(&a.triangle)?;
    let (r, spec, params) = resolve_params(&a.params, &tri)?;
    let points = read_points(&a.points)?;
    if points.is_empty() {
        return Err(PcdError::EmptyInput.into());
    }
    let n = points.len();
    let inst = PcdInstance::new(tri, params, points)?;
    let res = if a.bruteforce { domination_bruteforce(&inst)? } else { domination_exact(&inst)? };
    let out = json!({ "gamma": res.gamma, "witness": res.witness, "arcs": inst.arc_count(), "n": n });
    emit(a.out.as_deref(), &json_line(&out)?)?;
    if let Some(path) = &a.out {
        let config = json!({
            "points": a.points, "triangle": a.triangle, "r": r, "M": spec, "bruteforce": a.bruteforce,
        });
        Manifest::new("gamma", config, None).finish(std::slice::from_ref(path))?;
    }
    Ok(())
}

/// Classifies `M` exactly when both `r` and `M` are rational.
fn single_law(r: &RValue, spec: &MSpec, params: &ProximityParams) -> CliResult<GammaLaw> {
    if let Some(q) = &r.exact {
        if let Some(m) = spec.resolve_exact(Some(q)) {
            return Ok(law_from_class(r.value, classify_m_exact(q, &m)?)?);
        }
    }
    Ok(asymptotic_law(params.r(), &params.m(), &BasicTriangleParams::equilateral())?)
}

fn cmd_law(a: LawArgs) -> CliResult<()> {
    let tri = parse_triangle(&a.triangle)?;
    let (r, spec, params) = resolve_params(&a.params, &tri)?;
    let law = single_law(&r, &spec, &params)?;
    let out = match a.jm {
        Some(jm) => {
            let law = lift_law(&law, jm)?;
            let (mean, variance) = law.moments();
            json!({ "r": r, "M": spec, "Jm": jm, "law": law, "mean": mean, "variance": variance })
        }
        None => {
            let (mean, variance) = law.moments();
            json!({ "r": r, "M": spec, "law": law, "mean": mean, "variance": variance })
        }
    };
    emit(None, &json_line(&out)?)
}

/// A config file is either a bare [`McConfig`] or a manifest holding one.
fn load_sim_config(path: &Path) -> CliResult<McConfig> {
    let text = read_text(path)?;
    let parse_err = |e: serde_json::Error| PcdError::Parse { path: path.to_path_buf(), line: e.line(), msg: e.to_string() };
    let v: Value = serde_json::from_str(&text).map_err(parse_err)?;
    let inner = match v.get("subcommand") {
        Some(Value::String(s)) if s == "simulate" => v.get("config").cloned().unwrap_or(Value::Null),
        Some(_) => return Err(usage(format!("{}: manifest is not from a simulate run", path.display()))),
        None => v,
    };
    Ok(serde_json::from_value(inner).map_err(parse_err)?)
}

fn sim_config(a: &SimArgs) -> CliResult<McConfig> {
    let mut cfg = match &a.config {
        Some(p) => load_sim_config(p)?,
        None => {
            let r = a.r.as_deref().ok_or_else(|| usage("--r (or --config) is required"))?;
            if a.n.is_empty() {
                return Err(usage("--n (or --config) is required"));
            }
            McConfig::new(parse_r(r)?, MSpec::Centroid, a.n.clone(), 0)
        }
    };
    if a.config.is_some() {
        if let Some(r) = &a.r {
            cfg.r = parse_r(r)?;
        }
        if !a.n.is_empty() {
            cfg.n = a.n.clone();
        }
    }
    if let Some(m) = &a.m {
        cfg.m = m.parse()?;
    }
    if let Some(v) = a.replicates {
        cfg.replicates = v;
    }
    if let Some(v) = a.seed {
        cfg.seed = v;
    }
    if let Some(v) = a.d {
        cfg.d = v;
    }
    if let Some(k) = a.anchors {
        cfg.mode = Mode::Multi { anchors: k };
    }
    cfg.validate()?;
    Ok(cfg)
}

fn cmd_simulate(a: SimArgs) -> CliResult<()> {
    let cfg = sim_config(&a)?;
    let report = run_mc(&cfg)?;
    let extrema = match &a.extrema_out {
        Some(_) if cfg.d != 2 || cfg.mode != Mode::Single => {
            return Err(usage("--extrema-out needs a planar single-triangle run"))
        }
        Some(_) => Some(trend_distinct_extrema(&cfg)?),
        None => None,
    };
    let format = a.out.as_deref().map_or(TableFormat::Json, TableFormat::from_path);
    let table = render_table(&report, format)?;
    let mut outputs = Vec::new();
    if let (Some(path), Some(rows)) = (&a.extrema_out, &extrema) {
        let mut s = String::from("n,fraction_distinct\n");
        for (n, f) in rows {
            s.push_str(&format!("{n},{f}\n"));
        }
        write_atomic(path, s.as_bytes())?;
        outputs.push(path.clone());
    }
    emit(a.out.as_deref(), &table)?;
    if let Some(path) = &a.out {
        outputs.insert(0, path.clone());
        let config = serde_json::to_value(&cfg).map_err(PcdError::from)?;
        Manifest::new("simulate", config, report.wall_time_s).with_seed(cfg.seed).finish(&outputs)?;
    }
    Ok(())
}

fn cmd_multi(a: MultiArgs) -> CliResult<()> {
    let (r, spec) = param_spec(&a.params)?;
    let m = spec.resolve(r.value, &Triangle2::equilateral())?;
    let params = ProximityParams::new(r.value, m)?;
    let anchors = read_points(&a.anchors)?;
    let data = read_points(&a.data)?;
    let res = domination_multi(&anchors, &data, &params)?;
    let out = json!({
        "total_gamma": res.total_gamma,
        "kept": res.kept,
        "discarded": res.discarded,
        "cells": res.cells,
    });
    let mut outputs = Vec::new();
    if let (Some(path), Some(dt)) = (&a.triangulation_out, &res.triangulation) {
        write_triangulation(path, dt)?;
        outputs.push(path.clone());
    }
    emit(a.out.as_deref(), &to_json_pretty(&out)?)?;
    if let Some(path) = &a.out {
        outputs.insert(0, path.clone());
        let config = json!({ "anchors": a.anchors, "data": a.data, "r": r, "M": spec });
        Manifest::new("multi", config, None).finish(&outputs)?;
    }
    Ok(())
}

fn cmd_tr(a: TrArgs) -> CliResult<()> {
    let r = parse_r(&a.r)?;
    let tri = parse_triangle(&a.triangle)?;
    let Expansion::Finite(rv) = r.value else {
        return emit(None, &json_line(&json!({ "r": r, "empty": true, "vertices": null, "bary": null }))?);
    };
    let out = match tr_vertices_bary(rv) {
        None => json!({ "r": r, "empty": true, "vertices": null, "bary": null }),
        Some(bs) => {
            let pts: Vec<Point2> = bs.iter().map(|b| tri.point_at(b)).collect();
            json!({ "r": r, "empty": false, "degenerate": rv == 1.5, "vertices": pts, "bary": bs })
        }
    };
    emit(None, &json_line(&out)?)
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Pr(a) => cmd_pr(a),
        Command::Gamma(a) => cmd_gamma(a),
        Command::Law(a) => cmd_law(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Multi(a) => cmd_multi(a),
        Command::Tr(a) => cmd_tr(a),
        Command::Version => emit(
            None,
            &json_line(&json!({ "name": "pcd", "version": env!("CARGO_PKG_VERSION") }))?,
        ),
    }
}

fn fail(kind: &str, code: u8, message: &str) -> ExitCode {
    eprintln!("{}", json!({ "error": kind, "code": code, "message": message }));
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            return fail("usage", 2, first);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (kind, code) = e.kind_code();
            fail(kind, code, &e.message())
        }
    }
}
