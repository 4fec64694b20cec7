//! Seeded Monte-Carlo estimates of the distribution of the domination number.
//!
//! Replicate `i` at sample size `n` draws from [`replicate_rng`]`(seed, n, i)`,
//! and results are tabulated in replicate order, so a report depends only on
//! the configuration and never on the number of worker threads.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{p_r, DEFAULT_TOL};
use crate::domination::{domination_exact_bary, domination_multi};
use crate::error::{PcdError, Result};
use crate::geom2::{sample_uniform_triangle, Bary3, Point2, Triangle2};
use crate::io::write_atomic;
use crate::proximity::{edge_extrema, MSpec, ProximityParams, RValue};
use crate::rng::replicate_rng;
use crate::simplexd::{domination_exact_d, sample_uniform_simplex, MAX_DIM, MIN_DIM};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "PCD_THREADS";

fn default_replicates() -> usize {
    1000
}

fn default_dim() -> usize {
    2
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum Mode {
    /// Uniform data in one triangle (or simplex).
    #[default]
    Single,
    /// Anchors and data uniform in the unit square; `γ` summed over the
    /// Delaunay cells of the anchors.
    Multi { anchors: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub r: RValue,
    #[serde(rename = "M", default = "centroid_spec")]
    pub m: MSpec,
    pub n: Vec<usize>,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    pub seed: u64,
    #[serde(default = "default_dim")]
    pub d: usize,
    #[serde(default)]
    pub mode: Mode,
}

fn centroid_spec() -> MSpec {
    MSpec::Centroid
}

impl McConfig {
    pub fn new(r: RValue, m: MSpec, n: Vec<usize>, seed: u64) -> Self {
        Self { r, m, n, replicates: default_replicates(), seed, d: default_dim(), mode: Mode::Single }
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(PcdError::invalid("replicates must be at least 1"));
        }
        if self.n.is_empty() || self.n.contains(&0) {
            return Err(PcdError::invalid("sample sizes must be a non-empty list of positive integers"));
        }
        if !(MIN_DIM..=MAX_DIM).contains(&self.d) {
            return Err(PcdError::invalid(format!("d must be between {MIN_DIM} and {MAX_DIM}, got {}", self.d)));
        }
        if self.d > 2 {
            if !self.m.is_centroid() {
                return Err(PcdError::invalid("only M = centroid is supported for d > 2"));
            }
            if self.mode != Mode::Single {
                return Err(PcdError::invalid("multi-triangle mode is planar only"));
            }
        }
        if let Mode::Multi { anchors } = self.mode {
            if anchors < 3 {
                return Err(PcdError::invalid("multi-triangle mode needs at least 3 anchors"));
            }
        }
        self.params().map(|_| ())
    }

    /// Center and expansion in the standard equilateral triangle.
    pub fn params(&self) -> Result<ProximityParams> {
        let m = self.m.resolve(self.r.value, &Triangle2::equilateral())?;
        ProximityParams::new(self.r.value, m)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KRow {
    pub k: usize,
    pub count: usize,
    pub phat: f64,
    pub stderr: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NTable {
    pub n: usize,
    pub rows: Vec<KRow>,
    pub mean: f64,
    pub variance: f64,
}

impl NTable {
    pub fn phat(&self, k: usize) -> f64 {
        self.rows.iter().find(|r| r.k == k).map_or(0.0, |r| r.phat)
    }

    pub fn count(&self, k: usize) -> usize {
        self.rows.iter().find(|r| r.k == k).map_or(0, |r| r.count)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub config: McConfig,
    pub tables: Vec<NTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl McReport {
    pub fn table(&self, n: usize) -> Option<&NTable> {
        self.tables.iter().find(|t| t.n == n)
    }

    /// The report without its wall-time field.
    pub fn without_timing(&self) -> Self {
        Self { wall_time_s: None, ..self.clone() }
    }
}

/// Worker count from `PCD_THREADS`, if set to a positive integer.
pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(t) if t > 0 => Ok(Some(t)),
            _ => Err(PcdError::invalid(format!("{THREADS_ENV} must be a positive integer, got {s:?}"))),
        },
    }
}

fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        b = b.num_threads(t);
    }
    let pool = b.build().map_err(|e| PcdError::invalid(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

fn one_replicate(cfg: &McConfig, params: &ProximityParams, n: usize, rep: usize) -> Result<usize> {
    let mut rng = replicate_rng(cfg.seed, n, rep);
    match cfg.mode {
        Mode::Single if cfg.d == 2 => {
            let te = Triangle2::equilateral();
            let pts: Vec<Bary3> = (0..n)
                .map(|_| te.barycentric(&sample_uniform_triangle(&te, &mut rng)))
                .collect();
            Ok(domination_exact_bary(params, &pts)?.gamma)
        }
        Mode::Single => {
            let pts: Vec<_> = (0..n).map(|_| sample_uniform_simplex(cfg.d, &mut rng)).collect();
            Ok(domination_exact_d(&pts, params.r())?.gamma)
        }
        Mode::Multi { anchors } => {
            let mut unit = || Point2::raw(rng.random(), rng.random());
            let ys: Vec<Point2> = (0..anchors).map(|_| unit()).collect();
            let xs: Vec<Point2> = (0..n).map(|_| unit()).collect();
            Ok(domination_multi(&ys, &xs, params)?.total_gamma)
        }
    }
}

fn tabulate(n: usize, gammas: &[usize], ks: &[usize]) -> NTable {
    let total = gammas.len() as f64;
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &g in gammas {
        *counts.entry(g).or_default() += 1;
    }
    let rows = ks
        .iter()
        .map(|&k| {
            let count = counts.get(&k).copied().unwrap_or(0);
            let phat = count as f64 / total;
            KRow { k, count, phat, stderr: (phat * (1.0 - phat) / total).sqrt() }
        })
        .collect();
    let mean = gammas.iter().sum::<usize>() as f64 / total;
    let variance = gammas.iter().map(|&g| (g as f64 - mean).powi(2)).sum::<f64>() / total;
    NTable { n, rows, mean, variance }
}

/// Runs the experiment with the worker count taken from `PCD_THREADS`.
pub fn run_mc(config: &McConfig) -> Result<McReport> {
    run_mc_with_threads(config, threads_from_env()?)
}

pub fn run_mc_with_threads(config: &McConfig, threads: Option<usize>) -> Result<McReport> {
    config.validate()?;
    let params = config.params()?;
    let start = Instant::now();
    let gammas: Vec<Vec<usize>> = with_pool(threads, || {
        config
            .n
            .iter()
            .map(|&n| {
                (0..config.replicates)
                    .into_par_iter()
                    .map(|rep| one_replicate(config, &params, n, rep))
                    .collect::<Result<Vec<usize>>>()
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let ks: Vec<usize> = match config.mode {
        Mode::Single => (1..=config.d + 1).collect(),
        Mode::Multi { .. } => {
            let mut all: Vec<usize> = gammas.iter().flatten().copied().collect();
            all.sort_unstable();
            all.dedup();
            all
        }
    };
    let tables = config.n.iter().zip(&gammas).map(|(&n, g)| tabulate(n, g, &ks)).collect();
    Ok(McReport { config: config.clone(), tables, wall_time_s: Some(start.elapsed().as_secs_f64()) })
}

/// Fraction of replicates, per `n`, whose three closest-edge extrema are
/// distinct points. Uses the same planar streams as [`run_mc`].
pub fn trend_distinct_extrema(config: &McConfig) -> Result<Vec<(usize, f64)>> {
    if config.replicates == 0 || config.n.contains(&0) {
        return Err(PcdError::invalid("replicates and sample sizes must be positive"));
    }
    let te = Triangle2::equilateral();
    with_pool(threads_from_env()?, || {
        config
            .n
            .iter()
            .map(|&n| {
                let hits = (0..config.replicates)
                    .into_par_iter()
                    .map(|rep| {
                        let mut rng = replicate_rng(config.seed, n, rep);
                        let pts: Vec<Bary3> = (0..n)
                            .map(|_| te.barycentric(&sample_uniform_triangle(&te, &mut rng)))
                            .collect();
                        let [a, b, c] = edge_extrema(&pts)?;
                        Ok(usize::from(a != b && b != c && a != c))
                    })
                    .collect::<Result<Vec<usize>>>()?;
                Ok((n, hits.iter().sum::<usize>() as f64 / config.replicates as f64))
            })
            .collect()
    })?
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

impl TableFormat {
    /// `.json` selects JSON, anything else CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension() {
            Some(e) if e.eq_ignore_ascii_case("json") => TableFormat::Json,
            _ => TableFormat::Csv,
        }
    }
}

/// `n,k,count,phat,stderr`, one row per sample size and value of `k`.
pub fn report_to_csv(report: &McReport) -> String {
    let mut s = String::from("n,k,count,phat,stderr\n");
    for t in &report.tables {
        for r in &t.rows {
            s.push_str(&format!("{},{},{},{},{}\n", t.n, r.k, r.count, r.phat, r.stderr));
        }
    }
    s
}

/// Pretty JSON of the report, wall time omitted.
pub fn report_to_json(report: &McReport) -> Result<String> {
    crate::io::to_json_pretty(&report.without_timing())
}

pub fn report_from_json(text: &str) -> Result<McReport> {
    Ok(serde_json::from_str(text)?)
}

pub fn render_table(report: &McReport, format: TableFormat) -> Result<String> {
    match format {
        TableFormat::Csv => Ok(report_to_csv(report)),
        TableFormat::Json => report_to_json(report),
    }
}

pub fn emit_table(report: &McReport, format: TableFormat, path: &Path) -> Result<()> {
    write_atomic(path, render_table(report, format)?.as_bytes())
}

/// `r = 1.05, 1.10, …, 1.50`.
pub fn p_r_grid() -> Vec<f64> {
    (0..10).map(|i| (105 + 5 * i) as f64 / 100.0).collect()
}

pub fn p_r_curve(rs: &[f64], tol: f64) -> Result<Vec<(f64, f64)>> {
    rs.par_iter().map(|&r| Ok((r, p_r(r, tol)?))).collect()
}

/// `r,p_r` rows for plotting.
pub fn p_r_curve_csv(curve: &[(f64, f64)]) -> String {
    let mut s = String::from("r,p_r\n");
    for (r, p) in curve {
        s.push_str(&format!("{r},{p}\n"));
    }
    s
}

pub fn emit_p_r_curve(path: &Path, tol: f64) -> Result<Vec<(f64, f64)>> {
    let curve = p_r_curve(&p_r_grid(), tol)?;
    write_atomic(path, p_r_curve_csv(&curve).as_bytes())?;
    Ok(curve)
}

/// Default tolerance for curve points.
pub const CURVE_TOL: f64 = DEFAULT_TOL;
