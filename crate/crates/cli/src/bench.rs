//! `bench`: wall time and accuracy of the representation solver, the L1
//! scheme and the spectral solution on the cosine datum.

use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use thetafrac::oracle::{cosine_coefficients, l1_solve, spectral_solve, L1Config};
use thetafrac::specfun::evaluation_count;
use thetafrac::{CauchyData, ExperimentConfig, Profile, Solver, SpaceTimeGrid};

use crate::manifest::OutputDir;
use crate::settings::{CliError, GlobalArgs};

pub const BENCH_SCHEMA_VERSION: u32 = 1;

/// Accuracy is measured on `t ∈ [BENCH_T_LO, 1]`, away from the initial
/// layer where the L1 scheme is least accurate.
const BENCH_T_LO: f64 = 0.05;

/// Each timing is the best of this many runs.
const BENCH_REPEATS: usize = 3;

#[derive(Debug, Serialize)]
pub struct BenchRow {
    pub nx: usize,
    pub nt: usize,
    pub representation_seconds: f64,
    pub representation_wright_evaluations: u64,
    pub representation_error: f64,
    pub l1_seconds: f64,
    pub l1_seconds_per_step: f64,
    pub l1_error: f64,
    pub spectral_seconds: f64,
}

#[derive(Debug, Serialize)]
pub struct BenchReport {
    pub schema_version: u32,
    pub alpha: f64,
    pub rows: Vec<BenchRow>,
    /// Ratio of L1 cost per step between consecutive sizes.
    pub l1_step_cost_ratio: Vec<f64>,
}

/// Last result and shortest wall time over [`BENCH_REPEATS`] runs.
fn timed<R>(f: impl Fn() -> R) -> (R, f64) {
    let mut best = f64::INFINITY;
    let mut result = None;
    for _ in 0..BENCH_REPEATS {
        let start = Instant::now();
        let r = f();
        best = best.min(start.elapsed().as_secs_f64());
        result = Some(r);
    }
    (result.expect("at least one run"), best)
}

pub fn run(
    sizes: &[usize],
    config: &ExperimentConfig,
    _args: &GlobalArgs,
) -> Result<bool, CliError> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(CliError::Usage("--sizes needs positive step counts".into()));
    }
    let order = config.order()?;
    let nx = config.grid.nx;
    let u0 = Profile::function(|x: f64| (std::f64::consts::PI * x).cos());
    let data = CauchyData::with_flux_fn(u0.clone(), |_| 0.0, 1.0, 1)?;
    let coeffs = cosine_coefficients(&u0, 8, 64);
    let mut rows = Vec::new();
    for &nt in sizes {
        let grid = SpaceTimeGrid::new(nx, nt, 1.0)?;
        let (truth, spectral_seconds) = timed(|| spectral_solve(&coeffs, order, &grid));
        let truth = truth?;
        let solve = || {
            Solver::new(order, config.truncation(), config.solver_options())
                .and_then(|s| s.solve_ibvp(&data, &grid))
        };
        let before = evaluation_count();
        solve()?;
        let evals = evaluation_count() - before;
        let (rep, representation_seconds) = timed(solve);
        let rep = rep?;
        let l1_config = L1Config {
            nx_fd: nx,
            nt_fd: nt,
            ..L1Config::default()
        };
        let (l1, l1_seconds) = timed(|| l1_solve(&data, None, order, &l1_config, &grid));
        let l1 = l1?;
        rows.push(BenchRow {
            nx,
            nt,
            representation_seconds,
            representation_wright_evaluations: evals,
            representation_error: rep.field.max_diff_in(&truth, BENCH_T_LO, 1.0)?,
            l1_seconds,
            l1_seconds_per_step: l1_seconds / nt as f64,
            l1_error: l1.max_diff_in(&truth, BENCH_T_LO, 1.0)?,
            spectral_seconds,
        });
    }
    let ratios = rows
        .windows(2)
        .map(|w| w[1].l1_seconds_per_step / w[0].l1_seconds_per_step)
        .collect();
    let report = BenchReport {
        schema_version: BENCH_SCHEMA_VERSION,
        alpha: config.alpha,
        rows,
        l1_step_cost_ratio: ratios,
    };
    println!(
        "{:>5} {:>5} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}",
        "nx", "nt", "rep [s]", "wright", "rep err", "L1 [s]", "L1 err", "spec [s]"
    );
    for r in &report.rows {
        println!(
            "{:>5} {:>5} {:>10.3e} {:>10} {:>10.2e} {:>10.3e} {:>10.2e} {:>10.3e}",
            r.nx,
            r.nt,
            r.representation_seconds,
            r.representation_wright_evaluations,
            r.representation_error,
            r.l1_seconds,
            r.l1_error,
            r.spectral_seconds
        );
    }
    let mut out = OutputDir::create(Path::new(&config.output_dir))?;
    let path = out.write("bench.json", thetafrac::io::to_json(&report).as_bytes())?;
    out.finish("bench", config)?;
    println!("report: {}", path.display());
    Ok(true)
}
