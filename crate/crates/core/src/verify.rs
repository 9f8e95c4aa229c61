//! Verification suites. Each suite checks one group of properties against
//! independent oracles, closed forms or explicit inequalities and returns a
//! serializable report; [`run`] collects several into one document.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    decay_bounds_check, decay_identity_check, kernel_bound_suite, laplace_identity_check,
    log_space, mollified_step, moment_rate_check, numeric_laplace, standard_data, titchmarsh_demo,
    trace_growth, ucp_experiment, LaplaceProbe,
};
use crate::config::{ExperimentConfig, SCENARIOS};
use crate::error::{Error, Result};
use crate::grid::{Profile, SpaceTimeGrid, TimeSeries};
use crate::kernel::{
    k_laplace_closed, theta_laplace_closed, theta_rl_laplace_closed, FractionalOrder, Kernel,
};
use crate::oracle::{cosine_coefficients, l1_solve, spectral_solve, L1Config};
use crate::report::BoundReport;
use crate::solver::{CauchyData, Solver};
use crate::specfun::{mittag_leffler, wright_m, SeriesTolerance};

/// Version of the report layout; bumped on incompatible changes.
pub const SCHEMA_VERSION: u32 = 1;

/// Suite names in execution order. `all` runs every one of them.
pub const SUITES: [&str; 8] = [
    "specfun",
    "laplace",
    "bounds",
    "solver",
    "growth",
    "analysis",
    "ucp",
    "titchmarsh",
];

/// Default orders of the suites that sweep `α`.
pub const ORDERS: [f64; 3] = [0.3, 0.5, 0.7];

/// Horizon of the graded traces used by the growth suite.
pub const GROWTH_HORIZON: f64 = 10.0;

/// Horizon of the graded traces used by the Laplace-domain checks; the
/// transform tail at `s = 1` is below `e^{-16}`.
pub const IDENTITY_HORIZON: f64 = 16.0;

/// Transform variables of the Laplace-domain checks.
pub const IDENTITY_S: (f64, f64, usize) = (1.0, 20.0, 12);

/// Leading supports and ramp width of the fluxes in the onset demo.
pub const ONSET_SUPPORTS: [f64; 2] = [0.25, 0.5];
pub const ONSET_RAMP: f64 = 0.1;
pub const ONSET_STEPS: usize = 1024;
pub const ONSET_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

/// One scalar comparison `measured <= limit` or `measured >= limit`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub measured: f64,
    pub relation: Relation,
    pub limit: f64,
    pub pass: bool,
}

impl Check {
    pub fn at_most(id: impl Into<String>, measured: f64, limit: f64) -> Self {
        Self {
            id: id.into(),
            measured,
            relation: Relation::AtMost,
            limit,
            // NaN fails
            pass: measured <= limit,
        }
    }

    pub fn at_least(id: impl Into<String>, measured: f64, limit: f64) -> Self {
        Self {
            id: id.into(),
            measured,
            relation: Relation::AtLeast,
            limit,
            pass: measured >= limit,
        }
    }

    /// Validation ratio of a bound report against 1.
    pub fn from_bound(report: &BoundReport) -> Self {
        Self {
            pass: report.pass,
            ..Self::at_most(report.estimate_id.clone(), report.worst_ratio, 1.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    /// Fitted bound reports backing some of the checks.
    pub bounds: Vec<BoundReport>,
}

impl SuiteReport {
    fn new(suite: &str, checks: Vec<Check>, bounds: Vec<BoundReport>) -> Self {
        Self {
            suite: suite.to_string(),
            pass: checks.iter().all(|c| c.pass),
            checks,
            bounds,
        }
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }
}

/// Parameters swept inside suites: the orders of the laplace, bounds,
/// solver and growth suites, and the scenarios of the ucp suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub orders: Vec<f64>,
    pub scenarios: Vec<String>,
}

impl Default for Sweep {
    fn default() -> Self {
        Self {
            orders: ORDERS.to_vec(),
            scenarios: SCENARIOS.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl Sweep {
    pub fn validate(&self) -> Result<()> {
        for &alpha in &self.orders {
            FractionalOrder::new(alpha)?;
        }
        for s in &self.scenarios {
            if !SCENARIOS.contains(&s.as_str()) {
                return Err(Error::ScenarioUnknown(s.clone()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub config: ExperimentConfig,
    pub sweep: Sweep,
    pub pass: bool,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn suite(&self, name: &str) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| s.suite == name)
    }
}

/// Expands `all` and rejects unknown names.
pub fn resolve_suites(names: &[&str]) -> Result<Vec<&'static str>> {
    let mut out: Vec<&'static str> = Vec::new();
    for name in names {
        if *name == "all" {
            out.extend(SUITES);
        } else if let Some(s) = SUITES.iter().find(|s| *s == name) {
            out.push(s);
        } else {
            return Err(Error::SuiteUnknown(name.to_string()));
        }
    }
    let mut seen = Vec::new();
    out.retain(|s| {
        let fresh = !seen.contains(s);
        seen.push(s);
        fresh
    });
    Ok(out)
}

/// Runs the named suites (`all` for every suite) with one configuration.
pub fn run(names: &[&str], config: &ExperimentConfig, sweep: &Sweep) -> Result<VerifyReport> {
    config.validate()?;
    sweep.validate()?;
    let suites = resolve_suites(names)?
        .into_iter()
        .map(|s| run_suite(s, config, sweep))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport {
        schema_version: SCHEMA_VERSION,
        config: config.clone(),
        sweep: sweep.clone(),
        pass: suites.iter().all(|s| s.pass),
        suites,
    })
}

pub fn run_all(config: &ExperimentConfig) -> Result<VerifyReport> {
    run(&["all"], config, &Sweep::default())
}

pub fn run_suite(name: &str, config: &ExperimentConfig, sweep: &Sweep) -> Result<SuiteReport> {
    let orders = &sweep.orders;
    match name {
        "specfun" => specfun_suite(),
        "laplace" => laplace_suite(config, orders),
        "bounds" => bounds_suite(config, orders),
        "solver" => solver_suite(config, orders),
        "growth" => growth_suite(config, orders),
        "analysis" => analysis_suite(config),
        "ucp" => ucp_suite(config, &sweep.scenarios),
        "titchmarsh" => titchmarsh_suite(config),
        other => Err(Error::SuiteUnknown(other.to_string())),
    }
}

fn rel_err(got: f64, want: f64) -> f64 {
    if got == want {
        0.0
    } else {
        (got - want).abs() / want.abs()
    }
}

fn tagged(mut report: BoundReport, tag: &str) -> BoundReport {
    report.estimate_id = format!("{}[{tag}]", report.estimate_id);
    report
}

/// Closed-form special cases of the Wright and Mittag-Leffler functions.
pub fn specfun_suite() -> Result<SuiteReport> {
    let tol = SeriesTolerance::default();
    let mut wright = 0.0f64;
    for k in 0..=100 {
        let z = 0.1 * k as f64;
        let exact = (-z * z / 4.0).exp() / std::f64::consts::PI.sqrt();
        wright = wright.max(rel_err(wright_m(0.5, z, &tol)?, exact));
    }
    let mut ml = 0.0f64;
    for k in 0..=100 {
        let x = 0.05 * k as f64;
        let exact = (x * x).exp() * libm::erfc(x);
        ml = ml.max(rel_err(mittag_leffler(0.5, 1.0, -x, &tol)?, exact));
    }
    let mut ml_exp = 0.0f64;
    for k in 0..=100 {
        let x = -0.2 * k as f64;
        ml_exp = ml_exp.max(rel_err(mittag_leffler(1.0, 1.0, x, &tol)?, x.exp()));
    }
    Ok(SuiteReport::new(
        "specfun",
        vec![
            Check::at_most("wright_m_half_gaussian", wright, 1e-10),
            Check::at_most("mittag_leffler_half_erfc", ml, 1e-8),
            Check::at_most("mittag_leffler_one_exp", ml_exp, 1e-10),
        ],
        vec![],
    ))
}

/// Numerical transforms of sampled kernels against their closed forms.
pub fn laplace_suite(config: &ExperimentConfig, orders: &[f64]) -> Result<SuiteReport> {
    let ts = log_space(1e-10, 60.0, 3000);
    let ss = log_space(0.5, 40.0, 20);
    let rel_tol = config.tol("laplace_rel");
    let mut checks = Vec::new();
    for &alpha in orders {
        let order = FractionalOrder::new(alpha)?;
        let kernel = Kernel::new(order, config.truncation())?;
        let nu = order.half();
        type Case = (
            String,
            TimeSeries<f64>,
            f64,
            Box<dyn Fn(f64) -> Result<f64>>,
        );
        let mut cases: Vec<Case> = Vec::new();
        for x in [0.0, 0.5, 1.0] {
            let gamma = if x == 0.0 { -nu } else { 0.0 };
            let k = TimeSeries::new(
                ts.clone(),
                ts.iter().map(|&t| kernel.k(x, t)).collect::<Result<_>>()?,
            )?;
            cases.push((
                format!("k[alpha={alpha},x={x}]"),
                k,
                gamma,
                Box::new(move |s| k_laplace_closed(order, x, s)),
            ));
            let th = TimeSeries::new(
                ts.clone(),
                ts.iter()
                    .map(|&t| kernel.theta(x, t))
                    .collect::<Result<_>>()?,
            )?;
            cases.push((
                format!("theta[alpha={alpha},x={x}]"),
                th,
                gamma,
                Box::new(move |s| theta_laplace_closed(order, x, s)),
            ));
        }
        let th_rl = TimeSeries::new(
            ts.clone(),
            ts.iter()
                .map(|&t| kernel.theta_rl(1.0, t))
                .collect::<Result<_>>()?,
        )?;
        cases.push((
            format!("theta_rl[alpha={alpha},x=1]"),
            th_rl,
            0.0,
            Box::new(move |s| theta_rl_laplace_closed(order, s)),
        ));
        for (id, series, gamma, closed) in cases {
            let mut worst = 0.0f64;
            for &s in &ss {
                let got = numeric_laplace(&series, s, gamma, 1e-3 * rel_tol)?;
                worst = worst.max(rel_err(got.value, closed(s)?));
            }
            checks.push(Check::at_most(id, worst, 1e-5));
        }
    }
    Ok(SuiteReport::new("laplace", checks, vec![]))
}

/// Fit-then-validate of the four kernel estimates per order.
pub fn bounds_suite(config: &ExperimentConfig, orders: &[f64]) -> Result<SuiteReport> {
    let mut bounds = Vec::new();
    for &alpha in orders {
        let kernel = Kernel::new(FractionalOrder::new(alpha)?, config.truncation())?;
        for r in kernel_bound_suite(&kernel)? {
            bounds.push(tagged(r, &format!("alpha={alpha}")));
        }
    }
    let checks = bounds.iter().map(Check::from_bound).collect();
    Ok(SuiteReport::new("bounds", checks, bounds))
}

fn solver_for(config: &ExperimentConfig, alpha: f64) -> Result<Solver<f64>> {
    Solver::new(
        FractionalOrder::new(alpha)?,
        config.truncation(),
        config.solver_options(),
    )
}

/// Representation solver against the spectral and finite-difference
/// oracles, and preservation of constants.
pub fn solver_suite(config: &ExperimentConfig, orders: &[f64]) -> Result<SuiteReport> {
    use std::f64::consts::PI;
    let grid = SpaceTimeGrid::new(21, 32, 1.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let random: Vec<f64> = (0..5)
        .map(|k| rng.gen_range(-1.0..1.0) / (1.0 + k as f64).powi(2))
        .collect();
    let mut checks = Vec::new();
    for &alpha in orders {
        let order = FractionalOrder::new(alpha)?;
        let solver = solver_for(config, alpha)?;
        let tag = format!("alpha={alpha}");

        let cosine = Profile::function(|x: f64| (PI * x).cos());
        let data = CauchyData::with_flux_fn(cosine.clone(), |_| 0.0, 1.0, 1)?;
        let sol = solver.solve_ibvp(&data, &grid)?;
        let spec = spectral_solve(&cosine_coefficients(&cosine, 4, 64), order, &grid)?;
        checks.push(Check::at_most(
            format!("cosine_vs_spectral[{tag}]"),
            sol.field.max_diff_in(&spec, 0.05, 1.0)?,
            1e-4,
        ));

        let coeffs = random.clone();
        let poly = Profile::function(move |x: f64| {
            coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * (k as f64 * PI * x).cos())
                .sum()
        });
        let data = CauchyData::with_flux_fn(poly.clone(), |_| 0.0, 1.0, 1)?;
        let sol = solver.solve_ibvp(&data, &grid)?;
        let spec = spectral_solve(&cosine_coefficients(&poly, 8, 64), order, &grid)?;
        checks.push(Check::at_most(
            format!("random_modes_vs_spectral[{tag}]"),
            sol.field.max_diff_in(&spec, 0.05, 1.0)?,
            1e-4,
        ));

        let data = CauchyData::with_flux_fn(Profile::constant(1.0), |_| 0.0, 1.0, 1)?;
        let sol = solver.solve_ibvp(&data, &grid)?;
        let drift = sol
            .field
            .values()
            .iter()
            .fold(0.0f64, |m, v| m.max((v - 1.0).abs()));
        checks.push(Check::at_most(
            format!("constant_preserved[{tag}]"),
            drift,
            1e-6,
        ));

        let data =
            CauchyData::with_flux_fn(Profile::zero(), |t: f64| 4.0 * t * (1.0 - t), 1.0, 64)?;
        let sol = solver.solve_ibvp(&data, &grid)?;
        let l1 = l1_solve(&data, None, order, &L1Config::default(), &grid)?;
        checks.push(Check::at_most(
            format!("flux_vs_l1[{tag}]"),
            sol.field.max_diff(&l1)?,
            1e-3,
        ));
    }
    Ok(SuiteReport::new("solver", checks, vec![]))
}

/// Growth of the left trace on `(0, 10]` for every standard datum.
pub fn growth_suite(config: &ExperimentConfig, orders: &[f64]) -> Result<SuiteReport> {
    let mut bounds = Vec::new();
    for &alpha in orders {
        let order = FractionalOrder::new(alpha)?;
        let solver = solver_for(config, alpha)?;
        for (name, data) in standard_data(config.horizon)? {
            let trace = solver.graded_left_trace(&data, GROWTH_HORIZON, 6, 4.0, 128)?;
            let report = trace_growth(order, &trace, trace.t[0], GROWTH_HORIZON);
            bounds.push(tagged(report, &format!("alpha={alpha},{name}")));
        }
    }
    let checks = bounds.iter().map(Check::from_bound).collect();
    Ok(SuiteReport::new("growth", checks, bounds))
}

/// Laplace-domain decomposition, explicit decay inequalities and the
/// exponential rate of the moment functional.
pub fn analysis_suite(config: &ExperimentConfig) -> Result<SuiteReport> {
    let order = config.order()?;
    let solver = solver_for(config, config.alpha)?;
    let tol = config.tol("identity_rel");
    let mut checks = Vec::new();
    let mut bounds = Vec::new();
    for (name, data) in standard_data(config.horizon)? {
        let trace = solver.graded_left_trace(&data, IDENTITY_HORIZON, 8, 4.0, 128)?;
        let mut probe =
            LaplaceProbe::log_spaced(IDENTITY_S.0, IDENTITY_S.1, IDENTITY_S.2, IDENTITY_HORIZON)?;
        let mut reports = vec![
            decay_identity_check(&data, order, &probe, &trace, tol)?,
            laplace_identity_check(&data, order, &mut probe, &trace, tol)?,
        ];
        reports.extend(decay_bounds_check(&data, order, &probe, &trace)?);
        // with u0 ≠ 0 the trace does not vanish on (0,T), so the I₃ and
        // moment bounds must be violated
        let cauchy = data.u0.sup_norm() == 0.0;
        for r in reports {
            let stem = r.estimate_id.clone();
            let contrapositive = !cauchy && (stem == "decay_i3" || stem == "decay_moment");
            let r = tagged(r, &name);
            checks.push(if contrapositive {
                Check::at_least(format!("{stem}_violated[{name}]"), r.worst_ratio, 1.0)
            } else {
                Check::from_bound(&r)
            });
            bounds.push(r);
        }
    }
    let zs: Vec<f64> = (0..=18).map(|k| 20.0 + 10.0 * k as f64).collect();
    for c in [0.25, 0.5, 0.75] {
        let profiles = [
            ("ramp", Profile::function(move |x: f64| (x - c).max(0.0))),
            (
                "indicator",
                Profile::function(move |x: f64| if x >= c { 1.0 } else { 0.0 }),
            ),
        ];
        for (label, u0) in profiles {
            let r = tagged(
                moment_rate_check(&u0, c, &zs, 0.02),
                &format!("{label},c={c}"),
            );
            checks.push(Check::at_most(
                r.estimate_id.clone(),
                r.fitted_constants["rate"],
                1.0 - c + 0.02,
            ));
            bounds.push(r);
        }
    }
    Ok(SuiteReport::new("analysis", checks, bounds))
}

/// Unique-continuation scenarios at two resolutions each.
pub fn ucp_suite(config: &ExperimentConfig, scenarios: &[String]) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let mut bounds = Vec::new();
    for scenario in scenarios {
        let scenario = scenario.as_str();
        let cfg = ExperimentConfig {
            scenario: scenario.to_string(),
            ..config.clone()
        };
        let report = ucp_experiment(&cfg)?;
        for run in &report.runs {
            let tag = format!("{scenario}[nx={},nt={}]", run.nx, run.nt);
            match scenario {
                "B" => {
                    checks.push(Check::at_least(
                        format!("trace_floor_{tag}"),
                        run.trace_norm,
                        run.threshold,
                    ));
                    // the moment bound is expected to be violated
                    if let Some(m) = run.checks.iter().find(|c| c.estimate_id == "decay_moment") {
                        checks.push(Check::at_least(
                            format!("moment_bound_violated_{tag}"),
                            m.worst_ratio,
                            1.0,
                        ));
                    }
                }
                _ => {
                    checks.push(Check::at_most(
                        format!("zero_field_{tag}"),
                        run.field_norm,
                        run.threshold,
                    ));
                    for c in &run.checks {
                        checks.push(Check::from_bound(&tagged(c.clone(), &tag)));
                    }
                }
            }
            bounds.extend(run.checks.iter().map(|c| tagged(c.clone(), &tag)));
        }
    }
    Ok(SuiteReport::new("ucp", checks, bounds))
}

/// Onset of `D^{1-α}θ(1,·) * g` for fluxes with a known leading support.
pub fn titchmarsh_suite(config: &ExperimentConfig) -> Result<SuiteReport> {
    let kernel = Kernel::new(config.order()?, config.truncation())?;
    let dt = 1.0 / ONSET_STEPS as f64;
    let ts: Vec<f64> = (0..=ONSET_STEPS).map(|j| j as f64 * dt).collect();
    let k = TimeSeries::new(
        ts.clone(),
        ts.iter()
            .map(|&t| {
                if t == 0.0 {
                    Ok(0.0)
                } else {
                    kernel.theta_rl(1.0, t).map(|v| 2.0 * v)
                }
            })
            .collect::<Result<_>>()?,
    )?;
    let gs: Vec<(String, TimeSeries<f64>)> = ONSET_SUPPORTS
        .iter()
        .map(|&t2| {
            TimeSeries::from_fn(ts.clone(), |t| mollified_step(t, t2, ONSET_RAMP))
                .map(|g| (format!("T2={t2}"), g))
        })
        .collect::<Result<_>>()?;
    let report = titchmarsh_demo(&k, &gs, ONSET_FLOOR);
    let mut checks = Vec::new();
    for e in &report.entries {
        checks.push(Check::at_most(
            format!("onset_lag_steps[{}]", e.label),
            e.lag_steps,
            2.0,
        ));
        checks.push(Check::at_least(
            format!("onset_not_early[{}]", e.label),
            e.lag_steps,
            0.0,
        ));
    }
    checks.push(Check::at_least(
        "onset_monotone",
        if report.monotone { 1.0 } else { 0.0 },
        1.0,
    ));
    Ok(SuiteReport::new("titchmarsh", checks, vec![]))
}
