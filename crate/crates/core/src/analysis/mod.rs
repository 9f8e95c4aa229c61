//! Numerical exercises of the uniqueness argument: Laplace identities,
//! decay of the transformed terms, kernel and trace bounds, and the
//! unique-continuation scenarios.

pub mod bounds;
pub mod decay;
pub mod laplace;
pub mod ucp;

pub use bounds::{kernel_bound_suite, trace_growth};
pub use decay::{
    cauchy_residual, decay_bounds_check, decay_identity_check, decay_terms, laplace_identity_check,
    laplace_of_extension, DecayTerms,
};
pub use laplace::{
    laplace_piecewise_linear, ln_moment_functional, log_space, moment_functional, numeric_laplace,
    numeric_laplace_from, reflected_moment, LaplaceProbe, LaplaceValue,
};
pub use ucp::{
    mollified_step, restrict_to_pieces, titchmarsh_demo, ucp_experiment, ExperimentReport,
    ScenarioRun, TitchmarshReport,
};

use crate::error::Result;
use crate::grid::{Profile, TimeSeries};
use crate::report::{BoundReport, Sample};
use crate::solver::CauchyData;

/// Named data sets used across the verification suites, for horizon `T`:
/// zero, constant, cosine, a flux-only datum, a mixed datum and a late
/// flux pulse whose left trace is nearly zero on `(0, T)`.
pub fn standard_data(horizon: f64) -> Result<Vec<(String, CauchyData<f64>)>> {
    use std::f64::consts::PI;
    let n = (64.0 * horizon).round().max(1.0) as usize;
    let t = horizon;
    Ok(vec![
        ("zero".into(), CauchyData::zero(t)?),
        (
            "constant".into(),
            CauchyData::with_flux_fn(Profile::constant(1.0), |_| 0.0, t, 1)?,
        ),
        (
            "cosine".into(),
            CauchyData::with_flux_fn(Profile::function(|x: f64| (PI * x).cos()), |_| 0.0, t, 1)?,
        ),
        (
            "flux".into(),
            CauchyData::with_flux_fn(
                Profile::zero(),
                move |s: f64| 4.0 * s * (t - s) / (t * t),
                t,
                n,
            )?,
        ),
        (
            "mixed".into(),
            CauchyData::with_flux_fn(
                Profile::function(|x: f64| 0.5 + x * x * (1.0 - x)),
                move |s: f64| (PI * s / t).sin(),
                t,
                n,
            )?,
        ),
        ("late_flux".into(), late_flux(t, 0.25 * t)?),
    ])
}

/// `u0 = 0` and a smooth flux pulse on `[T - width, T]`; by flatness of
/// the boundary kernel the left trace is negligible well before the pulse.
pub fn late_flux(horizon: f64, width: f64) -> Result<CauchyData<f64>> {
    let start = horizon - width;
    CauchyData::with_flux_fn(
        Profile::zero(),
        move |s: f64| {
            if s <= start {
                0.0
            } else {
                let r = (s - start) / width;
                (std::f64::consts::PI * r).sin().powi(2)
            }
        },
        horizon,
        (64.0 * horizon).round().max(1.0) as usize,
    )
}

/// Moment-functional growth rate: least-squares slope of `ln|F(z)|`
/// against `z`, checked against `1 - c + slack` for `u0` vanishing on
/// `[0, c)`.
pub fn moment_rate_check(u0: &Profile<f64>, c: f64, zs: &[f64], slack: f64) -> BoundReport {
    let pts: Vec<(f64, f64)> = zs
        .iter()
        .map(|&z| (z, ln_moment_functional(u0, z)))
        .filter(|(_, (_, sg))| *sg != 0.0)
        .map(|(z, (l, _))| (z, l))
        .collect();
    let n = pts.len() as f64;
    let rate = if pts.len() >= 2 {
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        sxy / sxx
    } else {
        f64::NEG_INFINITY
    };
    let limit = 1.0 - c + slack;
    let mut report = crate::report::explicit(
        "moment_rate",
        &[Sample {
            param: c,
            value: rate.max(0.0),
            envelope: limit,
        }],
    );
    report.fitted_constants.insert("rate".into(), rate);
    report.train_range = (zs[0], *zs.last().unwrap());
    report.validation_range = report.train_range;
    report
}

/// `ũ(0,·)` restricted to `[0, T]` of a time series.
pub fn on_horizon(trace: &TimeSeries<f64>, horizon: f64) -> TimeSeries<f64> {
    trace.window(0.0, horizon)
}
