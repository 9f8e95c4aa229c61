//! `eval`: one function value as a JSON record.

use std::collections::BTreeMap;

use serde::Serialize;
use thetafrac::analysis::moment_functional;
use thetafrac::kernel::{
    k_alpha, k_alpha_rl, theta_laplace_closed, theta_rl_laplace_closed, Kernel,
};
use thetafrac::specfun::{mittag_leffler, wright_m, SeriesTolerance};
use thetafrac::{ExperimentConfig, Flavor, FractionalOrder, Profile};

use crate::settings::CliError;

/// Function name, required parameters, optional parameters with defaults.
type Signature = (
    &'static str,
    &'static [&'static str],
    &'static [(&'static str, f64)],
);

const FUNCTIONS: [Signature; 9] = [
    ("wright_m", &["alpha", "z"], &[]),
    ("mittag_leffler", &["alpha", "z"], &[("beta", 1.0)]),
    ("k_alpha", &["alpha", "x", "t"], &[]),
    ("k_alpha_rl", &["alpha", "x", "t"], &[]),
    ("theta", &["alpha", "x", "t"], &[]),
    ("theta_rl", &["alpha", "x", "t"], &[]),
    ("theta_laplace_closed", &["alpha", "x", "s"], &[]),
    ("theta_rl_laplace_closed", &["alpha", "s"], &[]),
    ("moment_functional", &["z"], &[("c", 0.0)]),
];

#[derive(Debug, Serialize)]
struct Record {
    function: String,
    params: BTreeMap<String, f64>,
    value: f64,
    error_estimate: f64,
}

fn usage() -> String {
    let lines: Vec<String> = FUNCTIONS
        .iter()
        .map(|(name, req, opt)| {
            let mut parts: Vec<String> = req.iter().map(|p| format!("{p}=<value>")).collect();
            parts.extend(opt.iter().map(|(p, d)| format!("[{p}={d}]")));
            format!("  {name} {}", parts.join(" "))
        })
        .collect();
    format!(
        "usage: thetafrac eval FUNCTION NAME=VALUE...\n{}",
        lines.join("\n")
    )
}

fn parse_params(function: &str, raw: &[String]) -> Result<BTreeMap<String, f64>, CliError> {
    let (_, required, optional) = FUNCTIONS
        .iter()
        .find(|(name, _, _)| *name == function)
        .ok_or_else(|| CliError::Usage(format!("unknown function `{function}`\n{}", usage())))?;
    let mut params = BTreeMap::new();
    for item in raw {
        let (k, v) = item.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("expected NAME=VALUE, got `{item}`\n{}", usage()))
        })?;
        let known = required.contains(&k) || optional.iter().any(|(o, _)| *o == k);
        if !known {
            return Err(CliError::Usage(format!(
                "`{function}` takes no parameter `{k}`\n{}",
                usage()
            )));
        }
        let v: f64 = v
            .parse()
            .map_err(|_| CliError::Usage(format!("`{k}`: `{v}` is not a number")))?;
        params.insert(k.to_string(), v);
    }
    for r in *required {
        if !params.contains_key(*r) {
            return Err(CliError::Usage(format!(
                "`{function}` needs `{r}`\n{}",
                usage()
            )));
        }
    }
    for (o, d) in *optional {
        params.entry(o.to_string()).or_insert(*d);
    }
    Ok(params)
}

/// Value and error estimate. Series values carry their relative truncation
/// tolerance; image sums add the certified tail bound; closed forms carry
/// a few ulps.
fn evaluate(
    function: &str,
    p: &BTreeMap<String, f64>,
    config: &ExperimentConfig,
) -> Result<(f64, f64), CliError> {
    let tol = SeriesTolerance::default();
    let series = |v: f64| (v, tol.rel_tol * v.abs());
    let closed = |v: f64| (v, 4.0 * f64::EPSILON * v.abs());
    let order = || FractionalOrder::new(p["alpha"]);
    Ok(match function {
        "wright_m" => series(wright_m(p["alpha"], p["z"], &tol)?),
        "mittag_leffler" => series(mittag_leffler(p["alpha"], p["beta"], p["z"], &tol)?),
        "k_alpha" => series(k_alpha(order()?, p["x"], p["t"])?),
        "k_alpha_rl" => series(k_alpha_rl(order()?, p["x"], p["t"])?),
        "theta" | "theta_rl" => {
            let kernel = Kernel::new(order()?, config.truncation())?;
            let flavor = if function == "theta" {
                Flavor::Plain
            } else {
                Flavor::Rl
            };
            let sum = kernel.image_sum(flavor, p["x"], p["t"])?;
            (sum.value, sum.tail_bound + tol.rel_tol * sum.value.abs())
        }
        "theta_laplace_closed" => closed(theta_laplace_closed(order()?, p["x"], p["s"])?),
        "theta_rl_laplace_closed" => closed(theta_rl_laplace_closed(order()?, p["s"])?),
        "moment_functional" => {
            // u0 = (ξ - c)₊; the error is measured against the closed form
            // (e^{Lz} - 1 - Lz)/z² with L = 1 - c
            let (z, c) = (p["z"], p["c"]);
            if !(0.0..1.0).contains(&c) {
                return Err(CliError::Usage(format!("`c` = {c} must lie in [0, 1)")));
            }
            let u0 = Profile::function(move |x: f64| (x - c).max(0.0));
            let value = moment_functional(&u0, z);
            let l = 1.0 - c;
            let exact = if z == 0.0 {
                0.5 * l * l
            } else {
                ((l * z).exp_m1() - l * z) / (z * z)
            };
            (value, (value - exact).abs())
        }
        _ => unreachable!("checked by parse_params"),
    })
}

pub fn run(function: &str, raw: &[String], config: &ExperimentConfig) -> Result<bool, CliError> {
    let params = parse_params(function, raw)?;
    let (value, error_estimate) = evaluate(function, &params, config)?;
    let record = Record {
        function: function.to_string(),
        params,
        value,
        error_estimate,
    };
    print!("{}", thetafrac::io::to_json(&record));
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn value(function: &str, args: &[&str]) -> f64 {
        let raw: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        let p = parse_params(function, &raw).unwrap();
        evaluate(function, &p, &ExperimentConfig::default())
            .unwrap()
            .0
    }

    #[test]
    fn documented_values() {
        assert!((value("wright_m", &["alpha=0.5", "z=0"]) - 0.5641895835).abs() < 1e-10);
        let half_csch = 0.5 / 1f64.sinh();
        assert!(
            (value("theta_rl_laplace_closed", &["alpha=0.5", "s=1"]) - half_csch).abs() < 1e-14
        );
        assert_eq!(
            value("k_alpha", &["alpha=0.5", "x=-0.3", "t=1"]),
            value("k_alpha", &["alpha=0.5", "x=0.3", "t=1"])
        );
    }

    #[test]
    fn parameter_errors_are_usage_errors() {
        let bad = |f: &str, a: &[&str]| {
            let raw: Vec<String> = a.iter().map(|s| s.to_string()).collect();
            matches!(parse_params(f, &raw), Err(CliError::Usage(_)))
        };
        assert!(bad("nope", &[]));
        assert!(bad("wright_m", &["alpha=0.5"]));
        assert!(bad("wright_m", &["alpha=0.5", "z=1", "q=2"]));
        assert!(bad("wright_m", &["alpha=x", "z=1"]));
        assert!(bad("wright_m", &["alpha"]));
    }
}
