//! `verify`: run suites, write the JSON report, report pass or fail through
//! the exit code.

use std::path::Path;

use thetafrac::verify::{self, Check, SuiteReport, Sweep};
use thetafrac::ExperimentConfig;

use crate::manifest::{self, OutputDir};
use crate::settings::{CliError, GlobalArgs};

pub const REPORT_NAME: &str = "verify_report.json";

/// Suites sweep the default orders and scenarios unless `--alpha` or
/// `--scenario` pins them.
fn sweep(config: &ExperimentConfig, args: &GlobalArgs) -> Sweep {
    let mut sweep = Sweep::default();
    if args.alpha.is_some() {
        sweep.orders = vec![config.alpha];
    }
    if args.scenario.is_some() {
        sweep.scenarios = vec![config.scenario.clone()];
    }
    sweep
}

pub fn run(
    suites: &[String],
    check_manifest: Option<&Path>,
    config: &ExperimentConfig,
    args: &GlobalArgs,
) -> Result<bool, CliError> {
    let names: Vec<&str> = suites.iter().map(String::as_str).collect();
    let mut report = verify::run(&names, config, &sweep(config, args))?;
    if let Some(path) = check_manifest {
        let checks: Vec<Check> = manifest::check(path)?
            .into_iter()
            .map(|(file, ok)| {
                Check::at_least(format!("checksum[{file}]"), f64::from(u8::from(ok)), 1.0)
            })
            .collect();
        let pass = checks.iter().all(|c| c.pass);
        report.suites.push(SuiteReport {
            suite: "manifest".into(),
            pass,
            checks,
            bounds: vec![],
        });
        report.pass &= pass;
    }
    for s in &report.suites {
        let passed = s.checks.iter().filter(|c| c.pass).count();
        println!(
            "{:<10} {} ({passed}/{} checks)",
            s.suite,
            if s.pass { "PASS" } else { "FAIL" },
            s.checks.len()
        );
        for c in s.checks.iter().filter(|c| !c.pass) {
            println!(
                "    failed {}: {:e} vs limit {:e}",
                c.id, c.measured, c.limit
            );
        }
    }
    let mut out = OutputDir::create(Path::new(&config.output_dir))?;
    let path = out.write(REPORT_NAME, thetafrac::io::to_json(&report).as_bytes())?;
    out.finish(&format!("verify {}", names.join(" ")), config)?;
    println!("report: {}", path.display());
    Ok(report.pass)
}
