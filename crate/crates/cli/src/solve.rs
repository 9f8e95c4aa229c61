//! `solve`: one field on the configured grid, by the representation
//! formula or one of the oracles.

use std::path::Path;

use clap::ValueEnum;
use thetafrac::analysis::standard_data;
use thetafrac::io::{to_json, write_field_csv, FieldDocument};
use thetafrac::oracle::{cosine_coefficients, l1_solve, spectral_solve, L1Config};
use thetafrac::{CauchyData, ExperimentConfig, Provenance, SolutionField, Solver, SpaceTimeGrid};

use crate::manifest::OutputDir;
use crate::settings::{CliError, GlobalArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Representation,
    L1,
    Spectral,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Representation => "representation",
            Method::L1 => "l1",
            Method::Spectral => "spectral",
        }
    }
}

/// Cosine modes used by the spectral oracle.
const SPECTRAL_MODES: usize = 32;

/// L1 grid refining the output grid to at least 201 × 2048 nodes.
pub fn l1_config_for(grid: &SpaceTimeGrid) -> L1Config {
    let sx = 200usize.div_ceil(grid.nx - 1);
    let st = 2048usize.div_ceil(grid.nt);
    L1Config {
        nx_fd: (grid.nx - 1) * sx + 1,
        nt_fd: grid.nt * st,
        ..L1Config::default()
    }
}

pub fn datum(
    name: Option<&str>,
    config: &ExperimentConfig,
) -> Result<(String, CauchyData), CliError> {
    let name = name.unwrap_or(if config.scenario == "B" {
        "cosine"
    } else {
        "zero"
    });
    standard_data(config.horizon)?
        .into_iter()
        .find(|(n, _)| n == name)
        .ok_or_else(|| {
            CliError::Usage(format!(
                "unknown datum `{name}`; expected zero, constant, cosine, flux, mixed or late_flux"
            ))
        })
}

fn field_csv(field: &SolutionField) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    write_field_csv(field, &mut buf)?;
    Ok(buf)
}

pub fn run(
    method: Method,
    datum_name: Option<&str>,
    config: &ExperimentConfig,
    args: &GlobalArgs,
) -> Result<bool, CliError> {
    let (name, data) = datum(datum_name, config)?;
    let order = config.order()?;
    let grid = config.space_time_grid()?;
    let mut out = OutputDir::create(Path::new(&config.output_dir))?;
    let field = match method {
        Method::Representation => {
            let solver = Solver::new(order, config.truncation(), config.solver_options())?;
            let sol = solver.solve_ibvp(&data, &grid)?;
            if args.dump_intermediates {
                let w = solver.solve_w(&data.u0, &grid)?;
                let v = solver.solve_v(&data.extension(), &grid)?;
                for (label, c) in [("w", w), ("v", v)] {
                    let f = SolutionField::new(
                        c.values,
                        grid,
                        Provenance::Representation,
                        c.error_estimate,
                    )?;
                    out.write(&format!("contribution_{label}.csv"), &field_csv(&f)?)?;
                }
                let tr = &sol.traces;
                let mut text = String::from("t,left,right,left_flux\n");
                for k in 0..tr.left.len() {
                    text.push_str(&format!(
                        "{},{},{},{}\n",
                        tr.left.t[k], tr.left.values[k], tr.right.values[k], tr.left_flux.values[k]
                    ));
                }
                out.write("traces.csv", text.as_bytes())?;
            }
            sol.field
        }
        Method::L1 => l1_solve(&data, None, order, &l1_config_for(&grid), &grid)?,
        Method::Spectral => {
            if data.g.values.iter().any(|v| *v != 0.0) {
                return Err(CliError::Usage(format!(
                    "the spectral oracle needs zero flux; datum `{name}` has g ≠ 0"
                )));
            }
            let coeffs = cosine_coefficients(&data.u0, SPECTRAL_MODES, 8 * SPECTRAL_MODES);
            spectral_solve(&coeffs, order, &grid)?
        }
    };
    let stem = format!("field_{}", method.name());
    out.write(&format!("{stem}.csv"), &field_csv(&field)?)?;
    out.write(
        &format!("{stem}.json"),
        to_json(&FieldDocument::new(&field)).as_bytes(),
    )?;
    let manifest = out.finish(&format!("solve --solver {}", method.name()), config)?;
    println!(
        "{} solve of `{name}` on {}x{} grid: sup norm {:.6e}, error estimate {:.3e}",
        method.name(),
        grid.nx,
        grid.nt,
        field.sup_norm(),
        field.error_estimate
    );
    println!("manifest: {}", manifest.display());
    Ok(true)
}
