//! Declarative experiment configuration shared by the analysis drivers and
//! the command-line tool.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grid::SpaceTimeGrid;
use crate::kernel::{FractionalOrder, ThetaTruncation};
use crate::solver::SolverOptions;

/// Scenarios understood by the unique-continuation experiment.
pub const SCENARIOS: [&str; 3] = ["A", "B", "C"];

/// Tolerance names accepted in [`ExperimentConfig::tolerances`], with
/// defaults.
pub const TOLERANCE_DEFAULTS: [(&str, f64); 7] = [
    ("theta_abs", 1e-14),
    ("w_tol", 1e-10),
    ("v_abs_tol", 1e-14),
    ("v_rel_tol", 1e-11),
    ("laplace_rel", 1e-6),
    ("identity_rel", 1e-4),
    ("zero_factor", 10.0),
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub nx: usize,
    pub nt: usize,
    pub t_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub alpha: f64,
    /// Horizon `T` of the Cauchy data.
    #[serde(rename = "T")]
    pub horizon: f64,
    pub grid: GridConfig,
    pub scenario: String,
    pub tolerances: BTreeMap<String, f64>,
    pub output_dir: String,
    /// Seeds the random choices of test data in the verification suites.
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            horizon: 1.0,
            grid: GridConfig {
                nx: 21,
                nt: 160,
                t_max: 10.0,
            },
            scenario: "A".to_string(),
            tolerances: TOLERANCE_DEFAULTS
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
            output_dir: "out".to_string(),
            seed: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        FractionalOrder::new(self.alpha)?;
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(invalid("T", self.horizon, "horizon must be positive"));
        }
        let grid = self.space_time_grid()?;
        if grid.t_max < self.horizon {
            return Err(invalid("grid.t_max", grid.t_max, "must be at least T"));
        }
        if !SCENARIOS.contains(&self.scenario.as_str()) {
            return Err(Error::ScenarioUnknown(self.scenario.clone()));
        }
        for (name, value) in &self.tolerances {
            if !TOLERANCE_DEFAULTS.iter().any(|(k, _)| k == name) {
                return Err(invalid("tolerances", *value, "unknown tolerance name"));
            }
            if !(*value > 0.0 && value.is_finite()) {
                return Err(invalid("tolerances", *value, "tolerances must be positive"));
            }
        }
        Ok(())
    }

    /// Named tolerance, falling back to its default.
    pub fn tol(&self, name: &str) -> f64 {
        self.tolerances.get(name).copied().unwrap_or_else(|| {
            TOLERANCE_DEFAULTS
                .iter()
                .find(|(k, _)| *k == name)
                .map(|(_, v)| *v)
                .unwrap_or_else(|| panic!("no default for tolerance `{name}`"))
        })
    }

    pub fn order(&self) -> Result<FractionalOrder<f64>> {
        FractionalOrder::new(self.alpha)
    }

    pub fn space_time_grid(&self) -> Result<SpaceTimeGrid<f64>> {
        SpaceTimeGrid::new(self.grid.nx, self.grid.nt, self.grid.t_max)
    }

    pub fn truncation(&self) -> ThetaTruncation<f64> {
        ThetaTruncation {
            abs_tol: self.tol("theta_abs"),
            ..ThetaTruncation::default()
        }
    }

    pub fn solver_options(&self) -> SolverOptions<f64> {
        SolverOptions {
            w_tol: self.tol("w_tol"),
            v_abs_tol: self.tol("v_abs_tol"),
            v_rel_tol: self.tol("v_rel_tol"),
            ..SolverOptions::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        let c = ExperimentConfig::default();
        c.validate().unwrap();
        assert_eq!(c.tol("identity_rel"), 1e-4);
    }

    #[test]
    fn bad_values_are_rejected() {
        let c = ExperimentConfig {
            scenario: "Z".into(),
            ..ExperimentConfig::default()
        };
        assert!(matches!(c.validate(), Err(Error::ScenarioUnknown(_))));
        let mut c = ExperimentConfig::default();
        c.tolerances.insert("w_tol".into(), -1.0);
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::default();
        c.tolerances.insert("bogus".into(), 1.0);
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::default();
        c.grid.t_max = 0.5;
        assert!(c.validate().is_err());
    }
}
