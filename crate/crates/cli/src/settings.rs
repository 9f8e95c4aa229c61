//! Global flags, configuration loading and error classification.

use std::fmt;
use std::path::PathBuf;

use clap::Args;
use thetafrac::{Error, ExperimentConfig};

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// TOML configuration file; missing keys take their defaults.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Fractional order in (0, 1).
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Unique-continuation scenario: A, B or C.
    #[arg(long, global = true)]
    pub scenario: Option<String>,
    /// Output directory (overrides `output_dir`).
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Also write intermediate arrays (contributions, traces).
    #[arg(long, global = true)]
    pub dump_intermediates: bool,
    /// Override a tolerance, NAME=VALUE; repeatable.
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    pub tol: Vec<String>,
    /// Worker threads for the parallel loops.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    /// Print the resolved configuration as TOML and exit.
    #[arg(long, global = true)]
    pub print_config: bool,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, configuration or parameters: exit code 2.
    Usage(String),
    /// A numerical routine or the file system failed: exit code 1.
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Failure(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. } | Error::ScenarioUnknown(_) | Error::SuiteUnknown(_) => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Failure(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

/// Defaults, then the config file, then command-line overrides.
pub fn resolve(args: &GlobalArgs) -> Result<ExperimentConfig, CliError> {
    let mut config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            toml::from_str::<ExperimentConfig>(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(a) = args.alpha {
        config.alpha = a;
    }
    if let Some(s) = &args.scenario {
        config.scenario = s.clone();
    }
    if let Some(out) = &args.out {
        config.output_dir = out.to_string_lossy().into_owned();
    }
    for item in &args.tol {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--tol expects NAME=VALUE, got `{item}`")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("--tol {name}: `{value}` is not a number")))?;
        config.tolerances.insert(name.trim().to_string(), value);
    }
    config.validate()?;
    Ok(config)
}

pub fn to_toml(config: &ExperimentConfig) -> Result<String, CliError> {
    toml::to_string(config).map_err(|e| CliError::Failure(e.to_string()))
}
