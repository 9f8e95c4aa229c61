//! `thetafrac`: evaluate kernels, solve the Neumann problem, run the
//! verification suites and time the solvers.
//!
//! Exit codes: 0 success, 1 verification or numerical failure, 2 usage
//! error.

mod bench;
mod eval;
mod manifest;
mod settings;
mod solve;
mod verify_cmd;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use settings::{CliError, GlobalArgs};

#[derive(Debug, Parser)]
#[command(
    name = "thetafrac",
    version,
    about = "Theta-function solver for 1-D time-fractional diffusion"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one special function or kernel and print a JSON record.
    Eval {
        /// One of: wright_m, mittag_leffler, k_alpha, k_alpha_rl, theta,
        /// theta_rl, theta_laplace_closed, theta_rl_laplace_closed,
        /// moment_functional.
        function: String,
        /// Parameters as NAME=VALUE.
        params: Vec<String>,
    },
    /// Solve the Neumann problem on the configured grid and write the field.
    Solve {
        #[arg(long, value_enum, default_value_t = solve::Method::Representation)]
        solver: solve::Method,
        /// Data set: zero, constant, cosine, flux, mixed or late_flux.
        /// Defaults to zero for scenarios A and C and cosine for B.
        #[arg(long)]
        datum: Option<String>,
    },
    /// Run verification suites and write a JSON report.
    Verify {
        /// Suites to run, or `all`.
        #[arg(default_value = "all")]
        suites: Vec<String>,
        /// Re-check the checksums of a manifest written by an earlier run.
        #[arg(long, value_name = "PATH")]
        check_manifest: Option<std::path::PathBuf>,
    },
    /// Time the representation solver against the L1 and spectral oracles.
    Bench {
        /// Time-step counts to run, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "16,32,64")]
        sizes: Vec<usize>,
    },
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let config = settings::resolve(&cli.global)?;
    if let Some(n) = cli.global.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--threads: {e}")))?;
    }
    if cli.global.print_config {
        print!("{}", settings::to_toml(&config)?);
        return Ok(true);
    }
    match cli.command {
        None => Err(CliError::Usage(
            "no subcommand given; see `thetafrac --help`".into(),
        )),
        Some(Command::Eval { function, params }) => eval::run(&function, &params, &config),
        Some(Command::Solve { solver, datum }) => {
            solve::run(solver, datum.as_deref(), &config, &cli.global)
        }
        Some(Command::Verify {
            suites,
            check_manifest,
        }) => verify_cmd::run(&suites, check_manifest.as_deref(), &config, &cli.global),
        Some(Command::Bench { sizes }) => bench::run(&sizes, &config, &cli.global),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("thetafrac: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
