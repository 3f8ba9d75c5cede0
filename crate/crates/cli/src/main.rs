//! Command-line front end: run configured experiments against the polynomial
//! core and emit CSV tables plus a plain-text verification report.
//!
//! Exit codes: 0 success, 2 usage or configuration error, 3 numerical
//! failure. `SOBOLEV_MH_THREADS` caps internal parallelism (0 or unset picks
//! the automatic default).

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::CliError;

#[derive(Parser)]
#[command(name = "sobolev-mh", version, about = "discrete Sobolev orthogonal polynomial experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Experiment configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the config's output_dir).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Build the Sobolev family; writes q_coeffs.csv and
    /// orthonormality_residual.csv.
    Build(RunArgs),
    /// Connection coefficients; writes lambda_table.csv.
    Lambda(RunArgs),
    /// Scaled-evaluation convergence tables; writes mh_error.csv and a
    /// profile at the largest degree.
    Mh(RunArgs),
    /// Scaled zero tables; writes zeros_scaled.csv.
    Zeros(RunArgs),
    /// Run the property checks and report pass/fail per check.
    Verify(RunArgs),
}

fn init_thread_pool() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("SOBOLEV_MH_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .parse()
        .map_err(|_| CliError::Config(format!("SOBOLEV_MH_THREADS must be an integer, got {raw:?}")))?;
    if threads == 0 {
        return Ok(()); // automatic
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_thread_pool()?;
    let args = match &cli.command {
        Command::Build(a) | Command::Lambda(a) | Command::Mh(a) | Command::Zeros(a)
        | Command::Verify(a) => a,
    };
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", args.config.display())))?;
    let cfg = config::parse_config(&text)?;
    let out = args.out.clone().unwrap_or_else(|| cfg.output_dir.clone());

    match cli.command {
        Command::Build(_) => commands::cmd_build(&cfg, &out),
        Command::Lambda(_) => commands::cmd_lambda(&cfg, &out),
        Command::Mh(_) => commands::cmd_mh(&cfg, &out),
        Command::Zeros(_) => commands::cmd_zeros(&cfg, &out),
        Command::Verify(_) => commands::cmd_verify(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("sobolev-mh: {}", err.message());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
