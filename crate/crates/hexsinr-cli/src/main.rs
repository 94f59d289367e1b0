//! Scenario runner for the hexsinr downlink SINR simulator.
//!
//! `hexsinr run <config>` executes the configured scenario matrix and emits
//! per-scenario CDF, quantile and paired-delta CSV files plus a manifest
//! with artifact checksums. `hexsinr compare-fluid <config>` evaluates the
//! closed-form model against the discrete engine on a polar probe grid.
//! Outputs are byte-stable for a fixed config, independent of thread count.

mod config;
mod report;
mod runner;

use clap::{Args, Parser, Subcommand};
use config::CliError;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "hexsinr",
    about = "Downlink SINR scenario runner: Monte-Carlo CDFs and fluid-model comparisons"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// Config file (TOML, or JSON with the same schema)
    config: PathBuf,
    /// Output directory; overrides `out_dir` from the config
    #[arg(long)]
    out: Option<PathBuf>,
    /// Replace every scenario seed with this value
    #[arg(long)]
    seed_override: Option<u64>,
    /// Worker threads (results do not depend on this)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario matrix and emit CDF/quantile/delta tables
    Run(CommonOpts),
    /// Compare the closed-form fluid SINR against the discrete engine
    CompareFluid(CommonOpts),
}

fn set_thread_pool(threads: Option<usize>) -> Result<(), CliError> {
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be positive".to_string()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("cannot size thread pool: {e}")))?;
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let (opts, compare) = match cli.command {
        Command::Run(o) => (o, false),
        Command::CompareFluid(o) => (o, true),
    };
    set_thread_pool(opts.threads)?;
    let (config, raw) = config::load_config(&opts.config)?;
    let out_dir = opts
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(&config.out_dir));
    if compare {
        let path = runner::execute_compare(&config, &raw, &out_dir)?;
        eprintln!("wrote {}", path.display());
    } else {
        let path = runner::execute_run(&config, &raw, &out_dir, opts.seed_override)?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
