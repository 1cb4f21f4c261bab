//! `strand-id`: seeded Monte Carlo sweeps, threshold tables, figure data,
//! and exhaustive self-checks for multi-draw read identification.
//!
//! Exit codes: 0 on success, 1 when a bound check or self-check fails,
//! 2 on configuration or I/O errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use strand_id_cli::config::{parse_config, ConfigError, SweepConfig};
use strand_id_cli::{figures, sweep, verify, CliError};

#[derive(Parser)]
#[command(name = "strand-id", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo sweep over the configured grid (writes simulate.csv).
    Simulate(RunArgs),
    /// Closed-form threshold table for the grid (writes thresholds.csv).
    Thresholds(RunArgs),
    /// Exhaustive oracle-scale self-checks (writes verify.csv).
    Verify(RunArgs),
    /// The four standard figure sweeps (writes one CSV per figure).
    Figures(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Flat key=value configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Directory for output CSV files.
    #[arg(long)]
    out: PathBuf,
    /// Root seed; overrides STRAND_ID_SEED and the config's base_seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for trial-level parallelism (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
}

impl Command {
    fn args(&self) -> &RunArgs {
        match self {
            Command::Simulate(a)
            | Command::Thresholds(a)
            | Command::Verify(a)
            | Command::Figures(a) => a,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let args = cli.command.args();
    if let Some(jobs) = args.jobs {
        // Ignore the error if a global pool already exists (e.g. repeated
        // in-process runs); thread count never changes results.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    let cfg = load_config(args)?;
    match &cli.command {
        Command::Simulate(a) => {
            let bounds_ok = sweep::run_simulate(&cfg, &a.out)?;
            println!(
                "wrote {} ({})",
                a.out.join("simulate.csv").display(),
                if bounds_ok { "all bounds hold" } else { "BOUND CHECK FAILED" }
            );
            Ok(bounds_ok)
        }
        Command::Thresholds(a) => {
            sweep::run_thresholds(&cfg, &a.out)?;
            // the table is small; echo it for terminal use
            let path = a.out.join("thresholds.csv");
            let text = fs::read_to_string(&path)
                .map_err(|source| CliError::Io { path: path.clone(), source })?;
            print!("{text}");
            Ok(true)
        }
        Command::Verify(a) => verify::run_verify(&a.out),
        Command::Figures(a) => {
            figures::run_figures(&cfg, &a.out)?;
            println!("wrote 4 figure tables to {}", a.out.display());
            Ok(true)
        }
    }
}

fn load_config(args: &RunArgs) -> Result<SweepConfig, CliError> {
    let text = fs::read_to_string(&args.config)
        .map_err(|source| CliError::Io { path: args.config.clone(), source })?;
    let mut cfg = parse_config(&text)?;
    if let Some(seed) = args.seed {
        cfg.base_seed = seed;
    } else if let Ok(text) = std::env::var("STRAND_ID_SEED") {
        cfg.base_seed = text.trim().parse().map_err(|_| {
            CliError::Config(ConfigError::Invalid(format!(
                "STRAND_ID_SEED must be an unsigned integer, got {text:?}"
            )))
        })?;
    }
    Ok(cfg)
}
