use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use afsmc_cli::runner::run_all;
use afsmc_cli::scenario::parse_config;
use afsmc_cli::{CliError, CliResult};

/// Closed-loop control experiments on underactuated benchmarks.
#[derive(Parser)]
#[command(name = "afsmc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run scenarios and write trajectory CSVs plus a metrics summary.
    Run {
        /// Scenario config file (TOML).
        #[arg(long)]
        config: PathBuf,
        /// Output directory for CSV files.
        #[arg(long)]
        out: PathBuf,
        /// Maximum scenarios running in parallel.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Run only the named scenario(s); repeatable.
        #[arg(long = "scenario")]
        scenarios: Vec<String>,
    },
    /// Parse and validate a config file without running anything.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// List the scenarios a config file defines.
    List {
        #[arg(long)]
        config: PathBuf,
    },
}

fn load_config(path: &PathBuf) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn execute(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Run {
            config,
            out,
            jobs,
            scenarios,
        } => {
            let scenario_list = parse_config(&load_config(&config)?)?;
            let outcomes = run_all(&scenario_list, &out, jobs, &scenarios)?;
            for outcome in &outcomes {
                let m = &outcome.metrics;
                println!(
                    "{} [{}]: settle_time = {}, max|u| = {:.4}, wrote {}",
                    outcome.scenario,
                    outcome.controller.as_str(),
                    m.settle_time,
                    m.max_abs_u,
                    outcome.csv_path.display()
                );
            }
            println!("summary: {}", out.join("summary.csv").display());
            Ok(())
        }
        Command::Validate { config } => {
            let scenario_list = parse_config(&load_config(&config)?)?;
            println!("ok: {} scenario(s) valid", scenario_list.len());
            Ok(())
        }
        Command::List { config } => {
            let scenario_list = parse_config(&load_config(&config)?)?;
            for s in &scenario_list {
                let kind = match s.plant.model {
                    afsmc_core::plants::PlantModel::Pendulum(_) => "pendulum",
                    afsmc_core::plants::PlantModel::Tora(_) => "tora",
                };
                let controllers: Vec<&str> =
                    s.controllers.iter().map(|c| c.as_str()).collect();
                println!(
                    "{}  plant={}  controllers={}  t_end={}s",
                    s.name,
                    kind,
                    controllers.join("+"),
                    s.sim.t_end
                );
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
