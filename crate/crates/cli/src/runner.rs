//! Scenario execution: one closed-loop run per (scenario, controller) pair,
//! a trajectory CSV per run, and a single metrics summary written after all
//! runs complete. Scenarios run in parallel up to a job limit; runs never
//! share mutable state.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use afsmc_core::sim::{compute_metrics, run_closed_loop, Metrics, TrajectoryLog};
use afsmc_core::Error as CoreError;

use crate::output::{emit_csv, emit_summary, SummaryRow};
use crate::scenario::{ControllerKind, Scenario};
use crate::{CliError, CliResult};

/// Result of one (scenario, controller) run.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub scenario: String,
    pub controller: ControllerKind,
    pub metrics: Metrics,
    pub csv_path: PathBuf,
}

fn simulation_error(scenario: &str, controller: ControllerKind, e: CoreError) -> CliError {
    match e {
        CoreError::Divergence { .. } | CoreError::DegenerateActivation => CliError::Simulation(
            format!("scenario '{scenario}' ({}): {e}", controller.as_str()),
        ),
        other => CliError::Validation(format!(
            "scenario '{scenario}' ({}): {other}",
            controller.as_str()
        )),
    }
}

/// Runs one controller of a scenario and returns its log.
pub fn run_one(scenario: &Scenario, controller: ControllerKind) -> CliResult<TrajectoryLog> {
    let ctrl = scenario.build_controller(controller)?;
    run_closed_loop(
        &scenario.plant,
        ctrl,
        &scenario.controller_params,
        &scenario.sim,
    )
    .map_err(|e| simulation_error(&scenario.name, controller, e))
}

/// Runs every controller of a scenario, writing one CSV per run into
/// `out_dir`.
pub fn run_scenario(scenario: &Scenario, out_dir: &Path) -> CliResult<Vec<RunOutcome>> {
    let mut outcomes = Vec::with_capacity(scenario.controllers.len());
    for &controller in &scenario.controllers {
        let log = run_one(scenario, controller)?;
        let metrics = compute_metrics(&log, &scenario.output_specs(), scenario.metrics_window)
            .map_err(|e| simulation_error(&scenario.name, controller, e))?;
        let csv_path = out_dir.join(format!("{}_{}.csv", scenario.name, controller.as_str()));
        emit_csv(&log, &csv_path)?;
        outcomes.push(RunOutcome {
            scenario: scenario.name.clone(),
            controller,
            metrics,
            csv_path,
        });
    }
    Ok(outcomes)
}

/// Runs scenarios (optionally filtered by name) with up to `jobs` in
/// parallel, then writes `summary.csv`. Outcomes keep the config file's
/// scenario order regardless of completion order.
pub fn run_all(
    scenarios: &[Scenario],
    out_dir: &Path,
    jobs: usize,
    filter: &[String],
) -> CliResult<Vec<RunOutcome>> {
    let selected: Vec<&Scenario> = if filter.is_empty() {
        scenarios.iter().collect()
    } else {
        for name in filter {
            if !scenarios.iter().any(|s| &s.name == name) {
                return Err(CliError::Validation(format!(
                    "scenario '{name}' is not defined in the config"
                )));
            }
        }
        scenarios
            .iter()
            .filter(|s| filter.contains(&s.name))
            .collect()
    };

    fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Io(format!("{}: {e}", out_dir.display())))?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Io(format!("thread pool: {e}")))?;

    let results: Vec<CliResult<Vec<RunOutcome>>> =
        pool.install(|| selected.par_iter().map(|s| run_scenario(s, out_dir)).collect());

    let mut outcomes = Vec::new();
    for result in results {
        outcomes.extend(result?);
    }

    let summary_rows: Vec<SummaryRow> = outcomes
        .iter()
        .map(|o| SummaryRow {
            scenario: o.scenario.clone(),
            controller: o.controller,
            metrics: o.metrics.clone(),
        })
        .collect();
    emit_summary(&summary_rows, &out_dir.join("summary.csv"))?;

    Ok(outcomes)
}
