//! Trajectory and summary serialization.
//!
//! CSV values use Rust's shortest round-trip float formatting, so re-parsing
//! a file recovers every value exactly and repeated runs of the same
//! scenario produce byte-identical output. Files are written to a temporary
//! sibling and renamed into place, so a failed write never leaves a partial
//! file behind.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use afsmc_core::plants::StateVec;
use afsmc_core::sim::{Metrics, TrajectoryLog, TrajectoryRow};

use crate::scenario::ControllerKind;
use crate::{CliError, CliResult};

/// Column order of a trajectory CSV.
pub const CSV_HEADER: &str = "t,x1,x2,x3,x4,u,s1,s2,z,theta_f_norm,theta_g_norm,d";

/// Column order of the metrics summary.
pub const SUMMARY_HEADER: &str =
    "scenario,controller,settle_time,ise_x1,ise_x3,peak_dev_x1,peak_dev_x3,max_abs_u,rms_u";

fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let tmp = path.with_extension("tmp");
    let io_err = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    fs::write(&tmp, contents).map_err(io_err)?;
    fs::rename(&tmp, path).map_err(io_err)
}

/// Writes a trajectory log as CSV. The log must be non-empty.
pub fn emit_csv(log: &TrajectoryLog, path: &Path) -> CliResult<()> {
    if log.is_empty() {
        return Err(CliError::Io(format!(
            "{}: refusing to write an empty trajectory",
            path.display()
        )));
    }
    let mut text = String::with_capacity(64 * (log.len() + 1));
    text.push_str(CSV_HEADER);
    text.push('\n');
    for row in log.rows() {
        let x = row.state.as_array();
        writeln!(
            text,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            row.t,
            x[0],
            x[1],
            x[2],
            x[3],
            row.u,
            row.s1,
            row.s2,
            row.z,
            row.theta_f_norm,
            row.theta_g_norm,
            row.disturbance
        )
        .expect("string write cannot fail");
    }
    write_atomic(path, &text)
}

/// Reads a trajectory CSV produced by [`emit_csv`]; values round-trip
/// exactly.
pub fn read_csv(path: &Path) -> CliResult<TrajectoryLog> {
    let io_err = |msg: String| CliError::Io(format!("{}: {msg}", path.display()));
    let text = fs::read_to_string(path).map_err(|e| io_err(e.to_string()))?;
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == CSV_HEADER => {}
        other => {
            return Err(io_err(format!(
                "unexpected header {:?}",
                other.unwrap_or_default()
            )))
        }
    }
    let mut log = TrajectoryLog::default();
    for (i, line) in lines.enumerate() {
        let fields: Vec<f64> = line
            .split(',')
            .map(|f| f.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| io_err(format!("row {}: {e}", i + 2)))?;
        if fields.len() != 12 {
            return Err(io_err(format!(
                "row {}: expected 12 fields, got {}",
                i + 2,
                fields.len()
            )));
        }
        log.push(TrajectoryRow {
            t: fields[0],
            state: StateVec::new([fields[1], fields[2], fields[3], fields[4]]),
            u: fields[5],
            s1: fields[6],
            s2: fields[7],
            z: fields[8],
            theta_f_norm: fields[9],
            theta_g_norm: fields[10],
            disturbance: fields[11],
        });
    }
    Ok(log)
}

/// One line of the metrics summary.
#[derive(Debug, Clone)]
pub struct SummaryRow {
    pub scenario: String,
    pub controller: ControllerKind,
    pub metrics: Metrics,
}

/// Writes the summary table (one row per scenario/controller pair, in the
/// order given).
pub fn emit_summary(rows: &[SummaryRow], path: &Path) -> CliResult<()> {
    let mut text = String::new();
    text.push_str(SUMMARY_HEADER);
    text.push('\n');
    for row in rows {
        let m = &row.metrics;
        writeln!(
            text,
            "{},{},{},{},{},{},{},{},{}",
            row.scenario,
            row.controller.as_str(),
            m.settle_time,
            m.ise[0],
            m.ise[1],
            m.peak_deviation[0],
            m.peak_deviation[1],
            m.max_abs_u,
            m.rms_u
        )
        .expect("string write cannot fail");
    }
    write_atomic(path, &text)
}
