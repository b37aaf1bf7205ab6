// SPDX-License-Identifier: Apache-2.0

//! Scenario files for the shutter-logic simulator: parsing, execution in
//! exact or sampled mode, and report output.

pub mod parse;
pub mod report;
pub mod runner;
pub mod scenario;

pub use parse::{parse_scenario, Diagnostic, DiagnosticKind};
pub use report::{
    emit_report, emit_sweep, BranchRow, ChiSquare, ExpectationResult, Format, RunReport,
};
pub use runner::{run_scenario, Mode, RunError, RunOptions};
pub use scenario::Scenario;

/// Environment variable naming the default report directory.
pub const OUT_DIR_ENV: &str = "SHUTTERLOGIC_OUT_DIR";
