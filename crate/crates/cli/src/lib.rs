//! Library side of the `selfsim` command-line tool: problem files, reports
//! and the subcommands.

pub mod commands;
pub mod problem;
pub mod render;
pub mod report;

use thiserror::Error;

use selfsim_core::decide::DecideError;
use selfsim_core::numeric::NumericError;
use selfsim_core::words::WordsError;

pub use commands::{
    cmd_decide, cmd_oracle, cmd_render, cmd_sweep, cmd_theta, cmd_witness, exit_code, sweep_csv,
    DecideOutcome, OracleBranch, OracleReport, SweepParams, SweepRow, ThetaOutcome,
    WitnessOutcome,
};
pub use problem::{Problem, ProblemOptions};
pub use render::RenderOutput;
pub use report::ReportFile;

pub const EXIT_DECIDED: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("field `{path}`: {message}")]
    Field { path: String, message: String },
    #[error(transparent)]
    Decide(#[from] DecideError),
    #[error(transparent)]
    Words(#[from] WordsError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error("{0}")]
    Usage(String),
}
