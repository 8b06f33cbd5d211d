//! Command-line front end for the p-filter: run a procedure on p-value and
//! layer files, run the simulation designs, or cross-check the fixed point
//! against the exhaustive oracle.

pub mod commands;
pub mod error;
pub mod io;
pub mod report;

pub use commands::{
    cmd_oracle_check, cmd_run, cmd_simulate, oracle_check_with, run_report, simulate_to,
    OracleOptions, RunMethod, RunOptions, SimulateOptions, SIMULATE_HEADER,
};
pub use error::{CliError, Result};
pub use report::{PfilterReport, RunReport};
