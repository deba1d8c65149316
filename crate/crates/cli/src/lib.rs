//! Scenario files, reports and the command-line front end for
//! [`cheshire_core`].
//!
//! Scenario files are parsed by [`scenario_file::parse_scenario`] and written
//! back by [`scenario_file::serialize_scenario`]. The `cmd_*` functions in
//! [`commands`] build a [`report::Report`], which renders as a text table,
//! CSV or JSON (schema in `schema/report.schema.json`).

pub mod commands;
pub mod error;
pub mod expr;
pub mod report;
pub mod scenario_file;

pub use commands::{cmd_montecarlo, cmd_pointer_sweep, cmd_table, cmd_validate, load_scenario};
pub use error::CliError;
pub use report::{Format, Report};
pub use scenario_file::{parse_scenario, serialize_scenario, ParseError};
