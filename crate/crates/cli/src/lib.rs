//! Scenario loading, subcommands, exports and verification suites for the
//! `equivol` command-line tool.

pub mod commands;
pub mod corpus;
pub mod document;
pub mod error;
pub mod suites;
pub mod table;

pub use document::{load_scenario, load_scenario_file, NamedScenario, ScenarioDocument};
pub use error::{CliError, Result};
pub use suites::{run_suite, Suite, SuiteConfig, SuiteReport};
pub use table::{Format, Table};
