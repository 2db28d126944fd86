//! Scenario configs, suite runner and reports for the `relconv` binary.

pub mod config;
pub mod report;
pub mod suites;

pub use config::{ConfigError, ScenarioConfig, Suite};
pub use report::{RunReport, CSV_COLUMNS, CSV_HEADER_COMMENT};
pub use suites::{run_scenario, sweep, RunOptions};
