//! Config-driven sweeps over the quantum-switch models, written as CSV.

pub mod config;
pub mod csv;
pub mod error;
pub mod presets;
pub mod scenarios;

pub use config::{ConfigError, Scenario, ScenarioConfig};
pub use error::CliError;
pub use scenarios::{run, Run};
