//! Declarative scenario runner for `fermidark`.
//!
//! A scenario is a JSON document naming one of five kinds (verify-dark,
//! enumerate-dark, raman-drive, ramsey, greens-table) plus the blocks it
//! needs. [`run::run_scenario`] computes everything in memory and
//! [`output::write_outputs`] writes CSV tables, a report and a manifest.

pub mod config;
pub mod output;
pub mod presets;
pub mod run;

pub use config::Scenario;
pub use output::write_outputs;
pub use presets::preset;
pub use run::{run_scenario, Outcome};
