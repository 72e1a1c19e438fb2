// SPDX-License-Identifier: Apache-2.0

//! Experiment harness: configuration, trial runner, commands and reports.

pub mod commands;
pub mod config;
pub mod report;
pub mod setup;
pub mod trials;

pub use config::{ConfigError, ExperimentConfig, SchemeKind};
pub use report::Report;
pub use setup::Setup;
