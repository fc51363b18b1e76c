//! Scenario runner and acceptance harness built on `abphase-core`.

pub mod acceptance;
pub mod config;
pub mod error;
pub mod ledger;
pub mod output;
pub mod runner;

pub use error::{CliError, Result};
