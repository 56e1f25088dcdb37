//! Command-line driver: builds polynomials, runs both sides of the
//! comparison, caches Ext tables and writes JSON reports.

pub mod cache;
pub mod cli;
pub mod error;
pub mod pipeline;

pub use error::{CliError, Result};
