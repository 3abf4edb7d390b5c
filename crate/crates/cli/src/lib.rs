//! Scans, point reports, limit tables and verification for the `pairsim`
//! pairing-model library.

pub mod config;
mod error;
pub mod measures;
pub mod plot;
pub mod report;
pub mod scan;

pub use config::{Method, ScanConfig};
pub use error::{CliError, Result};
