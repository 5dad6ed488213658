//! Stage pipeline for the F_e(3,3;4) ≥ 20 search: named stages with JSON
//! manifests, dataset ingestion, statistics tables and single-graph queries.

pub mod commands;
pub mod error;
pub mod expect;
pub mod filter;
pub mod io;
pub mod manifest;
pub mod stages;
pub mod stats;

pub use error::{CliResult, Failure};
