//! Parameter scans over the `xxz-ness` library, written as CSV or JSON
//! with a manifest per run.

pub mod config;
pub mod grid;
pub mod manifest;
pub mod output;
pub mod scan;
