//! Batch front end for overlay robustness experiments: manifest parsing,
//! preset grids, and machine-readable result tables.

pub mod manifest;
pub mod output;

pub use manifest::{parse_manifest, ManifestDefaults, OutputFormat, RunManifest};
pub use output::SummaryRecord;
