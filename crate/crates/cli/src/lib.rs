//! Orchestration behind the `gw` binary: output rendering and the resumable,
//! parallel prime scan.

pub mod render;
pub mod scan;

pub use render::{render_records, render_rows, render_value, OutputFormat};
pub use scan::{run_scan, ScanCheckpoint, ScanError, ScanOptions, ScanOutcome, ScanParams};
