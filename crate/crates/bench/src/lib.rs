//! Benchmark harness: loads an edge list, runs detection algorithms, scores
//! them and writes tables and figures.

pub mod cli;
pub mod config;
pub mod error;
pub mod format;
pub mod pipeline;
pub mod report;
pub mod svg;

pub use config::{Formats, RunConfig};
pub use error::{BenchError, BenchResult};
pub use pipeline::{cmd_analyze, cmd_compare, cmd_detect};
