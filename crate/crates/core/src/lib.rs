//! Community detection toolkit.
//!
//! The numeric core is generic over the floating point type through
//! [`Scalar`]; the aliases below pin the common `f64` and `f32` instantiations.

pub mod detect;
pub mod eigen;
pub mod embed;
pub mod error;
pub mod graph;
pub mod kmeans;
pub mod metrics;
pub mod network;
pub mod partition;
pub mod scalar;

pub use error::{Error, Result};
pub use partition::Partition;
pub use scalar::Scalar;

pub type Graph64 = graph::Graph<f64>;
pub type Graph32 = graph::Graph<f32>;
pub type Embedding64 = embed::Embedding<f64>;
pub type Embedding32 = embed::Embedding<f32>;
pub type EigenResult64 = eigen::EigenResult<f64>;
pub type KMeansResult64 = kmeans::KMeansResult<f64>;
pub type DetectParams64 = detect::DetectParams<f64>;
pub type DetectOutcome64 = detect::DetectOutcome<f64>;
pub type MetricReport64 = metrics::MetricReport<f64>;
