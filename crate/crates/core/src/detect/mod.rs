//! Community detection algorithms.
//!
//! Every algorithm is a deterministic function of the graph, the parameters
//! and the seed, and returns a canonical [`Partition`] covering all nodes.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::embed::Embedding;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;
use crate::scalar::Scalar;

mod infomap;
mod label_propagation;
mod leading_eigenvector;
mod louvain;
mod spectral;

pub use infomap::{codelength, infomap};
pub use label_propagation::label_propagation;
pub use leading_eigenvector::leading_eigenvector;
pub use louvain::louvain;
pub use spectral::{kmeans_communities, kmeans_communities_on, shared_embedding, spectral_communities};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Louvain,
    LabelPropagation,
    Infomap,
    LeadingEigenvector,
    Spectral,
    KMeans,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Louvain,
        Algorithm::LabelPropagation,
        Algorithm::Infomap,
        Algorithm::LeadingEigenvector,
        Algorithm::Spectral,
        Algorithm::KMeans,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Louvain => "louvain",
            Algorithm::LabelPropagation => "label_propagation",
            Algorithm::Infomap => "infomap",
            Algorithm::LeadingEigenvector => "leading_eigenvector",
            Algorithm::Spectral => "spectral",
            Algorithm::KMeans => "kmeans",
        }
    }

    /// Fixed offset added to a master seed so algorithms draw independent
    /// random streams.
    pub fn seed_offset(self) -> u64 {
        match self {
            Algorithm::Louvain => 0,
            Algorithm::LabelPropagation => 1,
            Algorithm::Infomap => 2,
            Algorithm::LeadingEigenvector => 3,
            Algorithm::Spectral => 4,
            Algorithm::KMeans => 5,
        }
    }

    pub fn needs_k(self) -> bool {
        matches!(self, Algorithm::Spectral | Algorithm::KMeans)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown algorithm {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectParams<T> {
    pub seed: u64,
    /// Cluster count for the embedding-based algorithms.
    pub k: Option<usize>,
    pub embed_dim: usize,
    /// Minimum objective improvement for a move or split to count.
    pub tolerance: T,
    /// Relative residual tolerance of the eigensolver.
    pub eigen_tol: T,
    /// Cap on sweeps, Lloyd iterations and eigensolver operator applications.
    pub max_iter: usize,
    /// Cap on optimize-then-aggregate passes.
    pub max_passes: usize,
    pub kmeans_restarts: usize,
}

pub const DEFAULT_K: usize = 15;
pub const DEFAULT_EMBED_DIM: usize = 32;

impl<T: Scalar> Default for DetectParams<T> {
    fn default() -> Self {
        DetectParams {
            seed: 42,
            k: None,
            embed_dim: DEFAULT_EMBED_DIM,
            tolerance: T::lit(1e-10),
            eigen_tol: T::lit(1e-8),
            max_iter: 10_000,
            max_passes: 100,
            kmeans_restarts: 8,
        }
    }
}

impl<T: Scalar> DetectParams<T> {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == Some(0) {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        if !(self.tolerance > T::zero()) || !(self.eigen_tol > T::zero()) {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        if self.embed_dim == 0 {
            return Err(Error::InvalidArgument("embedding dimension must be at least 1".into()));
        }
        Ok(())
    }

    pub(crate) fn eigen_options(&self, seed: u64) -> crate::eigen::EigenOptions<T> {
        crate::eigen::EigenOptions { tol: self.eigen_tol, max_iter: self.max_iter, seed }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectOutcome<T> {
    pub partition: Partition,
    /// Objective value per pass or sweep: modularity for louvain, label
    /// propagation and leading eigenvector, codelength in bits for infomap,
    /// k-means inertia for the embedding-based algorithms.
    pub objective_trace: Vec<T>,
    pub wall_time: Duration,
    pub algorithm_name: String,
    pub seed: u64,
}

/// Runs `algorithm` with `params`. Embedding-based algorithms reuse
/// `embedding` when one is supplied (k-means clusters it directly).
pub fn run<T: Scalar>(
    algorithm: Algorithm,
    g: &Graph<T>,
    embedding: Option<&Embedding<T>>,
    params: &DetectParams<T>,
) -> Result<DetectOutcome<T>> {
    params.validate()?;
    let start = Instant::now();
    let (partition, objective_trace) = match algorithm {
        Algorithm::Louvain => louvain(g, params)?,
        Algorithm::LabelPropagation => label_propagation(g, params)?,
        Algorithm::Infomap => infomap(g, params)?,
        Algorithm::LeadingEigenvector => leading_eigenvector(g, params)?,
        Algorithm::Spectral => spectral_communities(g, params)?,
        Algorithm::KMeans => match embedding {
            Some(e) => kmeans_communities_on(e, params)?,
            None => kmeans_communities(g, params)?,
        },
    };
    Ok(DetectOutcome {
        partition,
        objective_trace,
        wall_time: start.elapsed(),
        algorithm_name: algorithm.name().to_string(),
        seed: params.seed,
    })
}

/// Accumulates edge weight from one node towards each neighboring community,
/// remembering first-touch order so iteration is deterministic.
pub(crate) struct NeighborWeights<T> {
    weight: Vec<T>,
    seen: Vec<bool>,
    touched: Vec<usize>,
}

impl<T: Scalar> NeighborWeights<T> {
    pub(crate) fn new(n: usize) -> Self {
        NeighborWeights { weight: vec![T::zero(); n], seen: vec![false; n], touched: Vec::new() }
    }

    pub(crate) fn collect(&mut self, g: &Graph<T>, u: usize, community: &[usize]) {
        for &c in &self.touched {
            self.weight[c] = T::zero();
            self.seen[c] = false;
        }
        self.touched.clear();
        for (v, w) in g.neighbors(u) {
            let c = community[v];
            if !self.seen[c] {
                self.seen[c] = true;
                self.touched.push(c);
            }
            self.weight[c] = self.weight[c] + w;
        }
    }

    #[inline]
    pub(crate) fn get(&self, c: usize) -> T {
        if self.seen[c] {
            self.weight[c]
        } else {
            T::zero()
        }
    }

    pub(crate) fn touched(&self) -> &[usize] {
        &self.touched
    }
}
