use super::{DetectParams, DEFAULT_K};
use crate::embed::{capped_dim, spectral_embedding, Embedding};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::kmeans::{kmeans, KMeansOptions};
use crate::partition::Partition;
use crate::scalar::Scalar;

fn kmeans_options<T: Scalar>(params: &DetectParams<T>) -> KMeansOptions {
    KMeansOptions { seed: params.seed, max_iter: params.max_iter, restarts: params.kmeans_restarts }
}

/// The embedding shared by k-means detection and the geometric metrics:
/// `embed_dim` columns, capped at `n − 1`.
pub fn shared_embedding<T: Scalar>(g: &Graph<T>, params: &DetectParams<T>) -> Result<Embedding<T>> {
    if g.node_count() < 2 {
        return Err(Error::InvalidArgument("spectral embedding needs at least 2 nodes".into()));
    }
    spectral_embedding(g, capped_dim(params.embed_dim, g.node_count()), &params.eigen_options(params.seed))
}

/// Normalized spectral clustering: `k` leading eigenvectors, rows scaled to
/// unit length, then k-means with the same `k`.
pub fn spectral_communities<T: Scalar>(g: &Graph<T>, params: &DetectParams<T>) -> Result<(Partition, Vec<T>)> {
    let k = params.k.unwrap_or(DEFAULT_K);
    let n = g.node_count();
    if k < 2 || k >= n {
        return Err(Error::InvalidArgument(format!("spectral clustering needs 2 <= k < {n}, got {k}")));
    }
    let embedding = spectral_embedding(g, k, &params.eigen_options(params.seed))?.row_normalized();
    let result = kmeans(&embedding, k, &kmeans_options(params))?;
    Ok((Partition::canonicalize(&result.assignment), result.inertia_trace))
}

/// k-means on the shared spectral embedding (rows not normalized).
pub fn kmeans_communities<T: Scalar>(g: &Graph<T>, params: &DetectParams<T>) -> Result<(Partition, Vec<T>)> {
    let k = params.k.unwrap_or(DEFAULT_K);
    if k == 1 {
        return Ok((Partition::all_in_one(g.node_count()), Vec::new()));
    }
    let embedding = shared_embedding(g, params)?;
    kmeans_communities_on(&embedding, params)
}

pub fn kmeans_communities_on<T: Scalar>(
    embedding: &Embedding<T>,
    params: &DetectParams<T>,
) -> Result<(Partition, Vec<T>)> {
    let k = params.k.unwrap_or(DEFAULT_K);
    let result = kmeans(embedding, k, &kmeans_options(params))?;
    Ok((Partition::canonicalize(&result.assignment), result.inertia_trace))
}
