//! Partition quality metrics.
//!
//! Modularity and normalized cut are computed on the graph; silhouette,
//! compactness, Calinski–Harabasz and separability on node coordinates.
//! Lower compactness means tighter communities.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::detect::DetectOutcome;
use crate::embed::Embedding;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;
use crate::scalar::Scalar;

/// Node count above which [`evaluate_all`] samples the silhouette by default.
pub const SILHOUETTE_FULL_LIMIT: usize = 5000;
pub const SILHOUETTE_DEFAULT_SAMPLE: usize = 2000;

/// `Σ_c [W_in(c)/m − (vol(c)/2m)²]`, where `W_in` counts intra-community
/// edge weight and self-loops once.
pub fn modularity<T: Scalar>(g: &Graph<T>, p: &Partition) -> Result<T> {
    check_graph(g, p)?;
    let m = g.total_weight();
    if !(m > T::zero()) {
        return Err(Error::UndefinedMetric("modularity of a graph without edges".into()));
    }
    let k = p.community_count();
    let mut internal = vec![T::zero(); k];
    let mut volume = vec![T::zero(); k];
    for u in 0..g.node_count() {
        let c = p.community_of(u);
        volume[c] = volume[c] + g.degrees()[u];
        internal[c] = internal[c] + g.self_loop(u);
        for (v, w) in g.neighbors(u) {
            if v > u && p.community_of(v) == c {
                internal[c] = internal[c] + w;
            }
        }
    }
    let two_m = m + m;
    Ok(internal.iter().zip(&volume).map(|(&w_in, &vol)| w_in / m - (vol / two_m).powi(2)).sum())
}

/// Mean over communities of `cut(C) / vol(C)`.
pub fn normalized_cut<T: Scalar>(g: &Graph<T>, p: &Partition) -> Result<T> {
    let cv = g.cut_and_volume(p)?;
    if cv.is_empty() {
        return Err(Error::UndefinedMetric("normalized cut of an empty partition".into()));
    }
    let mut total = T::zero();
    for (c, x) in cv.iter().enumerate() {
        if !(x.volume > T::zero()) {
            return Err(Error::UndefinedMetric(format!("community {c} has zero volume")));
        }
        total = total + x.cut / x.volume;
    }
    Ok(total / T::from_usize_lossy(cv.len()))
}

fn check_graph<T: Scalar>(g: &Graph<T>, p: &Partition) -> Result<()> {
    if g.node_count() != p.node_count() {
        return Err(Error::SizeMismatch { expected: g.node_count(), actual: p.node_count() });
    }
    Ok(())
}

fn check_points<T: Scalar>(e: &Embedding<T>, p: &Partition) -> Result<()> {
    if e.len() != p.node_count() {
        return Err(Error::SizeMismatch { expected: e.len(), actual: p.node_count() });
    }
    Ok(())
}

#[inline]
fn dist<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |s, (&x, &y)| s + (x - y) * (x - y)).sqrt()
}

fn centroids<T: Scalar>(e: &Embedding<T>, p: &Partition) -> Vec<Vec<T>> {
    let mut sums = vec![vec![T::zero(); e.dim()]; p.community_count()];
    for (u, row) in e.rows().enumerate() {
        let c = p.community_of(u);
        for (s, &x) in sums[c].iter_mut().zip(row) {
            *s = *s + x;
        }
    }
    for (sum, &size) in sums.iter_mut().zip(p.sizes()) {
        let inv = T::one() / T::from_usize_lossy(size);
        sum.iter_mut().for_each(|s| *s = *s * inv);
    }
    sums
}

/// Mean silhouette width with Euclidean distances.
///
/// Members of singleton communities score 0, as do points whose intra and
/// nearest-other mean distances are both 0. With `sample = Some(s)` and
/// `s < n`, the mean runs over `s` nodes drawn uniformly without replacement
/// (distances still go to every node).
pub fn silhouette<T: Scalar>(e: &Embedding<T>, p: &Partition, sample_size: Option<usize>, seed: u64) -> Result<T> {
    check_points(e, p)?;
    let k = p.community_count();
    if k < 2 {
        return Err(Error::UndefinedMetric(format!("silhouette needs at least 2 communities, got {k}")));
    }
    let n = e.len();
    let nodes: Vec<usize> = match sample_size {
        Some(s) if s < n => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut picked = sample(&mut rng, n, s.max(1)).into_vec();
            picked.sort_unstable();
            picked
        }
        _ => (0..n).collect(),
    };
    let sizes = p.sizes();
    let mut per_cluster = vec![T::zero(); k];
    let mut total = T::zero();
    for &i in &nodes {
        let own = p.community_of(i);
        if sizes[own] == 1 {
            continue;
        }
        per_cluster.iter_mut().for_each(|s| *s = T::zero());
        let xi = e.row(i);
        for (j, xj) in e.rows().enumerate() {
            let c = p.community_of(j);
            per_cluster[c] = per_cluster[c] + dist(xi, xj);
        }
        let a = per_cluster[own] / T::from_usize_lossy(sizes[own] - 1);
        let b = (0..k)
            .filter(|&c| c != own)
            .map(|c| per_cluster[c] / T::from_usize_lossy(sizes[c]))
            .fold(T::infinity(), T::min);
        let denom = a.max(b);
        if denom > T::zero() {
            total = total + (b - a) / denom;
        }
    }
    Ok(total / T::from_usize_lossy(nodes.len()))
}

/// `Σ_i (1/|C_i|) Σ_{x∈C_i} ‖x − μ_i‖²`.
pub fn compactness<T: Scalar>(e: &Embedding<T>, p: &Partition) -> Result<T> {
    check_points(e, p)?;
    let mu = centroids(e, p);
    let mut spread = vec![T::zero(); p.community_count()];
    for (u, row) in e.rows().enumerate() {
        let c = p.community_of(u);
        spread[c] = spread[c] + dist(row, &mu[c]).powi(2);
    }
    Ok(spread.iter().zip(p.sizes()).map(|(&s, &size)| s / T::from_usize_lossy(size)).sum())
}

/// `(B / W) · (N − k) / (k − 1)`; `+∞` when the within-cluster dispersion is 0.
pub fn calinski_harabasz<T: Scalar>(e: &Embedding<T>, p: &Partition) -> Result<T> {
    check_points(e, p)?;
    let (n, k) = (e.len(), p.community_count());
    if k < 2 || k >= n {
        return Err(Error::UndefinedMetric(format!("Calinski-Harabasz needs 2 <= k < N, got k={k}, N={n}")));
    }
    let mu = centroids(e, p);
    let mut overall = vec![T::zero(); e.dim()];
    for row in e.rows() {
        for (o, &x) in overall.iter_mut().zip(row) {
            *o = *o + x;
        }
    }
    let inv_n = T::one() / T::from_usize_lossy(n);
    overall.iter_mut().for_each(|o| *o = *o * inv_n);

    let between: T =
        mu.iter().zip(p.sizes()).map(|(m, &size)| T::from_usize_lossy(size) * dist(m, &overall).powi(2)).sum();
    let within: T = e.rows().enumerate().map(|(u, row)| dist(row, &mu[p.community_of(u)]).powi(2)).sum();
    if within == T::zero() {
        return Ok(T::infinity());
    }
    Ok(between / within * T::from_usize_lossy(n - k) / T::from_usize_lossy(k - 1))
}

/// Mean centroid distance over ordered community pairs.
pub fn separability<T: Scalar>(e: &Embedding<T>, p: &Partition) -> Result<T> {
    check_points(e, p)?;
    let k = p.community_count();
    if k < 2 {
        return Err(Error::UndefinedMetric(format!("separability needs at least 2 communities, got {k}")));
    }
    let mu = centroids(e, p);
    let mut total = T::zero();
    for i in 0..k {
        for j in 0..k {
            if i != j {
                total = total + dist(&mu[i], &mu[j]);
            }
        }
    }
    Ok(total / T::from_usize_lossy(k * (k - 1)))
}

/// All six metrics for one detection run; `None` marks an undefined value.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport<T> {
    pub algorithm_name: String,
    pub modularity: Option<T>,
    pub normalized_cut: Option<T>,
    pub silhouette: Option<T>,
    pub compactness: Option<T>,
    pub calinski_harabasz: Option<T>,
    pub separability: Option<T>,
    pub community_count: usize,
    pub wall_time: std::time::Duration,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EvaluateOptions {
    /// Silhouette sample size; `None` picks full evaluation up to
    /// [`SILHOUETTE_FULL_LIMIT`] nodes and a [`SILHOUETTE_DEFAULT_SAMPLE`]
    /// sample above.
    pub silhouette_sample: Option<usize>,
    pub seed: u64,
}

pub fn evaluate_all<T: Scalar>(
    g: &Graph<T>,
    e: &Embedding<T>,
    outcome: &DetectOutcome<T>,
    opts: &EvaluateOptions,
) -> MetricReport<T> {
    let p = &outcome.partition;
    let sample = opts
        .silhouette_sample
        .or_else(|| (p.node_count() > SILHOUETTE_FULL_LIMIT).then_some(SILHOUETTE_DEFAULT_SAMPLE));
    MetricReport {
        algorithm_name: outcome.algorithm_name.clone(),
        modularity: modularity(g, p).ok(),
        normalized_cut: normalized_cut(g, p).ok(),
        silhouette: silhouette(e, p, sample, opts.seed).ok(),
        compactness: compactness(e, p).ok(),
        calinski_harabasz: calinski_harabasz(e, p).ok(),
        separability: separability(e, p).ok(),
        community_count: p.community_count(),
        wall_time: outcome.wall_time,
        seed: outcome.seed,
    }
}
