//! Lloyd's k-means with k-means++ seeding.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::embed::Embedding;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KMeansOptions {
    pub seed: u64,
    pub max_iter: usize,
    pub restarts: usize,
}

impl Default for KMeansOptions {
    fn default() -> Self {
        KMeansOptions { seed: 0, max_iter: 300, restarts: 8 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult<T> {
    pub assignment: Vec<usize>,
    pub centroids: Vec<Vec<T>>,
    /// Sum of squared distances to the assigned centroid.
    pub inertia: T,
    pub iterations: usize,
    /// Inertia after every centroid update of the returned run.
    pub inertia_trace: Vec<T>,
}

#[inline]
fn sq_dist<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |s, (&x, &y)| s + (x - y) * (x - y))
}

/// Clusters the rows of `points` into exactly `k` non-empty clusters.
///
/// Points are visited in lexicographic coordinate order, so the result does
/// not depend on the order rows were supplied in. The best of
/// `opts.restarts` seeded runs (lowest inertia) is returned.
pub fn kmeans<T: Scalar>(points: &Embedding<T>, k: usize, opts: &KMeansOptions) -> Result<KMeansResult<T>> {
    let n = points.len();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("k = {k} must lie in 1..={n}")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        points
            .row(a)
            .iter()
            .zip(points.row(b))
            .map(|(x, y)| x.partial_cmp(y).unwrap_or(Ordering::Equal))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    });

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best: Option<KMeansResult<T>> = None;
    for _ in 0..opts.restarts.max(1) {
        let run_seed: u64 = rng.gen();
        let result = lloyd(points, &order, k, opts.max_iter.max(1), run_seed);
        if best.as_ref().is_none_or(|b| result.inertia < b.inertia) {
            best = Some(result);
        }
    }
    Ok(best.expect("at least one restart"))
}

fn plus_plus_init<T: Scalar>(points: &Embedding<T>, order: &[usize], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<T>> {
    let n = order.len();
    let first = order[rng.gen_range(0..n)];
    let mut centroids = vec![points.row(first).to_vec()];
    let mut nearest: Vec<T> = order.iter().map(|&i| sq_dist(points.row(i), &centroids[0])).collect();
    while centroids.len() < k {
        let total: T = nearest.iter().copied().sum();
        let pick = if total > T::zero() {
            let target = T::lit(rng.gen::<f64>()) * total;
            let mut acc = T::zero();
            let mut chosen = n - 1;
            for (pos, &d) in nearest.iter().enumerate() {
                acc = acc + d;
                if acc > target && d > T::zero() {
                    chosen = pos;
                    break;
                }
            }
            while nearest[chosen] == T::zero() {
                chosen -= 1;
            }
            chosen
        } else {
            // All remaining points coincide with a centroid.
            centroids.len() % n
        };
        let c = points.row(order[pick]).to_vec();
        for (pos, &i) in order.iter().enumerate() {
            nearest[pos] = nearest[pos].min(sq_dist(points.row(i), &c));
        }
        centroids.push(c);
    }
    centroids
}

fn nearest_centroid<T: Scalar>(p: &[T], centroids: &[Vec<T>]) -> (usize, T) {
    let mut best = (0, sq_dist(p, &centroids[0]));
    for (c, mu) in centroids.iter().enumerate().skip(1) {
        let d = sq_dist(p, mu);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn lloyd<T: Scalar>(points: &Embedding<T>, order: &[usize], k: usize, max_iter: usize, seed: u64) -> KMeansResult<T> {
    let n = points.len();
    let dim = points.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = plus_plus_init(points, order, k, &mut rng);
    let mut assignment = vec![0usize; n];
    for &i in order {
        assignment[i] = nearest_centroid(points.row(i), &centroids).0;
    }

    let mut trace = Vec::new();
    let mut iterations = 0;
    loop {
        iterations += 1;
        repair_empty(points, order, &mut assignment, &centroids, k);

        let mut sums = vec![vec![T::zero(); dim]; k];
        let mut counts = vec![0usize; k];
        for &i in order {
            let c = assignment[i];
            counts[c] += 1;
            for (s, &x) in sums[c].iter_mut().zip(points.row(i)) {
                *s = *s + x;
            }
        }
        for (c, sum) in sums.into_iter().enumerate() {
            let inv = T::one() / T::from_usize_lossy(counts[c]);
            centroids[c] = sum.into_iter().map(|s| s * inv).collect();
        }
        let inertia: T = order.iter().map(|&i| sq_dist(points.row(i), &centroids[assignment[i]])).sum();
        trace.push(inertia);

        if iterations >= max_iter {
            break;
        }
        let mut changed = false;
        for &i in order {
            let (c, d) = nearest_centroid(points.row(i), &centroids);
            // Only move on strict improvement so ties cannot cycle.
            if c != assignment[i] && d < sq_dist(points.row(i), &centroids[assignment[i]]) {
                assignment[i] = c;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let inertia = *trace.last().expect("one iteration ran");
    KMeansResult { assignment, centroids, inertia, iterations, inertia_trace: trace }
}

/// Gives every empty cluster the point farthest from its current centroid,
/// taken from clusters that keep at least one member.
fn repair_empty<T: Scalar>(
    points: &Embedding<T>,
    order: &[usize],
    assignment: &mut [usize],
    centroids: &[Vec<T>],
    k: usize,
) {
    let mut counts = vec![0usize; k];
    for &c in assignment.iter() {
        counts[c] += 1;
    }
    for empty in 0..k {
        if counts[empty] > 0 {
            continue;
        }
        let mut far: Option<(usize, T)> = None;
        for &i in order {
            let c = assignment[i];
            if counts[c] < 2 {
                continue;
            }
            let d = sq_dist(points.row(i), &centroids[c]);
            if far.is_none_or(|(_, best)| d > best) {
                far = Some((i, d));
            }
        }
        let (i, _) = far.expect("k <= n leaves a cluster with two members");
        counts[assignment[i]] -= 1;
        assignment[i] = empty;
        counts[empty] = 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(rows: &[[f64; 2]]) -> Embedding<f64> {
        Embedding::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn two_obvious_clusters() {
        let e = pts(&[[0.0, 0.0], [0.0, 1.0], [10.0, 0.0], [10.0, 1.0]]);
        let r = kmeans(&e, 2, &KMeansOptions::default()).unwrap();
        assert_eq!(r.assignment[0], r.assignment[1]);
        assert_eq!(r.assignment[2], r.assignment[3]);
        assert_ne!(r.assignment[0], r.assignment[2]);
        assert!((r.inertia - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_cluster_is_mean() {
        let e = pts(&[[0.0, 0.0], [2.0, 0.0], [4.0, 3.0]]);
        let r = kmeans(&e, 1, &KMeansOptions::default()).unwrap();
        assert!((r.centroids[0][0] - 2.0).abs() < 1e-12 && (r.centroids[0][1] - 1.0).abs() < 1e-12);
        // 4 + 1 + 0 + 1 + 4 + 4
        assert!((r.inertia - 14.0).abs() < 1e-12);
    }

    #[test]
    fn k_equals_n_has_zero_inertia() {
        let e = pts(&[[0.0, 0.0], [1.0, 0.0], [5.0, 5.0], [1.0, 1.0]]);
        let r = kmeans(&e, 4, &KMeansOptions::default()).unwrap();
        assert_eq!(r.inertia, 0.0);
        let mut seen = r.assignment.clone();
        seen.sort();
        assert_eq!(seen, vec![0, 1, 2, 3]);
    }

    #[test]
    fn duplicate_points_still_fill_every_cluster() {
        let e = pts(&[[1.0, 1.0]; 5]);
        let r = kmeans(&e, 3, &KMeansOptions::default()).unwrap();
        for c in 0..3 {
            assert!(r.assignment.contains(&c));
        }
        assert_eq!(r.inertia, 0.0);
    }

    #[test]
    fn argument_errors() {
        let e = pts(&[[0.0, 0.0]]);
        assert!(kmeans(&e, 2, &KMeansOptions::default()).is_err());
        assert!(kmeans(&e, 0, &KMeansOptions::default()).is_err());
    }

    #[test]
    fn trace_is_non_increasing() {
        let rows: Vec<[f64; 2]> =
            (0..60).map(|i| [((i * 37) % 17) as f64, ((i * 11) % 13) as f64 + (i % 3) as f64 * 0.5]).collect();
        let e = pts(&rows);
        for seed in 0..10 {
            let r = kmeans(&e, 5, &KMeansOptions { seed, max_iter: 100, restarts: 1 }).unwrap();
            assert!(r.inertia_trace.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{:?}", r.inertia_trace);
        }
    }
}
