use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{DetectParams, NeighborWeights};
use crate::error::Result;
use crate::graph::Graph;
use crate::metrics::modularity;
use crate::partition::Partition;
use crate::scalar::Scalar;

/// Asynchronous label propagation.
///
/// Every node starts with its own label. Each sweep visits nodes in a fresh
/// seeded order and gives each the label carrying the most neighbor weight;
/// a node keeps its label whenever that label is among the maxima, otherwise
/// it picks uniformly among them. Stops after a sweep that changes nothing or
/// after `max_iter` sweeps. The trace records modularity after each sweep.
pub fn label_propagation<T: Scalar>(g: &Graph<T>, params: &DetectParams<T>) -> Result<(Partition, Vec<T>)> {
    let n = g.node_count();
    let mut label: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut order: Vec<usize> = (0..n).collect();
    let mut weights = NeighborWeights::new(n);
    let mut maxima: Vec<usize> = Vec::new();
    let mut trace = Vec::new();
    let has_edges = g.total_weight() > T::zero();
    for _ in 0..params.max_iter {
        order.shuffle(&mut rng);
        let mut changed = 0usize;
        for &u in &order {
            weights.collect(g, u, &label);
            if weights.touched().is_empty() {
                continue;
            }
            let best = weights.touched().iter().fold(T::zero(), |b, &c| b.max(weights.get(c)));
            let slack = best * T::epsilon() * T::lit(4.0);
            maxima.clear();
            maxima.extend(weights.touched().iter().copied().filter(|&c| weights.get(c) >= best - slack));
            if maxima.contains(&label[u]) {
                continue;
            }
            maxima.sort_unstable();
            label[u] = maxima[rng.gen_range(0..maxima.len())];
            changed += 1;
        }
        if has_edges {
            trace.push(modularity(g, &Partition::canonicalize(&label))?);
        }
        if changed == 0 {
            break;
        }
    }
    Ok((Partition::canonicalize(&label), trace))
}
