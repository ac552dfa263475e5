use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{DetectParams, NeighborWeights};
use crate::error::Result;
use crate::graph::Graph;
use crate::metrics::modularity;
use crate::partition::Partition;
use crate::scalar::Scalar;

/// Multi-level greedy modularity optimization.
///
/// Each pass moves nodes one at a time (seed-shuffled order) to the adjacent
/// community with the largest modularity gain, repeating sweeps until no move
/// gains more than `tolerance`, then collapses communities into super-nodes.
/// Passes stop once a pass moves nothing. The result is then polished by
/// [`refine`]; if that helps, aggregation resumes from the refined partition.
/// The trace holds the modularity of the singleton start and after every
/// productive pass.
pub fn louvain<T: Scalar>(g: &Graph<T>, params: &DetectParams<T>) -> Result<(Partition, Vec<T>)> {
    let n = g.node_count();
    let mut global = Partition::singletons(n);
    if !(g.total_weight() > T::zero()) {
        return Ok((global, Vec::new()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut trace = vec![modularity(g, &global)?];
    let mut passes = 0;
    loop {
        let mut level = g.aggregate(&global)?;
        while passes < params.max_passes {
            let mut community: Vec<usize> = (0..level.node_count()).collect();
            if !local_moves(&level, &mut community, params.tolerance, &mut rng) {
                break;
            }
            let step = Partition::canonicalize(&community);
            global = global.compose(&step);
            level = level.aggregate(&step)?;
            trace.push(modularity(&level, &Partition::singletons(level.node_count()))?);
            passes += 1;
        }
        if passes >= params.max_passes {
            break;
        }
        let mut community = global.assignment().to_vec();
        if !refine(g, &mut community, params.tolerance) {
            break;
        }
        global = Partition::canonicalize(&community);
        trace.push(modularity(g, &global)?);
        passes += 1;
    }
    Ok((global, trace))
}

/// One local-move phase; returns whether any node changed community.
fn local_moves<T: Scalar>(g: &Graph<T>, community: &mut [usize], tolerance: T, rng: &mut ChaCha8Rng) -> bool {
    let n = g.node_count();
    let m = g.total_weight();
    let two_m = m + m;
    let threshold = tolerance * m;
    let degrees = g.degrees();
    let mut total = vec![T::zero(); n];
    for u in 0..n {
        total[community[u]] = total[community[u]] + degrees[u];
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut weights = NeighborWeights::new(n);
    let mut any = false;
    loop {
        let mut moved = false;
        for &u in &order {
            let current = community[u];
            let k_u = degrees[u];
            weights.collect(g, u, community);
            total[current] = total[current] - k_u;
            // m·ΔQ of inserting the isolated node into community c.
            let gain = |c: usize| weights.get(c) - total[c] * k_u / two_m;
            let stay = gain(current);
            let mut best = (current, stay);
            for &c in weights.touched() {
                let gc = gain(c);
                if gc > best.1 && gc - stay > threshold {
                    best = (c, gc);
                }
            }
            total[best.0] = total[best.0] + k_u;
            if best.0 != current {
                community[u] = best.0;
                moved = true;
            }
        }
        if !moved {
            break;
        }
        any = true;
    }
    any
}

/// Upper bound on single-node moves tried per refinement round.
const REFINE_STEPS: usize = 64;

/// Kernighan–Lin style refinement. Each round greedily applies the best
/// single-node move among nodes not yet moved this round (losses allowed,
/// a fresh singleton community is a valid target), then rolls back to the
/// best prefix. Rounds repeat while the best prefix gains more than
/// `tolerance`. Returns whether the partition changed.
fn refine<T: Scalar>(g: &Graph<T>, community: &mut [usize], tolerance: T) -> bool {
    let n = g.node_count();
    let m = g.total_weight();
    let two_m = m + m;
    let threshold = tolerance * m;
    let degrees = g.degrees();
    let mut total = vec![T::zero(); n];
    let mut size = vec![0usize; n];
    for u in 0..n {
        total[community[u]] = total[community[u]] + degrees[u];
        size[community[u]] += 1;
    }
    let mut weights = NeighborWeights::new(n);
    let mut changed = false;
    loop {
        let mut moved = vec![false; n];
        let mut log: Vec<(usize, usize)> = Vec::new();
        let (mut gained, mut best_gain, mut best_len) = (T::zero(), T::zero(), 0);
        for _ in 0..n.min(REFINE_STEPS) {
            let empty = size.iter().position(|&s| s == 0);
            let mut choice: Option<(usize, usize, T)> = None;
            for u in (0..n).filter(|&u| !moved[u]) {
                let current = community[u];
                let k_u = degrees[u];
                weights.collect(g, u, community);
                let stay = weights.get(current) - (total[current] - k_u) * k_u / two_m;
                let mut consider = |c: usize, gain: T| {
                    if choice.is_none_or(|(_, _, best)| gain > best) {
                        choice = Some((u, c, gain));
                    }
                };
                for &c in weights.touched() {
                    if c != current {
                        consider(c, weights.get(c) - total[c] * k_u / two_m - stay);
                    }
                }
                if let Some(e) = empty.filter(|_| size[current] > 1) {
                    consider(e, -stay);
                }
            }
            let Some((u, target, gain)) = choice else { break };
            let from = community[u];
            total[from] = total[from] - degrees[u];
            size[from] -= 1;
            total[target] = total[target] + degrees[u];
            size[target] += 1;
            community[u] = target;
            moved[u] = true;
            log.push((u, from));
            gained = gained + gain;
            if gained > best_gain {
                best_gain = gained;
                best_len = log.len();
            }
        }
        for &(u, from) in log[best_len..].iter().rev() {
            let to = community[u];
            total[to] = total[to] - degrees[u];
            size[to] -= 1;
            total[from] = total[from] + degrees[u];
            size[from] += 1;
            community[u] = from;
        }
        if !(best_gain > threshold) {
            return changed;
        }
        changed = true;
    }
}
