//! Two-level map equation for random walks on undirected graphs, without teleportation.
//!
//! With visit rates `p_α = k_α / 2m`, module exit rates `q_i = cut(C_i) / 2m`
//! and module flow `p_i = vol(C_i) / 2m`, the codelength in bits is
//!
//! ```text
//! L = plogp(Σ q_i) − 2 Σ plogp(q_i) − Σ plogp(p_α) + Σ plogp(q_i + p_i)
//! ```

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{DetectParams, NeighborWeights};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;
use crate::scalar::{plogp, Scalar};

/// Map-equation codelength of `p` on `g`, in bits.
pub fn codelength<T: Scalar>(g: &Graph<T>, p: &Partition) -> Result<T> {
    if g.node_count() != p.node_count() {
        return Err(Error::SizeMismatch { expected: g.node_count(), actual: p.node_count() });
    }
    let m = g.total_weight();
    if !(m > T::zero()) {
        return Err(Error::UndefinedMetric("codelength of a graph without edges".into()));
    }
    let cv = g.cut_and_volume(p)?;
    let exits: Vec<T> = cv.iter().map(|c| c.cut).collect();
    let volumes: Vec<T> = cv.iter().map(|c| c.volume).collect();
    Ok(module_terms(&exits, &volumes, m + m) - node_entropy_term(g))
}

/// `Σ plogp(p_α)` over nodes.
fn node_entropy_term<T: Scalar>(g: &Graph<T>) -> T {
    let two_m = g.total_weight() + g.total_weight();
    g.degrees().iter().map(|&d| plogp(d / two_m)).sum()
}

fn module_terms<T: Scalar>(exits: &[T], volumes: &[T], two_m: T) -> T {
    let total_exit: T = exits.iter().copied().sum();
    let two = T::lit(2.0);
    let per_module: T = exits.iter().zip(volumes).map(|(&q, &v)| plogp((q + v) / two_m) - two * plogp(q / two_m)).sum();
    plogp(total_exit / two_m) + per_module
}

/// Greedy map-equation minimization.
///
/// Alternates node-level moves (seed-shuffled order, starting from the current
/// modules) with module-level moves on successively aggregated graphs, and
/// keeps the result only when the codelength drops by more than `tolerance`.
/// Disconnected graphs are solved per component and never merged across
/// components; isolated nodes are their own modules. The returned trace is
/// the codelength per outer pass (flow-weighted over components).
pub fn infomap<T: Scalar>(g: &Graph<T>, params: &DetectParams<T>) -> Result<(Partition, Vec<T>)> {
    let n = g.node_count();
    let components = g.connected_components();
    if components.component_count == 1 {
        return infomap_connected(g, params, params.seed);
    }
    let two_m = g.total_weight() + g.total_weight();
    let mut raw = vec![0usize; n];
    let mut next_label = 0;
    let mut traces: Vec<(T, Vec<T>)> = Vec::new();
    for (ci, members) in components.members().into_iter().enumerate() {
        let sub = g.induced_subgraph(&members);
        if !(sub.total_weight() > T::zero()) {
            for &u in &members {
                raw[u] = next_label;
                next_label += 1;
            }
            continue;
        }
        let (p, trace) = infomap_connected(&sub, params, params.seed.wrapping_add(ci as u64))?;
        for (local, &u) in members.iter().enumerate() {
            raw[u] = next_label + p.community_of(local);
        }
        next_label += p.community_count();
        let flow: T = members.iter().map(|&u| g.degrees()[u]).sum::<T>() / two_m;
        traces.push((flow, trace));
    }
    let passes = traces.iter().map(|t| t.1.len()).max().unwrap_or(0);
    let trace = (0..passes).map(|i| traces.iter().map(|(w, t)| *w * t[i.min(t.len() - 1)]).sum()).collect();
    Ok((Partition::canonicalize(&raw), trace))
}

fn infomap_connected<T: Scalar>(g: &Graph<T>, params: &DetectParams<T>, seed: u64) -> Result<(Partition, Vec<T>)> {
    let n = g.node_count();
    if !(g.total_weight() > T::zero()) {
        return Ok((Partition::singletons(n), Vec::new()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = Partition::singletons(n);
    let mut best_len = codelength(g, &best)?;
    let mut trace = vec![best_len];
    for _ in 0..params.max_passes {
        let mut fine: Vec<usize> = best.assignment().to_vec();
        local_moves(g, &mut fine, params.tolerance, &mut rng);
        let mut candidate = Partition::canonicalize(&fine);
        let mut level = g.aggregate(&candidate)?;
        loop {
            let mut coarse: Vec<usize> = (0..level.node_count()).collect();
            if !local_moves(&level, &mut coarse, params.tolerance, &mut rng) {
                break;
            }
            let step = Partition::canonicalize(&coarse);
            candidate = candidate.compose(&step);
            level = level.aggregate(&step)?;
        }
        let len = codelength(g, &candidate)?;
        if len < best_len - params.tolerance {
            best = candidate;
            best_len = len;
            trace.push(len);
        } else {
            break;
        }
    }
    let one = Partition::all_in_one(n);
    let one_len = codelength(g, &one)?;
    if one_len < best_len {
        best = one;
        trace.push(one_len);
    }
    Ok((best, trace))
}

/// Node moves on `g` minimizing the module part of the codelength; returns
/// whether anything moved. `module` holds module ids below `g.node_count()`.
fn local_moves<T: Scalar>(g: &Graph<T>, module: &mut [usize], tolerance: T, rng: &mut ChaCha8Rng) -> bool {
    let n = g.node_count();
    let two_m = g.total_weight() + g.total_weight();
    let two = T::lit(2.0);
    let degrees = g.degrees();
    let mut volume = vec![T::zero(); n];
    let mut exit = vec![T::zero(); n];
    for u in 0..n {
        let c = module[u];
        volume[c] = volume[c] + degrees[u];
        for (v, w) in g.neighbors(u) {
            if module[v] != c {
                exit[c] = exit[c] + w;
            }
        }
    }
    let mut total_exit: T = exit.iter().copied().sum();
    let term = |q: T, v: T| plogp((q + v) / two_m) - two * plogp(q / two_m);

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut weights = NeighborWeights::new(n);
    let mut any = false;
    loop {
        let mut moved = false;
        for &u in &order {
            let current = module[u];
            weights.collect(g, u, module);
            let k_u = degrees[u];
            let outward = k_u - two * g.self_loop(u);
            // Take u out of its module.
            let w_cur = weights.get(current);
            let exit_removed = exit[current] - outward + two * w_cur;
            let vol_removed = volume[current] - k_u;
            let base_exit = total_exit - exit[current] + exit_removed;

            let cost = |c: usize, q_c: T, v_c: T| {
                let new_q = q_c + outward - two * weights.get(c);
                let new_v = v_c + k_u;
                plogp((base_exit - q_c + new_q) / two_m) + term(new_q, new_v) - term(q_c, v_c)
            };
            let stay = cost(current, exit_removed, vol_removed);
            let mut best = (current, stay);
            for &c in weights.touched() {
                if c == current {
                    continue;
                }
                let value = cost(c, exit[c], volume[c]);
                if value < best.1 && stay - value > tolerance {
                    best = (c, value);
                }
            }
            if best.0 != current {
                let target = best.0;
                let new_q = exit[target] + outward - two * weights.get(target);
                total_exit = base_exit - exit[target] + new_q;
                exit[current] = exit_removed;
                volume[current] = vol_removed;
                exit[target] = new_q;
                volume[target] = volume[target] + k_u;
                module[u] = target;
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

#[cfg(test)]
mod tests {
    use super::*;

    fn b6() -> Graph<f64> {
        Graph::parse_str("0 1\n0 2\n1 2\n2 3\n3 4\n3 5\n4 5\n").unwrap().0
    }

    #[test]
    fn single_module_is_node_entropy() {
        let g = b6();
        let h: f64 = g.degrees().iter().map(|&d| -(d / 14.0) * (d / 14.0).log2()).sum();
        let l = codelength(&g, &Partition::all_in_one(6)).unwrap();
        assert!((l - h).abs() < 1e-12);
    }

    #[test]
    fn b6_prefers_triangles() {
        let g = b6();
        let tri = Partition::canonicalize(&[0, 0, 0, 1, 1, 1]);
        assert!(codelength(&g, &tri).unwrap() < codelength(&g, &Partition::all_in_one(6)).unwrap());
        let (p, trace) = infomap(&g, &DetectParams::default()).unwrap();
        assert_eq!(p, tri);
        assert!(trace.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn disconnected_components_are_never_merged() {
        let (g, _) = Graph::<f64>::parse_str("0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n9 9\n").unwrap();
        let (p, trace) = infomap(&g, &DetectParams::default()).unwrap();
        assert_eq!(p.assignment(), &[0, 0, 0, 1, 1, 1, 2]);
        assert!(!trace.is_empty());
    }
}
