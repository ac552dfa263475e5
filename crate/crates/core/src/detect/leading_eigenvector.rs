use super::DetectParams;
use crate::eigen::{dot, top_eigenpairs, LinearOperator};
use crate::error::Result;
use crate::graph::Graph;
use crate::metrics::modularity;
use crate::partition::Partition;
use crate::scalar::Scalar;

/// Generalized modularity matrix of a node group `G`:
/// `B_ij − δ_ij Σ_{l∈G} B_il` with `B = A − k kᵀ / 2m`, restricted to `G`.
struct GroupModularity<'a, T> {
    graph: &'a Graph<T>,
    nodes: &'a [usize],
    /// Global index to position in `nodes`, `usize::MAX` outside the group.
    local: &'a [usize],
    two_m: T,
    row_sums: Vec<T>,
}

impl<'a, T: Scalar> GroupModularity<'a, T> {
    fn new(graph: &'a Graph<T>, nodes: &'a [usize], local: &'a [usize]) -> Self {
        let two_m = graph.total_weight() + graph.total_weight();
        let degrees = graph.degrees();
        let group_degree: T = nodes.iter().map(|&u| degrees[u]).sum();
        let row_sums = nodes
            .iter()
            .map(|&u| {
                let inside: T = graph.neighbors(u).filter(|&(v, _)| local[v] != usize::MAX).map(|(_, w)| w).sum();
                let self_w = graph.self_loop(u) + graph.self_loop(u);
                inside + self_w - degrees[u] * group_degree / two_m
            })
            .collect();
        GroupModularity { graph, nodes, local, two_m, row_sums }
    }
}

impl<T: Scalar> LinearOperator<T> for GroupModularity<'_, T> {
    fn dim(&self) -> usize {
        self.nodes.len()
    }

    fn apply(&self, x: &[T], y: &mut [T]) {
        let degrees = self.graph.degrees();
        let kx: T = self.nodes.iter().zip(x).map(|(&u, &xi)| degrees[u] * xi).sum();
        let scale = kx / self.two_m;
        for (i, &u) in self.nodes.iter().enumerate() {
            let self_w = self.graph.self_loop(u) + self.graph.self_loop(u);
            let mut acc = self_w * x[i];
            for (v, w) in self.graph.neighbors(u) {
                let j = self.local[v];
                if j != usize::MAX {
                    acc = acc + w * x[j];
                }
            }
            y[i] = acc - degrees[u] * scale - self.row_sums[i] * x[i];
        }
    }
}

/// Recursive spectral bisection on the modularity matrix.
///
/// A group is split by the sign of the leading eigenvector of its generalized
/// modularity matrix (zero entries join the positive side) when the leading
/// eigenvalue exceeds `tolerance` and the split raises modularity by more than
/// `tolerance`; otherwise it is final. The trace records modularity after the
/// start and after each accepted split.
pub fn leading_eigenvector<T: Scalar>(g: &Graph<T>, params: &DetectParams<T>) -> Result<(Partition, Vec<T>)> {
    let n = g.node_count();
    let m = g.total_weight();
    if !(m > T::zero()) {
        return Ok((Partition::singletons(n), Vec::new()));
    }
    let four_m = m * T::lit(4.0);
    let mut assignment = vec![0usize; n];
    let mut communities = 1usize;
    let mut trace = vec![modularity(g, &Partition::all_in_one(n))?];
    let mut pending: Vec<Vec<usize>> = vec![(0..n).collect()];
    let mut local = vec![usize::MAX; n];
    let mut solves = 0u64;
    while let Some(group) = pending.pop() {
        if group.len() < 2 {
            continue;
        }
        for (i, &u) in group.iter().enumerate() {
            local[u] = i;
        }
        let op = GroupModularity::new(g, &group, &local);
        let eig = top_eigenpairs(&op, 1, &params.eigen_options(params.seed.wrapping_add(solves)))?;
        solves += 1;
        let (lambda, vector) = (eig.values[0], &eig.vectors[0]);

        let mut split = None;
        if lambda > params.tolerance {
            let signs: Vec<T> = vector.iter().map(|&x| if x >= T::zero() { T::one() } else { -T::one() }).collect();
            let positives = signs.iter().filter(|&&s| s > T::zero()).count();
            if positives > 0 && positives < group.len() {
                let mut bs = vec![T::zero(); group.len()];
                op.apply(&signs, &mut bs);
                let delta_q = dot(&signs, &bs) / four_m;
                if delta_q > params.tolerance {
                    split = Some(signs);
                }
            }
        }
        for &u in &group {
            local[u] = usize::MAX;
        }
        let Some(signs) = split else { continue };

        let (mut plus, mut minus) = (Vec::new(), Vec::new());
        for (&u, &s) in group.iter().zip(&signs) {
            if s > T::zero() {
                plus.push(u);
            } else {
                minus.push(u);
            }
        }
        for &u in &minus {
            assignment[u] = communities;
        }
        communities += 1;
        trace.push(modularity(g, &Partition::canonicalize(&assignment))?);
        pending.push(minus);
        pending.push(plus);
    }
    Ok((Partition::canonicalize(&assignment), trace))
}
