//! Independent oracles and fixtures shared by the integration suites.
#![allow(dead_code)]

use commbench_core::graph::Graph;
use commbench_core::Partition;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type G = Graph<f64>;

pub fn b6() -> G {
    G::parse_str("0 1\n0 2\n1 2\n2 3\n3 4\n3 5\n4 5\n").unwrap().0
}

/// Erdős–Rényi graph on `n` nodes (labels `0..n`, every node present).
pub fn random_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> G {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v, 1.0));
            }
        }
    }
    G::from_weighted_edges((0..n as u64).collect(), edges).unwrap()
}

/// Random graph that is guaranteed connected: a random spanning tree plus
/// extra edges with probability `p`.
pub fn random_connected_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> G {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v, 1.0));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v, 1.0));
            }
        }
    }
    let g = G::from_weighted_edges((0..n as u64).collect(), edges).unwrap();
    // Collapse duplicate tree/extra edges back to unit weight.
    let pairs: Vec<(u64, u64)> =
        (0..n).flat_map(|u| g.neighbor_indices(u).iter().map(move |&v| (u as u64, v as u64))).collect();
    G::from_labelled_pairs(&pairs).0
}

pub fn random_partition(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Partition {
    let raw: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k.max(1))).collect();
    Partition::canonicalize(&raw)
}

/// Textbook double sum `(1/2m) Σ_ij [A_ij − k_i k_j / 2m] δ(c_i, c_j)`.
pub fn brute_force_modularity(g: &G, p: &Partition) -> f64 {
    let a = g.dense_adjacency();
    let n = g.node_count();
    let k: Vec<f64> = a.iter().map(|row| row.iter().sum()).collect();
    let two_m: f64 = k.iter().sum();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if p.community_of(i) == p.community_of(j) {
                q += a[i][j] - k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}

/// Map-equation codelength evaluated straight from its definition.
pub fn direct_codelength(g: &G, p: &Partition) -> f64 {
    let a = g.dense_adjacency();
    let n = g.node_count();
    let k: Vec<f64> = a.iter().map(|row| row.iter().sum()).collect();
    let two_m: f64 = k.iter().sum();
    let plogp = |x: f64| if x > 0.0 { x * x.log2() } else { 0.0 };
    let c = p.community_count();
    let mut exit = vec![0.0; c];
    let mut flow = vec![0.0; c];
    for i in 0..n {
        flow[p.community_of(i)] += k[i] / two_m;
        for j in 0..n {
            if p.community_of(i) != p.community_of(j) {
                exit[p.community_of(i)] += a[i][j] / two_m;
            }
        }
    }
    let q: f64 = exit.iter().sum();
    // q·H(Q) + Σ p_i↻ H(P_i)
    let mut l = 0.0;
    if q > 0.0 {
        l -= exit.iter().map(|&qi| plogp(qi / q)).sum::<f64>() * q;
    }
    for m in 0..c {
        let total = exit[m] + flow[m];
        if total <= 0.0 {
            continue;
        }
        let mut h = -plogp(exit[m] / total);
        for i in 0..n {
            if p.community_of(i) == m {
                h -= plogp((k[i] / two_m) / total);
            }
        }
        l += total * h;
    }
    l
}

/// Calls `f` with every set partition of `0..n` as a restricted growth
/// string, without materializing the whole list.
pub fn for_each_partition(n: usize, mut f: impl FnMut(&[usize])) {
    fn rec(i: usize, max: usize, cur: &mut Vec<usize>, n: usize, f: &mut dyn FnMut(&[usize])) {
        if i == n {
            f(cur);
            return;
        }
        for c in 0..=max + 1 {
            cur.push(c);
            rec(i + 1, max.max(c), cur, n, f);
            cur.pop();
        }
    }
    if n == 0 {
        f(&[]);
        return;
    }
    let mut cur = vec![0];
    rec(1, 0, &mut cur, n, &mut f);
}

pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_partition(n, |raw| out.push(raw.to_vec()));
    out
}

pub fn exhaustive_max_modularity(g: &G) -> (f64, Vec<usize>) {
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for_each_partition(g.node_count(), |raw| {
        let q = brute_force_modularity(g, &Partition::canonicalize(raw));
        if q > best.0 + 1e-15 {
            best = (q, raw.to_vec());
        }
    });
    best
}

pub fn exhaustive_min_codelength(g: &G) -> f64 {
    let mut best = f64::INFINITY;
    for_each_partition(g.node_count(), |raw| best = best.min(direct_codelength(g, &Partition::canonicalize(raw))));
    best
}

/// Dense symmetric eigen-decomposition, eigenvalues descending.
pub fn dense_eigen(rows: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = rows.len();
    let m = nalgebra::DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    let eig = nalgebra::SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = order.iter().map(|&i| eig.eigenvectors.column(i).iter().copied().collect()).collect();
    (values, vectors)
}

pub fn random_symmetric(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let x = rng.gen_range(-1.0..1.0);
            rows[i][j] = x;
            rows[j][i] = x;
        }
    }
    rows
}

/// Named small connected graphs plus seeded random connected graphs, all
/// with at most 8 nodes.
pub fn small_connected_fixtures() -> Vec<(String, G)> {
    let named = [
        ("b6", "0 1\n0 2\n1 2\n2 3\n3 4\n3 5\n4 5\n"),
        ("k3", "0 1\n1 2\n2 0\n"),
        ("k2", "0 1\n"),
        ("star5", "0 1\n0 2\n0 3\n0 4\n"),
        ("path6", "0 1\n1 2\n2 3\n3 4\n4 5\n"),
        ("cycle8", "0 1\n1 2\n2 3\n3 4\n4 5\n5 6\n6 7\n7 0\n"),
        ("k4", "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n"),
        ("barbell8", "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n3 4\n4 5\n4 6\n4 7\n5 6\n5 7\n6 7\n"),
        ("bowtie", "0 1\n1 2\n2 0\n2 3\n3 4\n4 2\n"),
    ];
    let mut out: Vec<(String, G)> =
        named.iter().map(|(name, text)| (name.to_string(), G::parse_str(text).unwrap().0)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..30 {
        let n = 4 + i % 5;
        let p = [0.2, 0.35, 0.5][i % 3];
        out.push((format!("random{i}_n{n}"), random_connected_graph(n, p, &mut rng)));
    }
    out
}
