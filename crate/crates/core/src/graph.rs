//! Undirected weighted graphs in compressed adjacency form.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::scalar::Scalar;

/// Immutable undirected graph.
///
/// Neighbor lists are sorted and symmetric. Self-loops are kept apart from the
/// adjacency lists and only arise from [`Graph::aggregate`]; a self-loop of
/// weight `w` adds `2w` to the node degree and `w` to the total weight `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph<T> {
    labels: Vec<u64>,
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<T>,
    self_loops: Vec<T>,
    degrees: Vec<T>,
    total_weight: T,
}

/// Counters collected while reading an edge list.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseReport {
    pub edge_lines: usize,
    pub duplicate_edges: usize,
    pub self_loops_ignored: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentLabeling {
    pub component_of: Vec<usize>,
    pub component_count: usize,
}

impl ComponentLabeling {
    /// Node lists per component, each ascending.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.component_count];
        for (u, &c) in self.component_of.iter().enumerate() {
            out[c].push(u);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutVolume<T> {
    pub cut: T,
    pub volume: T,
}

impl<T: Scalar> Graph<T> {
    /// Builds a graph over `labels.len()` nodes from weighted index pairs.
    ///
    /// Repeated pairs (in either orientation) have their weights summed and
    /// `u == v` pairs accumulate into the self-loop weight.
    pub fn from_weighted_edges<I>(labels: Vec<u64>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, T)>,
    {
        let n = labels.len();
        let mut self_loops = vec![T::zero(); n];
        let mut pairs: Vec<(usize, usize, T)> = Vec::new();
        for (u, v, w) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::IndexOutOfRange { index: x, len: n });
                }
            }
            if !(w >= T::zero()) || !w.is_finite() {
                return Err(Error::InvalidArgument(format!("edge ({u}, {v}) has invalid weight {w}")));
            }
            if u == v {
                self_loops[u] = self_loops[u] + w;
            } else {
                pairs.push((u.min(v), u.max(v), w));
            }
        }
        pairs.sort_by_key(|a| (a.0, a.1));
        let mut merged: Vec<(usize, usize, T)> = Vec::with_capacity(pairs.len());
        for (u, v, w) in pairs {
            match merged.last_mut() {
                Some(last) if last.0 == u && last.1 == v => last.2 = last.2 + w,
                _ => merged.push((u, v, w)),
            }
        }
        Ok(Self::from_sorted_unique(labels, &merged, self_loops))
    }

    /// `edges` holds unique `(u, v, w)` with `u < v`, sorted ascending.
    fn from_sorted_unique(labels: Vec<u64>, edges: &[(usize, usize, T)], self_loops: Vec<T>) -> Self {
        let n = labels.len();
        let mut counts = vec![0usize; n];
        for &(u, v, _) in edges {
            counts[u] += 1;
            counts[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for c in &counts {
            offsets.push(offsets.last().unwrap() + c);
        }
        let nnz = *offsets.last().unwrap();
        let mut targets = vec![0usize; nnz];
        let mut weights = vec![T::zero(); nnz];
        let mut cursor: Vec<usize> = offsets[..n].to_vec();
        // (u, v)-sorted input keeps every row ascending: a node's smaller
        // neighbors arrive first, in order, then its larger ones.
        for &(u, v, w) in edges {
            targets[cursor[u]] = v;
            weights[cursor[u]] = w;
            cursor[u] += 1;
            targets[cursor[v]] = u;
            weights[cursor[v]] = w;
            cursor[v] += 1;
        }
        debug_assert!((0..n).all(|u| targets[offsets[u]..offsets[u + 1]].windows(2).all(|p| p[0] < p[1])));
        let degrees: Vec<T> = (0..n)
            .map(|u| {
                let s: T = weights[offsets[u]..offsets[u + 1]].iter().copied().sum();
                s + self_loops[u] + self_loops[u]
            })
            .collect();
        let edge_sum: T = edges.iter().map(|e| e.2).sum();
        let loop_sum: T = self_loops.iter().copied().sum();
        Graph { labels, offsets, targets, weights, self_loops, degrees, total_weight: edge_sum + loop_sum }
    }

    /// Unit-weight simple graph from labelled pairs.
    ///
    /// Nodes are the distinct labels, re-indexed densely in ascending label
    /// order. Duplicate and reversed-duplicate pairs collapse to one edge and
    /// self-loop pairs are dropped (their label still becomes a node).
    pub fn from_labelled_pairs(pairs: &[(u64, u64)]) -> (Self, ParseReport) {
        let mut labels: Vec<u64> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        labels.sort_unstable();
        labels.dedup();
        let index = |l: u64| labels.binary_search(&l).expect("label collected");
        let mut report = ParseReport { edge_lines: pairs.len(), ..Default::default() };
        let mut edges: Vec<(usize, usize)> = Vec::with_capacity(pairs.len());
        for &(a, b) in pairs {
            if a == b {
                report.self_loops_ignored += 1;
                continue;
            }
            let (u, v) = (index(a), index(b));
            edges.push((u.min(v), u.max(v)));
        }
        edges.sort_unstable();
        let before = edges.len();
        edges.dedup();
        report.duplicate_edges = before - edges.len();
        let weighted: Vec<(usize, usize, T)> = edges.into_iter().map(|(u, v)| (u, v, T::one())).collect();
        let n = labels.len();
        (Self::from_sorted_unique(labels, &weighted, vec![T::zero(); n]), report)
    }

    /// Reads a SNAP-style edge list: one whitespace-separated pair of
    /// non-negative integer labels per line, `#` comment lines and blank lines
    /// skipped.
    pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<(Self, ParseReport)> {
        let mut pairs = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let lineno = i + 1;
            let line = line.map_err(|e| Error::Parse { line: lineno, message: e.to_string() })?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut tokens = trimmed.split_whitespace();
            let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("expected two node labels, found {:?}", trimmed),
                });
            };
            let parse = |tok: &str| {
                tok.parse::<u64>()
                    .map_err(|_| Error::Parse { line: lineno, message: format!("invalid node label {tok:?}") })
            };
            pairs.push((parse(a)?, parse(b)?));
        }
        if pairs.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(Self::from_labelled_pairs(&pairs))
    }

    pub fn parse_str(text: &str) -> Result<(Self, ParseReport)> {
        Self::parse_edge_list(text.as_bytes())
    }

    /// Writes `u v` per unordered edge (original labels, ascending).
    /// Self-loops are not representable in the format and are skipped.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for u in 0..self.node_count() {
            for (v, _) in self.neighbors(u) {
                if u < v {
                    writeln!(out, "{} {}", self.labels[u], self.labels[v])?;
                }
            }
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    /// Number of distinct non-loop edges.
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    /// `m`: total edge weight, self-loops included once.
    pub fn total_weight(&self) -> T {
        self.total_weight
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn label(&self, u: usize) -> u64 {
        self.labels[u]
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let range = self.offsets[u]..self.offsets[u + 1];
        self.targets[range.clone()].iter().copied().zip(self.weights[range].iter().copied())
    }

    pub fn neighbor_indices(&self, u: usize) -> &[usize] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn self_loop(&self, u: usize) -> T {
        self.self_loops[u]
    }

    /// Weighted degree of `u`, self-loops counted twice.
    pub fn degree(&self, u: usize) -> Result<T> {
        self.degrees.get(u).copied().ok_or(Error::IndexOutOfRange { index: u, len: self.node_count() })
    }

    pub fn degrees(&self) -> &[T] {
        &self.degrees
    }

    /// Number of distinct neighbors, ignoring weights and self-loops.
    pub fn unweighted_degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    /// Components labelled in order of their smallest node.
    pub fn connected_components(&self) -> ComponentLabeling {
        let n = self.node_count();
        let mut component_of = vec![usize::MAX; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..n {
            if component_of[start] != usize::MAX {
                continue;
            }
            component_of[start] = count;
            stack.push(start);
            while let Some(u) = stack.pop() {
                for &v in self.neighbor_indices(u) {
                    if component_of[v] == usize::MAX {
                        component_of[v] = count;
                        stack.push(v);
                    }
                }
            }
            count += 1;
        }
        ComponentLabeling { component_of, component_count: count }
    }

    fn check_partition(&self, p: &Partition) -> Result<()> {
        if p.node_count() != self.node_count() {
            return Err(Error::SizeMismatch { expected: self.node_count(), actual: p.node_count() });
        }
        Ok(())
    }

    /// Per-community boundary weight and degree volume.
    pub fn cut_and_volume(&self, p: &Partition) -> Result<Vec<CutVolume<T>>> {
        self.check_partition(p)?;
        let mut out = vec![CutVolume { cut: T::zero(), volume: T::zero() }; p.community_count()];
        for u in 0..self.node_count() {
            let cu = p.community_of(u);
            out[cu].volume = out[cu].volume + self.degrees[u];
            for (v, w) in self.neighbors(u) {
                if p.community_of(v) != cu {
                    out[cu].cut = out[cu].cut + w;
                }
            }
        }
        Ok(out)
    }

    /// Collapses every community of `p` into one node.
    ///
    /// Inter-community weights are summed onto the connecting edge and
    /// intra-community weight (edges plus member self-loops) becomes the
    /// super-node's self-loop, so degrees, volumes and `m` are preserved.
    pub fn aggregate(&self, p: &Partition) -> Result<Self> {
        self.check_partition(p)?;
        let k = p.community_count();
        let mut loops = vec![T::zero(); k];
        let mut rows: Vec<BTreeMap<usize, T>> = vec![BTreeMap::new(); k];
        for u in 0..self.node_count() {
            let cu = p.community_of(u);
            loops[cu] = loops[cu] + self.self_loops[u];
            for (v, w) in self.neighbors(u) {
                if v <= u {
                    continue;
                }
                let cv = p.community_of(v);
                if cu == cv {
                    loops[cu] = loops[cu] + w;
                } else {
                    let (a, b) = (cu.min(cv), cu.max(cv));
                    let slot = rows[a].entry(b).or_insert(T::zero());
                    *slot = *slot + w;
                }
            }
        }
        let edges: Vec<(usize, usize, T)> =
            rows.into_iter().enumerate().flat_map(|(a, row)| row.into_iter().map(move |(b, w)| (a, b, w))).collect();
        let labels = (0..k as u64).collect();
        Ok(Self::from_sorted_unique(labels, &edges, loops))
    }

    /// Induced subgraph on `nodes` (ascending), keeping original labels.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Self {
        let mut local = vec![usize::MAX; self.node_count()];
        for (i, &u) in nodes.iter().enumerate() {
            local[u] = i;
        }
        let mut edges = Vec::new();
        for (i, &u) in nodes.iter().enumerate() {
            for (v, w) in self.neighbors(u) {
                let j = local[v];
                if j != usize::MAX && i < j {
                    edges.push((i, j, w));
                }
            }
        }
        edges.sort_by_key(|a| (a.0, a.1));
        let labels = nodes.iter().map(|&u| self.labels[u]).collect();
        let loops = nodes.iter().map(|&u| self.self_loops[u]).collect();
        Self::from_sorted_unique(labels, &edges, loops)
    }

    /// Dense adjacency with the diagonal holding twice the self-loop weight,
    /// so row sums equal degrees. Intended for small graphs and tests.
    pub fn dense_adjacency(&self) -> Vec<Vec<T>> {
        let n = self.node_count();
        let mut a = vec![vec![T::zero(); n]; n];
        for u in 0..n {
            a[u][u] = self.self_loops[u] + self.self_loops[u];
            for (v, w) in self.neighbors(u) {
                a[u][v] = w;
            }
        }
        a
    }
}
