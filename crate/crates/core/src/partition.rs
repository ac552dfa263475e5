//! Flat node-to-community assignments.

use std::collections::HashMap;
use std::io::Write;

/// Canonical partition: community indices are `0..k`, numbered in order of
/// first appearance along the node order, and every community is non-empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    community_of: Vec<usize>,
    sizes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommunitySizeSummary {
    pub count: usize,
    pub min: usize,
    pub median: usize,
    pub max: usize,
    pub top_sizes: Vec<usize>,
}

impl Partition {
    /// Relabels arbitrary community labels to `0..k` by first occurrence.
    pub fn canonicalize(raw: &[usize]) -> Self {
        let mut map: HashMap<usize, usize> = HashMap::new();
        let mut sizes = Vec::new();
        let community_of = raw
            .iter()
            .map(|&label| {
                let next = map.len();
                let c = *map.entry(label).or_insert(next);
                if c == sizes.len() {
                    sizes.push(0);
                }
                sizes[c] += 1;
                c
            })
            .collect();
        Partition { community_of, sizes }
    }

    pub fn singletons(n: usize) -> Self {
        Partition { community_of: (0..n).collect(), sizes: vec![1; n] }
    }

    pub fn all_in_one(n: usize) -> Self {
        Partition { community_of: vec![0; n], sizes: if n == 0 { Vec::new() } else { vec![n] } }
    }

    pub fn node_count(&self) -> usize {
        self.community_of.len()
    }

    pub fn community_count(&self) -> usize {
        self.sizes.len()
    }

    #[inline]
    pub fn community_of(&self, u: usize) -> usize {
        self.community_of[u]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.community_of
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Member lists per community, each ascending.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self.sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
        for (u, &c) in self.community_of.iter().enumerate() {
            out[c].push(u);
        }
        out
    }

    /// Maps each node of a coarse graph's partition back through `self`,
    /// where `self` assigns fine nodes to coarse nodes.
    pub fn compose(&self, coarse: &Partition) -> Partition {
        let raw: Vec<usize> = self.community_of.iter().map(|&c| coarse.community_of(c)).collect();
        Partition::canonicalize(&raw)
    }

    /// Indices of the `k` largest communities, ties to the lower index.
    pub fn top_k_communities(&self, k: usize) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.community_count()).collect();
        order.sort_by(|&a, &b| self.sizes[b].cmp(&self.sizes[a]).then(a.cmp(&b)));
        order.truncate(k);
        order.sort_unstable();
        order
    }

    pub fn size_summary(&self, top: usize) -> CommunitySizeSummary {
        let mut sorted = self.sizes.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let count = sorted.len();
        CommunitySizeSummary {
            count,
            min: sorted.last().copied().unwrap_or(0),
            median: if count == 0 { 0 } else { sorted[count / 2] },
            max: sorted.first().copied().unwrap_or(0),
            top_sizes: sorted.into_iter().take(top).collect(),
        }
    }

    /// Membership CSV: `node,community` with original labels, ascending.
    /// `labels` must be sorted ascending and aligned with node indices.
    pub fn write_csv<W: Write>(&self, labels: &[u64], mut out: W) -> std::io::Result<()> {
        writeln!(out, "node,community")?;
        for (label, c) in labels.iter().zip(&self.community_of) {
            writeln!(out, "{label},{c}")?;
        }
        Ok(())
    }
}
