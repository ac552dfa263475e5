//! Degree statistics and hubs of the raw (unweighted) graph.

use std::collections::BTreeMap;
use std::io::Write;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeSummary {
    /// Degree to node count, ascending by degree.
    pub histogram: BTreeMap<usize, usize>,
    /// `(degree, fraction of nodes with degree ≤ that value)`, ascending.
    pub cdf: Vec<(usize, f64)>,
    pub max_degree: usize,
    pub node_count: usize,
}

impl DegreeSummary {
    /// Fraction of nodes whose degree is at most `threshold`.
    pub fn fraction_leq(&self, threshold: usize) -> f64 {
        let count: usize = self.histogram.range(..=threshold).map(|(_, &c)| c).sum();
        if self.node_count == 0 {
            0.0
        } else {
            count as f64 / self.node_count as f64
        }
    }

    pub fn write_histogram_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "degree,count")?;
        for (d, c) in &self.histogram {
            writeln!(out, "{d},{c}")?;
        }
        Ok(())
    }
}

pub fn degree_summary<T: Scalar>(g: &Graph<T>) -> DegreeSummary {
    let n = g.node_count();
    let mut histogram = BTreeMap::new();
    for u in 0..n {
        *histogram.entry(g.unweighted_degree(u)).or_insert(0) += 1;
    }
    let mut running = 0usize;
    let cdf = histogram
        .iter()
        .map(|(&d, &c)| {
            running += c;
            // The last entry is n / n, exactly 1.0.
            (d, running as f64 / n as f64)
        })
        .collect();
    let max_degree = histogram.keys().next_back().copied().unwrap_or(0);
    DegreeSummary { histogram, cdf, max_degree, node_count: n }
}

/// `degree / (n − 1)` with unweighted degrees.
pub fn degree_centrality<T: Scalar>(g: &Graph<T>) -> Result<Vec<f64>> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::InvalidArgument(format!("degree centrality needs at least 2 nodes, got {n}")));
    }
    let denom = (n - 1) as f64;
    Ok((0..n).map(|u| g.unweighted_degree(u) as f64 / denom).collect())
}

/// The `count` most central nodes as `(label, centrality)`, descending,
/// ties broken by ascending label.
pub fn top_hubs<T: Scalar>(g: &Graph<T>, count: usize) -> Result<Vec<(u64, f64)>> {
    let centrality = degree_centrality(g)?;
    let mut order: Vec<usize> = (0..g.node_count()).collect();
    // Labels ascend with index, so index order is label order.
    order.sort_by(|&a, &b| g.unweighted_degree(b).cmp(&g.unweighted_degree(a)).then(a.cmp(&b)));
    Ok(order.into_iter().take(count).map(|u| (g.label(u), centrality[u])).collect())
}

pub fn write_cdf_csv<W: Write>(summary: &DegreeSummary, mut out: W) -> std::io::Result<()> {
    writeln!(out, "degree,cumulative_fraction")?;
    for (d, f) in &summary.cdf {
        writeln!(out, "{d},{f}")?;
    }
    Ok(())
}

pub fn write_centrality_csv<W: Write>(labels: &[u64], centrality: &[f64], mut out: W) -> std::io::Result<()> {
    writeln!(out, "node,centrality")?;
    for (l, c) in labels.iter().zip(centrality) {
        writeln!(out, "{l},{c}")?;
    }
    Ok(())
}
