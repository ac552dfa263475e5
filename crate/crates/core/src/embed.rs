//! Spectral node embedding.

use std::io::Write;

use crate::eigen::{top_eigenpairs, EigenOptions, LinearOperator};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmbeddingKind {
    LaplacianRows,
    RowNormalized,
}

/// Dense `node_count × dim` coordinates, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding<T> {
    coords: Vec<T>,
    dim: usize,
    kind: EmbeddingKind,
    /// Eigenvalues backing each column, empty for hand-built point sets.
    spectrum: Vec<T>,
}

impl<T: Scalar> Embedding<T> {
    /// Wraps raw points. Every row must have the same length and be finite.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        let mut coords = Vec::with_capacity(rows.len() * dim);
        for r in rows {
            if r.len() != dim {
                return Err(Error::SizeMismatch { expected: dim, actual: r.len() });
            }
            if r.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidArgument("non-finite coordinate".into()));
            }
            coords.extend_from_slice(r);
        }
        Ok(Embedding { coords, dim, kind: EmbeddingKind::LaplacianRows, spectrum: Vec::new() })
    }

    pub fn len(&self) -> usize {
        if self.dim == 0 {
            0
        } else {
            self.coords.len() / self.dim
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> EmbeddingKind {
        self.kind
    }

    pub fn spectrum(&self) -> &[T] {
        &self.spectrum
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> + '_ {
        self.coords.chunks_exact(self.dim.max(1))
    }

    pub fn as_slice(&self) -> &[T] {
        &self.coords
    }

    /// Scales every row to unit length; zero rows become the first basis vector.
    pub fn row_normalized(&self) -> Self {
        let mut coords = self.coords.clone();
        for row in coords.chunks_exact_mut(self.dim.max(1)) {
            let norm = row.iter().map(|&x| x * x).sum::<T>().sqrt();
            if norm > T::zero() {
                row.iter_mut().for_each(|x| *x = *x / norm);
            } else if let Some(first) = row.first_mut() {
                *first = T::one();
            }
        }
        Embedding { coords, dim: self.dim, kind: EmbeddingKind::RowNormalized, spectrum: self.spectrum.clone() }
    }

    /// CSV with header `node,c0,...,c{dim-1}`.
    pub fn write_csv<W: Write>(&self, labels: &[u64], mut out: W) -> std::io::Result<()> {
        write!(out, "node")?;
        for c in 0..self.dim {
            write!(out, ",c{c}")?;
        }
        writeln!(out)?;
        for (label, row) in labels.iter().zip(self.rows()) {
            write!(out, "{label}")?;
            for x in row {
                write!(out, ",{x:e}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// `D^{-1/2} A D^{-1/2}` with zero rows and columns for isolated nodes.
pub struct NormalizedAdjacency<'g, T> {
    graph: &'g Graph<T>,
    inv_sqrt_degree: Vec<T>,
}

impl<'g, T: Scalar> NormalizedAdjacency<'g, T> {
    pub fn new(graph: &'g Graph<T>) -> Self {
        let inv_sqrt_degree =
            graph.degrees().iter().map(|&d| if d > T::zero() { T::one() / d.sqrt() } else { T::zero() }).collect();
        NormalizedAdjacency { graph, inv_sqrt_degree }
    }
}

impl<T: Scalar> LinearOperator<T> for NormalizedAdjacency<'_, T> {
    fn dim(&self) -> usize {
        self.graph.node_count()
    }

    fn apply(&self, x: &[T], y: &mut [T]) {
        let s = &self.inv_sqrt_degree;
        for (u, yu) in y.iter_mut().enumerate() {
            let loop_w = self.graph.self_loop(u);
            let mut acc = (loop_w + loop_w) * s[u] * x[u];
            for (v, w) in self.graph.neighbors(u) {
                acc = acc + w * s[v] * x[v];
            }
            *yu = acc * s[u];
        }
    }
}

/// Embeds nodes with the `dim` leading eigenpairs of the normalized adjacency
/// operator. Column `j` holds `λ_j v_j`, so directions with small eigenvalues
/// carry little weight and a large `dim` on a small graph stays informative.
pub fn spectral_embedding<T: Scalar>(graph: &Graph<T>, dim: usize, opts: &EigenOptions<T>) -> Result<Embedding<T>> {
    let n = graph.node_count();
    if dim == 0 || dim >= n {
        return Err(Error::InvalidArgument(format!("embedding dimension {dim} must lie in 1..{n}")));
    }
    let op = NormalizedAdjacency::new(graph);
    let eig = top_eigenpairs(&op, dim, opts)?;
    let mut coords = vec![T::zero(); n * dim];
    for (j, (value, vector)) in eig.values.iter().zip(&eig.vectors).enumerate() {
        // Fix the sign so the largest-magnitude entry is positive.
        let pivot = vector.iter().fold(T::zero(), |p, &x| if x.abs() > p.abs() { x } else { p });
        let sign = if pivot < T::zero() { -T::one() } else { T::one() };
        for (u, &x) in vector.iter().enumerate() {
            coords[u * dim + j] = if graph.degrees()[u] > T::zero() { sign * *value * x } else { T::zero() };
        }
    }
    Ok(Embedding { coords, dim, kind: EmbeddingKind::LaplacianRows, spectrum: eig.values })
}

/// Embedding dimension used when the caller asks for `requested` on `graph`.
pub fn capped_dim(requested: usize, node_count: usize) -> usize {
    requested.min(node_count.saturating_sub(1)).max(1)
}
