//! Extremal eigenpairs of symmetric operators.
//!
//! The solver runs Lanczos with full reorthogonalization in rounds. Each round
//! works in the orthogonal complement of the eigenvectors locked so far, so
//! repeated eigenvalues (invisible to a single Krylov sequence) surface in
//! later rounds. Rounds continue until `count` pairs are locked and a fresh
//! round finds nothing above the smallest of them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A symmetric linear map applied matrix-free.
pub trait LinearOperator<T> {
    fn dim(&self) -> usize;
    /// `y = M x`; `y` arrives with arbitrary contents.
    fn apply(&self, x: &[T], y: &mut [T]);
}

/// Row-major dense symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSymmetric<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseSymmetric<T> {
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::SizeMismatch { expected: n, actual: r.len() });
            }
            data.extend_from_slice(r);
        }
        for i in 0..n {
            for j in 0..i {
                if data[i * n + j] != data[j * n + i] {
                    return Err(Error::InvalidArgument(format!("matrix not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(DenseSymmetric { n, data })
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }
}

impl<T: Scalar> LinearOperator<T> for DenseSymmetric<T> {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[T], y: &mut [T]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = dot(&self.data[i * self.n..(i + 1) * self.n], x);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions<T> {
    /// Relative residual tolerance: `‖Mv − λv‖ ≤ tol · ‖M‖`.
    pub tol: T,
    /// Budget of operator applications across all rounds.
    pub max_iter: usize,
    pub seed: u64,
}

impl<T: Scalar> Default for EigenOptions<T> {
    fn default() -> Self {
        EigenOptions { tol: T::lit(1e-8), max_iter: 10_000, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult<T> {
    /// Descending.
    pub values: Vec<T>,
    /// Orthonormal eigenvectors, `vectors[i]` pairs with `values[i]`.
    pub vectors: Vec<Vec<T>>,
    /// Operator applications performed.
    pub iterations: usize,
    /// Largest residual norm `‖Mv − λv‖` over the returned pairs.
    pub residual: T,
}

/// The `count` algebraically largest eigenpairs of `op`.
pub fn top_eigenpairs<T, Op>(op: &Op, count: usize, opts: &EigenOptions<T>) -> Result<EigenResult<T>>
where
    T: Scalar,
    Op: LinearOperator<T> + ?Sized,
{
    let n = op.dim();
    if count > n {
        return Err(Error::InvalidArgument(format!("requested {count} eigenpairs of a {n}-dimensional operator")));
    }
    if !(opts.tol > T::zero()) {
        return Err(Error::InvalidArgument("eigensolver tolerance must be positive".into()));
    }
    let tol = opts.tol.max(T::epsilon() * T::lit(64.0));
    let mut solver = Solver { op, n, tol, budget: opts.max_iter, used: 0, seed: opts.seed, scale: T::zero() };
    let mut locked: Vec<(T, Vec<T>)> = Vec::new();
    let mut round = 0u64;
    while count > 0 && locked.len() < n {
        let want = count.saturating_sub(locked.len()).max(1);
        let threshold = if locked.len() >= count { Some(kth_largest(&locked, count)) } else { None };
        let found = solver.round(&locked, want, round)?;
        round += 1;
        let mut added = 0;
        for (value, vector) in found {
            if let Some(t) = threshold {
                if value <= t + solver.tol * solver.scale {
                    break;
                }
            }
            locked.push((value, vector));
            added += 1;
        }
        if added == 0 {
            break;
        }
    }
    locked.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite eigenvalues"));
    locked.truncate(count);

    let mut residual = T::zero();
    let mut buf = vec![T::zero(); n];
    for (value, vector) in &locked {
        op.apply(vector, &mut buf);
        let r: T = buf.iter().zip(vector).map(|(&mv, &v)| (mv - *value * v).powi(2)).sum::<T>().sqrt();
        residual = residual.max(r);
    }
    let (values, vectors) = locked.into_iter().unzip();
    Ok(EigenResult { values, vectors, iterations: solver.used, residual })
}

fn kth_largest<T: Scalar>(locked: &[(T, Vec<T>)], k: usize) -> T {
    let mut vals: Vec<T> = locked.iter().map(|p| p.0).collect();
    vals.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
    vals[k - 1]
}

struct Solver<'a, T, Op: ?Sized> {
    op: &'a Op,
    n: usize,
    tol: T,
    budget: usize,
    used: usize,
    seed: u64,
    /// Running estimate of `‖M‖` from the extreme Ritz values seen.
    scale: T,
}

impl<T: Scalar, Op: LinearOperator<T> + ?Sized> Solver<'_, T, Op> {
    /// One Lanczos run orthogonal to `locked`. Returns the leading Ritz pairs
    /// that converged (descending, at least one), up to `want`.
    fn round(&mut self, locked: &[(T, Vec<T>)], want: usize, round: u64) -> Result<Vec<(T, Vec<T>)>> {
        let n = self.n;
        let room = n - locked.len();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ round.wrapping_mul(0x9E37_79B9_7F4A_7C15));

        let mut q: Vec<T> = (0..n).map(|_| T::lit(rng.gen_range(-1.0..1.0))).collect();
        let mut basis: Vec<Vec<T>> = Vec::new();
        let mut norm = T::zero();
        for _ in 0..2 {
            orthogonalize(&mut q, locked.iter().map(|p| p.1.as_slice()));
            norm = normalize(&mut q);
        }
        if norm <= T::epsilon() {
            return Ok(Vec::new());
        }

        let mut alpha: Vec<T> = Vec::new();
        let mut beta: Vec<T> = Vec::new();
        let mut w = vec![T::zero(); n];
        loop {
            if self.used >= self.budget {
                return Err(Error::NoConvergence {
                    iterations: self.used,
                    residual: self.best_residual(&alpha, &beta).to_f64_lossy(),
                });
            }
            self.op.apply(&q, &mut w);
            self.used += 1;
            let a = dot(&q, &w);
            alpha.push(a);
            basis.push(std::mem::take(&mut q));
            for _ in 0..2 {
                orthogonalize(&mut w, basis.iter().map(Vec::as_slice));
                orthogonalize(&mut w, locked.iter().map(|p| p.1.as_slice()));
            }
            let b = w.iter().map(|&x| x * x).sum::<T>().sqrt();
            let j = alpha.len();

            let invariant = b <= T::epsilon() * T::lit(16.0) * self.scale.max(a.abs()) || b == T::zero() || j == room;
            if invariant || j.is_multiple_of(5) || j == want {
                let (values, last_row) = tridiagonal_eigen(&alpha, &beta, Rows::Last);
                let top = values.iter().fold(T::zero(), |s, &v| s.max(v.abs()));
                self.scale = self.scale.max(top);
                let thresh = self.tol * self.scale.max(T::min_positive_value());
                let order = descending(&values);
                let converged =
                    order.iter().take(want).take_while(|&&i| invariant || (b * last_row[i]).abs() <= thresh).count();
                if converged >= want || invariant {
                    let converged = converged.max(1);
                    let (values, z) = tridiagonal_eigen(&alpha, &beta, Rows::All);
                    return Ok(order
                        .into_iter()
                        .take(converged)
                        .map(|i| {
                            let mut v = vec![T::zero(); n];
                            for (k, qk) in basis.iter().enumerate() {
                                axpy(z[k * j + i], qk, &mut v);
                            }
                            normalize(&mut v);
                            (values[i], v)
                        })
                        .collect());
                }
            }

            beta.push(b);
            let inv = T::one() / b;
            q = w.iter().map(|&x| x * inv).collect();
        }
    }

    fn best_residual(&self, alpha: &[T], beta: &[T]) -> T {
        if alpha.is_empty() || beta.len() < alpha.len() {
            return T::infinity();
        }
        let b = beta[alpha.len() - 1];
        let (_, last) = tridiagonal_eigen(alpha, &beta[..alpha.len() - 1], Rows::Last);
        last.iter().fold(T::infinity(), |m, &z| m.min((b * z).abs()))
    }
}

fn descending<T: Scalar>(values: &[T]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).expect("finite Ritz values").then(a.cmp(&b)));
    order
}

#[inline]
pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |s, (&x, &y)| s + x * y)
}

#[inline]
fn axpy<T: Scalar>(alpha: T, x: &[T], y: &mut [T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = *yi + alpha * xi;
    }
}

fn orthogonalize<'v, T: Scalar>(v: &mut [T], against: impl Iterator<Item = &'v [T]>) {
    for u in against {
        let c = dot(u, v);
        axpy(-c, u, v);
    }
}

fn normalize<T: Scalar>(v: &mut [T]) -> T {
    let norm = v.iter().map(|&x| x * x).sum::<T>().sqrt();
    if norm > T::zero() {
        let inv = T::one() / norm;
        v.iter_mut().for_each(|x| *x = *x * inv);
    }
    norm
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Rows {
    /// Only the last row of the eigenvector matrix.
    Last,
    All,
}

/// Eigen-decomposition of the symmetric tridiagonal matrix with diagonal
/// `diag` and off-diagonal `off` (`off.len() == diag.len() - 1`) by implicit
/// QL with Wilkinson shifts.
///
/// Returns the eigenvalues (unsorted) and the requested rows of the
/// eigenvector matrix, row-major: entry `(k, i)` is component `k` of
/// eigenvector `i`.
fn tridiagonal_eigen<T: Scalar>(diag: &[T], off: &[T], rows: Rows) -> (Vec<T>, Vec<T>) {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e: Vec<T> = off.iter().copied().chain(std::iter::once(T::zero())).collect();
    e.truncate(n);
    let row_count = if rows == Rows::All { n } else { 1 };
    let mut z = vec![T::zero(); row_count * n];
    match rows {
        Rows::All => (0..n).for_each(|i| z[i * n + i] = T::one()),
        Rows::Last => z[n - 1] = T::one(),
    }
    let two = T::lit(2.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 200 {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + if g >= T::zero() { r.abs() } else { -r.abs() });
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..row_count {
                    let zi = z[k * n + i];
                    let zi1 = z[k * n + i + 1];
                    z[k * n + i + 1] = s * zi + c * zi1;
                    z[k * n + i] = c * zi - s * zi1;
                }
            }
            if underflow {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    (d, z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> EigenOptions<f64> {
        EigenOptions { tol: 1e-10, max_iter: 10_000, seed: 7 }
    }

    #[test]
    fn tridiagonal_two_by_two() {
        let (vals, z) = tridiagonal_eigen(&[2.0f64, 2.0], &[1.0], Rows::All);
        let mut v = vals.clone();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((v[0] - 1.0).abs() < 1e-14 && (v[1] - 3.0).abs() < 1e-14);
        for i in 0..2 {
            let norm = (z[i] * z[i] + z[2 + i] * z[2 + i]).sqrt();
            assert!((norm - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn k2_adjacency() {
        let m = DenseSymmetric::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let r = top_eigenpairs(&m, 1, &opts()).unwrap();
        assert!((r.values[0] - 1.0).abs() < 1e-12);
        let v = &r.vectors[0];
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((v[0].abs() - h).abs() < 1e-10 && (v[0] - v[1]).abs() < 1e-10);
    }

    #[test]
    fn k2_modularity_matrix() {
        let m = DenseSymmetric::from_rows(&[vec![-0.5, 0.5], vec![0.5, -0.5]]).unwrap();
        let r = top_eigenpairs(&m, 2, &opts()).unwrap();
        assert!(r.values[0].abs() < 1e-12);
        assert!((r.values[1] + 1.0).abs() < 1e-12);
        assert!((r.vectors[0][0] - r.vectors[0][1]).abs() < 1e-10);
    }

    #[test]
    fn repeated_eigenvalues_are_all_found() {
        // Two disjoint K2 blocks: spectrum {1, 1, -1, -1}.
        let rows = vec![
            vec![0.0, 1.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0, 0.0],
        ];
        let m = DenseSymmetric::from_rows(&rows).unwrap();
        let r = top_eigenpairs(&m, 3, &opts()).unwrap();
        assert!((r.values[0] - 1.0).abs() < 1e-12);
        assert!((r.values[1] - 1.0).abs() < 1e-12);
        assert!((r.values[2] + 1.0).abs() < 1e-12);
        assert!(dot(&r.vectors[0], &r.vectors[1]).abs() < 1e-10);
    }

    #[test]
    fn identity_and_zero_requests() {
        let m = DenseSymmetric::from_rows(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        let r = top_eigenpairs(&m, 3, &opts()).unwrap();
        assert!(r.values.iter().all(|v| (v - 1.0).abs() < 1e-12));
        assert!(top_eigenpairs(&m, 0, &opts()).unwrap().values.is_empty());
        assert!(matches!(top_eigenpairs(&m, 4, &opts()), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn budget_exhaustion_reports_no_convergence() {
        let rows: Vec<Vec<f64>> =
            (0..30).map(|i| (0..30).map(|j| 1.0 / (1.0 + (i as f64 - j as f64).abs())).collect()).collect();
        let m = DenseSymmetric::from_rows(&rows).unwrap();
        let tight = EigenOptions { tol: 1e-12, max_iter: 3, seed: 1 };
        assert!(matches!(top_eigenpairs(&m, 2, &tight), Err(Error::NoConvergence { iterations: 3, .. })));
    }

    #[test]
    fn f32_operator() {
        let m = DenseSymmetric::from_rows(&[vec![2.0f32, 1.0], vec![1.0, 2.0]]).unwrap();
        let r = top_eigenpairs(&m, 1, &EigenOptions::default()).unwrap();
        assert!((r.values[0] - 3.0).abs() < 1e-5);
    }
}
