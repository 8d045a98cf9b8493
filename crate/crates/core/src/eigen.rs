//! Dense symmetric eigensolver based on classical Jacobi rotations.
//!
//! This is deliberately independent of the closed-form spectrum in
//! [`crate::chain`]: it knows nothing about the chain and is used to check
//! the analytic modes against a brute-force diagonalization.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Square row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: bad.len(),
            });
        }
        Ok(Self::from_fn(n, |i, j| rows[i][j]))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.n + j] = value;
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.n.max(1)).map(<[T]>::to_vec).collect()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        Ok(Self::from_fn(self.n, |i, j| {
            (0..self.n).map(|k| self.get(i, k) * other.get(k, j)).sum()
        }))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |acc, (&a, &b)| acc.max((a - b).abs()))
    }

    /// Largest `|a_ij - a_ji|` and where it occurs.
    pub fn asymmetry(&self) -> (usize, usize, T) {
        let mut worst = (0, 0, T::zero());
        for i in 0..self.n {
            for j in i + 1..self.n {
                let d = (self.get(i, j) - self.get(j, i)).abs();
                if d > worst.2 {
                    worst = (i, j, d);
                }
            }
        }
        worst
    }

    pub fn is_symmetric(&self, tol: T) -> bool {
        self.asymmetry().2 <= tol
    }
}

/// Full eigendecomposition `A = Q·Λ·Qᵀ` with ascending eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult<T> {
    pub eigenvalues: Vec<T>,
    /// Column `i` is the eigenvector of `eigenvalues[i]`.
    pub eigenvectors: DenseMatrix<T>,
    /// Number of plane rotations applied.
    pub rotations: usize,
    /// `max |A·v - λ·v|` over all eigenpairs, measured on the input matrix.
    pub residual: T,
}

impl<T: Scalar> EigenResult<T> {
    pub fn eigenvector(&self, i: usize) -> Vec<T> {
        self.eigenvectors.column(i)
    }

    pub fn reconstruct(&self) -> DenseMatrix<T> {
        let q = &self.eigenvectors;
        let n = q.dim();
        DenseMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| q.get(i, k) * self.eigenvalues[k] * q.get(j, k))
                .sum()
        })
    }
}

fn max_residual<T: Scalar>(a: &DenseMatrix<T>, values: &[T], vectors: &DenseMatrix<T>) -> T {
    let n = a.dim();
    let mut worst = T::zero();
    for (k, &lambda) in values.iter().enumerate() {
        for i in 0..n {
            let av: T = (0..n).map(|j| a.get(i, j) * vectors.get(j, k)).sum();
            worst = worst.max((av - lambda * vectors.get(i, k)).abs());
        }
    }
    worst
}

/// Column of the largest-magnitude strictly-upper entry in row `r`
/// (lowest column wins ties).
fn scan_row<T: Scalar>(a: &DenseMatrix<T>, r: usize) -> usize {
    let mut best = r + 1;
    for c in r + 2..a.dim() {
        if a.get(r, c).abs() > a.get(r, best).abs() {
            best = c;
        }
    }
    best
}

struct Pivots {
    /// `row_max[r]` is the pivot column for row `r`, for `r < n - 1`.
    row_max: Vec<usize>,
}

impl Pivots {
    fn new<T: Scalar>(a: &DenseMatrix<T>) -> Self {
        let rows = a.dim().saturating_sub(1);
        Self {
            row_max: (0..rows).map(|r| scan_row(a, r)).collect(),
        }
    }

    /// Largest off-diagonal entry; ties go to the lowest row, then column.
    fn largest<T: Scalar>(&self, a: &DenseMatrix<T>) -> (usize, usize, T) {
        let mut best = (0, self.row_max[0], a.get(0, self.row_max[0]).abs());
        for (r, &c) in self.row_max.iter().enumerate().skip(1) {
            let v = a.get(r, c).abs();
            if v > best.2 {
                best = (r, c, v);
            }
        }
        best
    }

    fn refresh<T: Scalar>(&mut self, a: &DenseMatrix<T>, p: usize, q: usize) {
        for r in 0..self.row_max.len() {
            if r == p || r == q || self.row_max[r] == p || self.row_max[r] == q {
                self.row_max[r] = scan_row(a, r);
                continue;
            }
            let mut best = self.row_max[r];
            for c in [p, q] {
                if c > r {
                    let (v, b) = (a.get(r, c).abs(), a.get(r, best).abs());
                    if v > b || (v == b && c < best) {
                        best = c;
                    }
                }
            }
            self.row_max[r] = best;
        }
    }
}

/// Diagonalizes a symmetric matrix by repeatedly annihilating its largest
/// off-diagonal element with a plane rotation.
///
/// `tolerance` bounds the returned residual `max |A·v - λ·v|`. At most
/// `64·N²` rotations are attempted.
pub fn symmetric_eigen<T: Scalar>(matrix: &DenseMatrix<T>, tolerance: T) -> Result<EigenResult<T>> {
    if tolerance.is_nan() || tolerance <= T::zero() {
        return Err(Error::InvalidParameter {
            name: "tolerance",
            constraint: "tolerance > 0",
        });
    }
    let (row, col, asym) = matrix.asymmetry();
    let scale = matrix
        .data
        .iter()
        .fold(T::one(), |acc, &x| acc.max(x.abs()));
    if asym > T::consistency_tol() * scale {
        return Err(Error::NotSymmetric {
            row,
            col,
            difference: asym.to_f64().unwrap_or(f64::NAN),
        });
    }

    let n = matrix.dim();
    let mut a = matrix.clone();
    let mut v = DenseMatrix::identity(n);
    let mut rotations = 0usize;
    let cap = 64 * n * n;

    if n > 1 {
        let mut pivots = Pivots::new(&a);
        let mut threshold = tolerance / (T::lit(2.0) * T::from_usize_lossy(n).sqrt());
        loop {
            let (p, q, magnitude) = pivots.largest(&a);
            if magnitude <= threshold {
                let values: Vec<T> = (0..n).map(|i| a.get(i, i)).collect();
                if max_residual(matrix, &values, &v) <= tolerance || magnitude == T::zero() {
                    break;
                }
                // Roundoff in the accumulated rotations dominates; keep
                // rotating until the off-diagonal part vanishes exactly.
                threshold = T::zero();
                continue;
            }
            if rotations >= cap {
                let values: Vec<T> = (0..n).map(|i| a.get(i, i)).collect();
                return Err(Error::NoConvergence {
                    rotations,
                    residual: max_residual(matrix, &values, &v)
                        .to_f64()
                        .unwrap_or(f64::NAN),
                });
            }
            rotate(&mut a, &mut v, p, q);
            pivots.refresh(&a, p, q);
            rotations += 1;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).partial_cmp(&a.get(j, j)).expect("finite eigenvalues"));
    let eigenvalues: Vec<T> = order.iter().map(|&i| a.get(i, i)).collect();
    let eigenvectors = DenseMatrix::from_fn(n, |r, c| v.get(r, order[c]));
    let residual = max_residual(matrix, &eigenvalues, &eigenvectors);
    if residual > tolerance {
        return Err(Error::NoConvergence {
            rotations,
            residual: residual.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(EigenResult {
        eigenvalues,
        eigenvectors,
        rotations,
        residual,
    })
}

/// One Jacobi rotation zeroing `a[p][q]`, accumulated into `v`.
fn rotate<T: Scalar>(a: &mut DenseMatrix<T>, v: &mut DenseMatrix<T>, p: usize, q: usize) {
    let n = a.dim();
    let apq = a.get(p, q);
    let theta = (a.get(q, q) - a.get(p, p)) / (T::lit(2.0) * apq);
    let t = if theta.abs() > T::lit(1e150) {
        T::lit(0.5) / theta
    } else {
        let t = (theta.abs() + (theta * theta + T::one()).sqrt()).recip();
        if theta < T::zero() {
            -t
        } else {
            t
        }
    };
    let c = (t * t + T::one()).sqrt().recip();
    let s = t * c;

    a.set(p, p, a.get(p, p) - t * apq);
    a.set(q, q, a.get(q, q) + t * apq);
    a.set(p, q, T::zero());
    a.set(q, p, T::zero());
    for r in 0..n {
        if r == p || r == q {
            continue;
        }
        let arp = a.get(r, p);
        let arq = a.get(r, q);
        let new_rp = c * arp - s * arq;
        let new_rq = s * arp + c * arq;
        a.set(r, p, new_rp);
        a.set(p, r, new_rp);
        a.set(r, q, new_rq);
        a.set(q, r, new_rq);
    }
    for r in 0..n {
        let vrp = v.get(r, p);
        let vrq = v.get(r, q);
        v.set(r, p, c * vrp - s * vrq);
        v.set(r, q, s * vrp + c * vrq);
    }
}
