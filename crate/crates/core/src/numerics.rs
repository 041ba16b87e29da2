//! Small dense linear-algebra kernel.
//!
//! Two routines live here: a Gaussian-elimination solver with partial
//! pivoting and a cyclic Jacobi eigensolver for real symmetric matrices. The
//! systems this crate builds are at most a few hundred unknowns, so neither
//! routine tries to be clever about cache use.

use std::fmt;
use std::ops::{Index, IndexMut};

use thiserror::Error;

/// Pivots smaller than this fraction of their row scale are treated as zero.
pub const PIVOT_TOLERANCE: f64 = 1e-12;

/// Componentwise asymmetry accepted by [`symmetric_eigenvalues`].
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Default off-diagonal tolerance for the Jacobi iteration.
pub const DEFAULT_EIGEN_TOLERANCE: f64 = 1e-10;

/// Sweep budget before the Jacobi iteration gives up.
pub const MAX_SWEEPS: usize = 50;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("matrix rows must all have length {expected}, row {row} has {found}")]
    NotSquare { expected: usize, row: usize, found: usize },
    #[error("dimension mismatch: matrix is {matrix}x{matrix}, vector has length {vector}")]
    DimensionMismatch { matrix: usize, vector: usize },
    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is singular (pivot {pivot:e} in column {column})")]
    Singular { column: usize, pivot: f64 },
    #[error("matrix is not symmetric at ({row}, {col}): {upper} vs {lower}")]
    NotSymmetric { row: usize, col: usize, upper: f64, lower: f64 },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },
}

/// Square matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds a matrix from rows, rejecting ragged input and non-finite entries.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, NumericsError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (row, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n {
                return Err(NumericsError::NotSquare { expected: n, row, found: r.len() });
            }
            if let Some(col) = r.iter().position(|v| !v.is_finite()) {
                return Err(NumericsError::NonFinite { row, col });
            }
            data.extend_from_slice(r);
        }
        Ok(Self { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>, NumericsError> {
        if x.len() != self.n {
            return Err(NumericsError::DimensionMismatch { matrix: self.n, vector: x.len() });
        }
        Ok((0..self.n).map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum()).collect())
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Returns `PᵀAP` where `P` maps basis vector `k` to `perm[k]`,
    /// i.e. entry `(i, j)` of the result is `A[perm[i], perm[j]]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n, "permutation length must match dimension");
        let mut p = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                p[(i, j)] = self[(perm[i], perm[j])];
            }
        }
        p
    }

    /// `A - shift·I`.
    pub fn shifted(&self, shift: f64) -> Self {
        let mut s = self.clone();
        for i in 0..self.n {
            s[(i, i)] -= shift;
        }
        s
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.first_asymmetry(tol).is_none()
    }

    fn first_asymmetry(&self, tol: f64) -> Option<(usize, usize)> {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if (self[(i, j)] - self[(j, i)]).abs() > tol {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Determinant by elimination with partial pivoting. Singular input yields 0.
    pub fn determinant(&self) -> f64 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for k in 0..n {
            let p = pivot_row(&a, n, k);
            if a[p * n + k] == 0.0 {
                return 0.0;
            }
            if p != k {
                swap_rows(&mut a, n, p, k);
                det = -det;
            }
            let pivot = a[k * n + k];
            det *= pivot;
            for i in (k + 1)..n {
                let f = a[i * n + k] / pivot;
                for j in k..n {
                    a[i * n + j] -= f * a[k * n + j];
                }
            }
        }
        det
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

impl fmt::Display for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let cells: Vec<String> = self.row(i).iter().map(|v| format!("{v:>10.6}")).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

// Row with the largest magnitude in column `k` at or below the diagonal.
// Ties go to the smallest row index.
fn pivot_row(a: &[f64], n: usize, k: usize) -> usize {
    let mut best = k;
    let mut best_mag = a[k * n + k].abs();
    for i in (k + 1)..n {
        let mag = a[i * n + k].abs();
        if mag > best_mag {
            best = i;
            best_mag = mag;
        }
    }
    best
}

fn swap_rows(a: &mut [f64], n: usize, r1: usize, r2: usize) {
    for j in 0..n {
        a.swap(r1 * n + j, r2 * n + j);
    }
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
///
/// A pivot is rejected as singular when its magnitude falls below
/// [`PIVOT_TOLERANCE`] times the largest absolute entry of the original row it
/// came from.
pub fn solve_linear(a: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>, NumericsError> {
    let n = a.dim();
    if b.len() != n {
        return Err(NumericsError::DimensionMismatch { matrix: n, vector: b.len() });
    }
    let mut m = a.data.clone();
    let mut rhs = b.to_vec();
    let mut scale: Vec<f64> = (0..n).map(|i| a.row(i).iter().fold(0.0_f64, |s, v| s.max(v.abs()))).collect();

    for k in 0..n {
        let p = pivot_row(&m, n, k);
        if p != k {
            swap_rows(&mut m, n, p, k);
            rhs.swap(p, k);
            scale.swap(p, k);
        }
        let pivot = m[k * n + k];
        if pivot.abs() <= PIVOT_TOLERANCE * scale[k] {
            return Err(NumericsError::Singular { column: k, pivot });
        }
        for i in (k + 1)..n {
            let f = m[i * n + k] / pivot;
            if f == 0.0 {
                continue;
            }
            m[i * n + k] = 0.0;
            for j in (k + 1)..n {
                m[i * n + j] -= f * m[k * n + j];
            }
            rhs[i] -= f * rhs[k];
        }
    }

    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let tail: f64 = ((i + 1)..n).map(|j| m[i * n + j] * x[j]).sum();
        x[i] = (rhs[i] - tail) / m[i * n + i];
    }
    Ok(x)
}

/// Output of [`symmetric_eigenvalues`].
#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    /// Eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// Number of full sweeps performed.
    pub sweeps: usize,
    /// Frobenius norm of the off-diagonal part of the final rotated matrix.
    pub residual: f64,
    /// Bound the residual was required to meet.
    pub tolerance: f64,
}

fn off_diagonal_norm(a: &DenseMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// All eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
///
/// Rotations are applied in row-major `(p, q)` order so the result is fully
/// deterministic. Iteration stops once the off-diagonal Frobenius norm is at
/// most `tol · max(1, ‖A‖_F)`.
pub fn symmetric_eigenvalues(a: &DenseMatrix, tol: f64) -> Result<EigenResult, NumericsError> {
    if let Some((row, col)) = a.first_asymmetry(SYMMETRY_TOLERANCE) {
        return Err(NumericsError::NotSymmetric { row, col, upper: a[(row, col)], lower: a[(col, row)] });
    }
    let n = a.dim();
    // symmetrise exactly so rotations act on a truly symmetric matrix
    let mut m = a.clone();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    let bound = tol * a.frobenius_norm().max(1.0);

    let mut sweeps = 0;
    let mut residual = off_diagonal_norm(&m);
    while residual > bound {
        if sweeps == MAX_SWEEPS {
            return Err(NumericsError::NoConvergence { sweeps, residual });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, p, q);
            }
        }
        sweeps += 1;
        residual = off_diagonal_norm(&m);
    }

    let mut eigenvalues: Vec<f64> = (0..n).map(|i| m[(i, i)]).collect();
    eigenvalues.sort_by(f64::total_cmp);
    Ok(EigenResult { eigenvalues, sweeps, residual, tolerance: bound })
}

// One Jacobi rotation annihilating m[p][q].
fn rotate(m: &mut DenseMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    if apq == 0.0 {
        return;
    }
    let n = m.dim();
    let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let app = m[(p, p)];
    let aqq = m[(q, q)];
    m[(p, p)] = app - t * apq;
    m[(q, q)] = aqq + t * apq;
    m[(p, q)] = 0.0;
    m[(q, p)] = 0.0;
    for r in 0..n {
        if r == p || r == q {
            continue;
        }
        let arp = m[(r, p)];
        let arq = m[(r, q)];
        let new_rp = c * arp - s * arq;
        let new_rq = s * arp + c * arq;
        m[(r, p)] = new_rp;
        m[(p, r)] = new_rp;
        m[(r, q)] = new_rq;
        m[(q, r)] = new_rq;
    }
}
