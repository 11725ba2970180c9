//! Dense real linear algebra for the small matrices used throughout the crate.
//!
//! Everything here is sized for phase spaces of a handful of degrees of
//! freedom: the symmetric eigensolver is cyclic Jacobi, determinants and
//! general inverses use partial-pivot elimination.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance of the symmetry check.
pub const SYM_TOL: f64 = 1e-10;
/// Relative floor below which an eigenvalue is not considered positive.
pub const POS_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 64;

/// Row-major dense real matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { 0.0 })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from nested rows. All rows must have equal length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch { expected: c, found: bad.len() });
        }
        Ok(Self { rows: r, cols: c, data: rows.iter().flatten().copied().collect() })
    }

    /// Assembles the 2x2 block matrix `[[a, b], [c, d]]`.
    pub fn from_blocks(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Result<Self> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::InvalidInput("inconsistent block shapes".into()));
        }
        let (top, left) = (a.rows, a.cols);
        Ok(Self::from_fn(top + c.rows, left + b.cols, |i, j| match (i < top, j < left) {
            (true, true) => a[(i, j)],
            (true, false) => b[(i, j - left)],
            (false, true) => c[(i - top, j)],
            (false, false) => d[(i - top, j - left)],
        }))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Copies out the `nr x nc` sub-block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Matrix {
        Matrix::from_fn(nr, nc, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * s).collect() }
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols, "matrix-vector shape mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// Determinant by LU factorization with partial pivoting.
    pub fn det(&self) -> Result<f64> {
        self.require_square()?;
        let n = self.rows;
        let mut a = self.clone();
        let mut det = 1.0;
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| a[(i, k)].abs().total_cmp(&a[(j, k)].abs())).unwrap_or(k);
            if a[(p, k)] == 0.0 {
                return Ok(0.0);
            }
            if p != k {
                a.swap_rows(p, k);
                det = -det;
            }
            let pivot = a[(k, k)];
            det *= pivot;
            for i in k + 1..n {
                let f = a[(i, k)] / pivot;
                for j in k..n {
                    a[(i, j)] -= f * a[(k, j)];
                }
            }
        }
        Ok(det)
    }

    /// General inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Matrix> {
        self.require_square()?;
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        let scale = self.max_abs();
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| a[(i, k)].abs().total_cmp(&a[(j, k)].abs())).unwrap_or(k);
            if a[(p, k)].abs() <= f64::EPSILON * scale {
                return Err(Error::InvalidInput("matrix is singular".into()));
            }
            a.swap_rows(p, k);
            inv.swap_rows(p, k);
            let pivot = a[(k, k)];
            for j in 0..n {
                a[(k, j)] /= pivot;
                inv[(k, j)] /= pivot;
            }
            for i in 0..n {
                if i == k {
                    continue;
                }
                let f = a[(i, k)];
                if f != 0.0 {
                    for j in 0..n {
                        a[(i, j)] -= f * a[(k, j)];
                        inv[(i, j)] -= f * inv[(k, j)];
                    }
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.rows, found: self.cols })
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape mismatch");
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference shape mismatch");
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale(-1.0)
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Real symmetric matrix. Construction checks symmetry to [`SYM_TOL`]
/// (relative to the largest entry) and then stores `(A + Aᵀ)/2`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct SymmetricMatrix(Matrix);

impl SymmetricMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch { expected: m.rows, found: m.cols });
        }
        if m.rows == 0 {
            return Err(Error::InvalidInput("matrix dimension must be at least 1".into()));
        }
        if m.data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("matrix has non-finite entries".into()));
        }
        let tolerance = SYM_TOL * m.max_abs();
        let mut asymmetry: f64 = 0.0;
        for i in 0..m.rows {
            for j in i + 1..m.cols {
                asymmetry = asymmetry.max((m[(i, j)] - m[(j, i)]).abs());
            }
        }
        if asymmetry > tolerance {
            return Err(Error::NonSymmetric { asymmetry, tolerance });
        }
        let n = m.rows;
        Ok(Self(Matrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]))))
    }

    pub fn identity(n: usize) -> Self {
        Self(Matrix::identity(n))
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        Self(Matrix::from_diag(diag))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale(s))
    }

    /// `Az·z`.
    pub fn quad_form(&self, z: &[f64]) -> f64 {
        dot(&self.0.mul_vec(z), z)
    }

    /// `Sᵀ A S` for any conformable `S`; the result is symmetric by construction.
    pub fn congruence(&self, s: &Matrix) -> SymmetricMatrix {
        let m = &(&s.transpose() * &self.0) * s;
        let n = m.rows;
        SymmetricMatrix(Matrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)])))
    }

    pub fn eigh(&self) -> Result<Eigen> {
        eigh_sym(self)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.require_positive_definite().is_ok()
    }

    /// Eigendecomposition, failing unless every eigenvalue exceeds the positivity floor.
    pub fn require_positive_definite(&self) -> Result<Eigen> {
        let eig = eigh_sym(self)?;
        let floor = POS_TOL * self.0.max_abs();
        let min = eig.values[0];
        if min <= floor {
            return Err(Error::NotPositiveDefinite { min_eigenvalue: min });
        }
        Ok(eig)
    }
}

impl fmt::Debug for SymmetricMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Symmetric{:?}", self.0)
    }
}

impl AsRef<Matrix> for SymmetricMatrix {
    fn as_ref(&self) -> &Matrix {
        &self.0
    }
}

/// Wire form of a matrix: `{"dim": d, "entries": [[...], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixRepr {
    pub dim: usize,
    pub entries: Vec<Vec<f64>>,
}

impl TryFrom<MatrixRepr> for Matrix {
    type Error = Error;
    fn try_from(r: MatrixRepr) -> Result<Self> {
        let m = Matrix::from_rows(&r.entries)?;
        if m.rows != r.dim || m.cols != r.dim {
            return Err(Error::DimensionMismatch { expected: r.dim, found: m.rows.max(m.cols) });
        }
        Ok(m)
    }
}

impl From<Matrix> for MatrixRepr {
    fn from(m: Matrix) -> Self {
        MatrixRepr { dim: m.rows, entries: m.to_rows() }
    }
}

impl TryFrom<MatrixRepr> for SymmetricMatrix {
    type Error = Error;
    fn try_from(r: MatrixRepr) -> Result<Self> {
        SymmetricMatrix::new(Matrix::try_from(r)?)
    }
}

impl From<SymmetricMatrix> for MatrixRepr {
    fn from(m: SymmetricMatrix) -> Self {
        m.0.into()
    }
}

/// Result of a symmetric eigendecomposition: ascending eigenvalues and the
/// orthogonal matrix whose columns are the matching eigenvectors.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl Eigen {
    /// `Q f(Λ) Qᵀ`.
    pub fn reassemble(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let n = self.values.len();
        let q = &self.vectors;
        Matrix::from_fn(n, n, |i, j| (0..n).map(|k| q[(i, k)] * f(self.values[k]) * q[(j, k)]).sum())
    }
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Sweeps over every off-diagonal pair until the off-diagonal mass is at
/// rounding level. Eigenvalues come back in ascending order.
pub fn eigh_sym(a: &SymmetricMatrix) -> Result<Eigen> {
    let n = a.dim();
    let mut m = a.0.clone();
    let mut q = Matrix::identity(n);
    let frob = m.data.iter().map(|v| v * v).sum::<f64>().sqrt();

    let mut converged = n == 1 || frob == 0.0;
    let mut sweep = 0;
    while !converged {
        if sweep == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
        }
        sweep += 1;
        let mut rotated = false;
        for p in 0..n - 1 {
            for r in p + 1..n {
                let apr = m[(p, r)];
                // negligible relative to both diagonal entries: zero it outright
                let scale = m[(p, p)].abs() + m[(r, r)].abs();
                if apr.abs() <= 0.25 * f64::EPSILON * f64::EPSILON * frob
                    || (scale > 0.0 && scale + 64.0 * apr.abs() == scale)
                {
                    m[(p, r)] = 0.0;
                    m[(r, p)] = 0.0;
                    continue;
                }
                rotated = true;
                let theta = (m[(r, r)] - m[(p, p)]) / (2.0 * apr);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut m, &mut q, p, r, c, s);
            }
        }
        converged = !rotated;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]));
    let values = order.iter().map(|&k| m[(k, k)]).collect();
    let vectors = Matrix::from_fn(n, n, |i, j| q[(i, order[j])]);
    Ok(Eigen { values, vectors })
}

/// Applies the plane rotation in (p, r) as `M ← GᵀMG`, `Q ← QG`.
fn rotate(m: &mut Matrix, q: &mut Matrix, p: usize, r: usize, c: f64, s: f64) {
    let n = m.rows;
    for k in 0..n {
        let (mkp, mkr) = (m[(k, p)], m[(k, r)]);
        m[(k, p)] = c * mkp - s * mkr;
        m[(k, r)] = s * mkp + c * mkr;
    }
    for k in 0..n {
        let (mpk, mrk) = (m[(p, k)], m[(r, k)]);
        m[(p, k)] = c * mpk - s * mrk;
        m[(r, k)] = s * mpk + c * mrk;
    }
    m[(p, r)] = 0.0;
    m[(r, p)] = 0.0;
    for k in 0..n {
        let (qkp, qkr) = (q[(k, p)], q[(k, r)]);
        q[(k, p)] = c * qkp - s * qkr;
        q[(k, r)] = s * qkp + c * qkr;
    }
}

/// Principal square root of a positive-definite matrix.
pub fn sqrt_spd(a: &SymmetricMatrix) -> Result<SymmetricMatrix> {
    let eig = a.require_positive_definite()?;
    SymmetricMatrix::new(eig.reassemble(f64::sqrt))
}

/// Inverse of a positive-definite matrix.
pub fn inv_spd(a: &SymmetricMatrix) -> Result<SymmetricMatrix> {
    let eig = a.require_positive_definite()?;
    SymmetricMatrix::new(eig.reassemble(f64::recip))
}

/// `A^{-1/2}` for positive-definite `A`.
pub fn inv_sqrt_spd(a: &SymmetricMatrix) -> Result<SymmetricMatrix> {
    let eig = a.require_positive_definite()?;
    SymmetricMatrix::new(eig.reassemble(|v| v.sqrt().recip()))
}
