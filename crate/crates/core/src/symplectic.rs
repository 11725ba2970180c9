//! Symplectic form, symplectic matrices, symplectic spectra and the
//! Williamson normal form of positive-definite quadratic forms.
//!
//! Coordinates are ordered `(x₁…xₙ, p₁…pₙ)` everywhere, so the standard form
//! is `J = [[0, I], [−I, 0]]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{dot, inv_sqrt_spd, norm, sqrt_spd, Matrix, MatrixRepr, SymmetricMatrix};

/// Relative tolerance used to pair the doubled eigenvalues of the skew product.
pub const PAIR_TOL: f64 = 1e-8;

/// Tolerance applied when a symplectic matrix is read from an external source.
pub const PARSE_SYMPLECTIC_TOL: f64 = 1e-8;

/// A real `2n x 2n` matrix preserving the standard symplectic form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct SymplecticMatrix(Matrix);

impl SymplecticMatrix {
    /// Accepts `m` if `‖mᵀJm − J‖ ≤ tol · max(1, ‖m‖²)`.
    pub fn new(m: Matrix, tol: f64) -> Result<Self> {
        let residual = symplectic_residual(&m)?;
        let tolerance = tol * m.max_abs().powi(2).max(1.0);
        if residual > tolerance {
            return Err(Error::NotSymplectic { residual, tolerance });
        }
        Ok(Self(m))
    }

    /// Wraps a matrix that is symplectic by construction.
    pub(crate) fn from_matrix_unchecked(m: Matrix) -> Self {
        Self(m)
    }

    pub fn identity(n: usize) -> Self {
        Self(Matrix::identity(2 * n))
    }

    /// Degrees of freedom.
    pub fn n(&self) -> usize {
        self.0.rows() / 2
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    /// `S⁻¹ = −J Sᵀ J`, exact for symplectic `S`.
    pub fn inverse(&self) -> SymplecticMatrix {
        let j = standard_form(self.n());
        let j = j.as_matrix();
        Self(-&(&(j * &self.0.transpose()) * j))
    }

    pub fn compose(&self, other: &SymplecticMatrix) -> SymplecticMatrix {
        Self(&self.0 * &other.0)
    }

    pub fn apply(&self, z: &[f64]) -> Vec<f64> {
        self.0.mul_vec(z)
    }
}

impl TryFrom<MatrixRepr> for SymplecticMatrix {
    type Error = Error;
    fn try_from(r: MatrixRepr) -> Result<Self> {
        SymplecticMatrix::new(Matrix::try_from(r)?, PARSE_SYMPLECTIC_TOL)
    }
}

impl From<SymplecticMatrix> for MatrixRepr {
    fn from(s: SymplecticMatrix) -> Self {
        s.0.into()
    }
}

/// The standard symplectic matrix `J = [[0, I], [−I, 0]]` on `ℝ²ⁿ`.
pub fn standard_form(n: usize) -> SymplecticMatrix {
    assert!(n >= 1, "phase space needs at least one degree of freedom");
    SymplecticMatrix(Matrix::from_fn(2 * n, 2 * n, |i, j| {
        if j == i + n {
            1.0
        } else if i == j + n {
            -1.0
        } else {
            0.0
        }
    }))
}

/// `σ(z, z′) = Jz·z′`.
pub fn symplectic_form(z: &[f64], w: &[f64]) -> f64 {
    let n = z.len() / 2;
    // Jz = (p, −x)
    (0..n).map(|k| z[n + k] * w[k] - z[k] * w[n + k]).sum()
}

/// `J z` without materializing `J`.
pub fn apply_j(z: &[f64]) -> Vec<f64> {
    let n = z.len() / 2;
    let mut out = Vec::with_capacity(z.len());
    out.extend_from_slice(&z[n..]);
    out.extend(z[..n].iter().map(|v| -v));
    out
}

fn symplectic_residual(s: &Matrix) -> Result<f64> {
    if !s.is_square() {
        return Err(Error::DimensionMismatch { expected: s.rows(), found: s.cols() });
    }
    if !s.rows().is_multiple_of(2) || s.rows() == 0 {
        return Err(Error::OddDimension(s.rows()));
    }
    let j = standard_form(s.rows() / 2).into_matrix();
    let stjs = &(&s.transpose() * &j) * s;
    Ok((&stjs - &j).max_abs())
}

/// True iff `‖SᵀJS − J‖ ≤ tol` (largest absolute entry).
pub fn is_symplectic(s: &Matrix, tol: f64) -> Result<bool> {
    Ok(symplectic_residual(s)? <= tol)
}

/// Symplectic eigenvalues of a positive-definite `2n x 2n` matrix, ascending.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymplecticSpectrum {
    pub n: usize,
    pub values: Vec<f64>,
}

impl SymplecticSpectrum {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidInput("symplectic eigenvalues must be positive".into()));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { n: values.len(), values })
    }

    pub fn max(&self) -> f64 {
        *self.values.last().expect("spectrum is never empty")
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn product(&self) -> f64 {
        self.values.iter().product()
    }
}

fn require_phase_space(m: &SymmetricMatrix) -> Result<usize> {
    let d = m.dim();
    if !d.is_multiple_of(2) {
        return Err(Error::OddDimension(d));
    }
    Ok(d / 2)
}

/// Symplectic spectrum of a positive-definite `M`.
///
/// `L = M^{1/2} J M^{1/2}` is skew-symmetric with eigenvalues `±iλⱼ`, so
/// `LᵀL` is symmetric with every `λⱼ²` appearing twice; the doubled
/// eigenvalues are collapsed pairwise.
pub fn symplectic_spectrum(m: &SymmetricMatrix) -> Result<SymplecticSpectrum> {
    let n = require_phase_space(m)?;
    let root = sqrt_spd(m)?;
    let j = standard_form(n).into_matrix();
    let l = &(root.as_matrix() * &j) * root.as_matrix();
    let ltl = SymmetricMatrix::new(&l.transpose() * &l)?;
    let squares = ltl.eigh()?.values;
    let mut values = Vec::with_capacity(n);
    for pair in squares.chunks(2) {
        let (a, b) = (pair[0].max(0.0).sqrt(), pair[1].max(0.0).sqrt());
        if (a - b).abs() > PAIR_TOL * a.max(b) {
            return Err(Error::PairingFailure { a, b });
        }
        values.push(0.5 * (a + b));
    }
    SymplecticSpectrum::new(values)
}

/// Williamson diagonalization `SᵀMS = diag(Λ, Λ)`.
#[derive(Clone, Debug)]
pub struct Williamson {
    pub map: SymplecticMatrix,
    pub spectrum: SymplecticSpectrum,
}

impl Williamson {
    /// `diag(Λ, Λ)`.
    pub fn normal_form(&self) -> Matrix {
        let v = &self.spectrum.values;
        Matrix::from_diag(&v.iter().chain(v).copied().collect::<Vec<_>>())
    }
}

/// Computes a symplectic `S` and ascending `Λ` with `SᵀMS = diag(Λ, Λ)`.
///
/// `K = M^{-1/2} J M^{-1/2}` is skew-symmetric with eigenvalues `±iμⱼ`,
/// `μⱼ = 1/λⱼ`. An orthonormal basis `{uⱼ, −Kuⱼ/μⱼ}` built from the
/// eigenvectors of `KᵀK` brings `K` to `[[0, diag μ], [−diag μ, 0]]`, and
/// `S = M^{-1/2} O diag(Λ, Λ)^{1/2}` then satisfies both postconditions.
/// Inside a degenerate cluster the candidate vectors are orthogonalized
/// against the pairs already accepted, which yields some symplectic basis of
/// the cluster.
pub fn williamson(m: &SymmetricMatrix) -> Result<Williamson> {
    let n = require_phase_space(m)?;
    let dim = 2 * n;
    let inv_root = inv_sqrt_spd(m)?;
    let j = standard_form(n).into_matrix();
    let k = &(inv_root.as_matrix() * &j) * inv_root.as_matrix();
    let ktk = SymmetricMatrix::new(&k.transpose() * &k)?;
    let eig = ktk.eigh()?;

    // columns: u₁…uₙ then v₁…vₙ with Kuⱼ = −μⱼvⱼ
    let mut us: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut vs: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut accepted: Vec<Vec<f64>> = Vec::with_capacity(dim);
    let mut candidates: Vec<Vec<f64>> = (0..dim).map(|c| eig.vectors.column(c)).collect();
    while us.len() < n {
        // the candidate least covered by the pairs accepted so far
        let (best, mut u) = candidates
            .iter()
            .enumerate()
            .map(|(i, c)| (i, project_out(c, &accepted)))
            .max_by(|a, b| norm(&a.1).total_cmp(&norm(&b.1)))
            .ok_or(Error::DegeneracyFailure)?;
        candidates.swap_remove(best);
        let len = norm(&u);
        if len < 1e-3 {
            return Err(Error::DegeneracyFailure);
        }
        u.iter_mut().for_each(|v| *v /= len);
        u = project_out(&u, &accepted);
        let len = norm(&u);
        u.iter_mut().for_each(|v| *v /= len);
        let ku = k.mul_vec(&u);
        let mu = norm(&ku);
        if mu == 0.0 {
            return Err(Error::DegeneracyFailure);
        }
        let v: Vec<f64> = ku.iter().map(|x| -x / mu).collect();
        // re-orthogonalize to shed rounding drift
        let mut v = project_out(&v, &accepted);
        let c = dot(&v, &u);
        v.iter_mut().zip(&u).for_each(|(vi, ui)| *vi -= c * ui);
        let vlen = norm(&v);
        v.iter_mut().for_each(|x| *x /= vlen);
        accepted.push(u.clone());
        accepted.push(v.clone());
        us.push(u);
        vs.push(v);
    }

    let o = Matrix::from_fn(dim, dim, |i, c| if c < n { us[c][i] } else { vs[c - n][i] });
    let block = &(&o.transpose() * &k) * &o;
    let mut pairs: Vec<(f64, usize)> = (0..n).map(|c| (1.0 / block[(c, c + n)], c)).collect();
    if pairs.iter().any(|(lambda, _)| !(lambda.is_finite() && *lambda > 0.0)) {
        return Err(Error::DegeneracyFailure);
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    let lambdas: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let frame = Matrix::from_fn(dim, dim, |i, c| {
        let (lambda, src) = pairs[c % n];
        let col = if c < n { src } else { src + n };
        o[(i, col)] * lambda.sqrt()
    });
    let s = inv_root.as_matrix() * &frame;
    Ok(Williamson { map: SymplecticMatrix::from_matrix_unchecked(s), spectrum: SymplecticSpectrum::new(lambdas)? })
}

/// Removes the components of `x` along the orthonormal vectors `basis`.
fn project_out(x: &[f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let mut out = x.to_vec();
    for b in basis {
        let c = dot(&out, b);
        out.iter_mut().zip(b).for_each(|(o, bi)| *o -= c * bi);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_spd, random_symplectic};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn check_williamson(m: &SymmetricMatrix) -> Williamson {
        let w = williamson(m).unwrap();
        let s = w.map.as_matrix();
        let residual = (m.congruence(s).as_matrix() - &w.normal_form()).max_abs();
        assert!(residual <= 1e-8 * m.as_matrix().max_abs(), "residual {residual:e}");
        assert!(is_symplectic(s, 1e-8).unwrap());
        let spec = symplectic_spectrum(m).unwrap();
        for (a, b) in w.spectrum.values.iter().zip(&spec.values) {
            assert!((a - b).abs() <= 1e-8 * b.max(1.0));
        }
        w
    }

    #[test]
    fn standard_form_shapes() {
        let j1 = standard_form(1);
        assert_eq!(j1.as_matrix().to_rows(), vec![vec![0.0, 1.0], vec![-1.0, 0.0]]);
        let j2 = standard_form(2).into_matrix();
        assert_eq!(&j2 * &j2, Matrix::identity(4).scale(-1.0));
        // σ(z, z′) = Jz·z′ = p·x′ − x·p′
        assert_eq!(symplectic_form(&[0.0, 1.0], &[1.0, 0.0]), 1.0);
        assert_eq!(symplectic_form(&[1.0, 0.0], &[0.0, 1.0]), -1.0);
        assert_eq!(dot(&j2.mul_vec(&[0.0, 0.0, 1.0, 0.0]), &[1.0, 0.0, 0.0, 0.0]), 1.0);
        assert_eq!(apply_j(&[1.0, 2.0, 3.0, 4.0]), j2.mul_vec(&[1.0, 2.0, 3.0, 4.0]));
    }

    #[test]
    fn symplecticity_predicate() {
        assert!(is_symplectic(&Matrix::identity(4), 1e-12).unwrap());
        assert!(is_symplectic(&Matrix::from_diag(&[2.0, 0.5]), 1e-12).unwrap());
        assert!(!is_symplectic(&Matrix::from_diag(&[2.0, 2.0]), 1e-12).unwrap());
        assert_eq!(is_symplectic(&Matrix::identity(3), 1e-12), Err(Error::OddDimension(3)));
    }

    #[test]
    fn spectrum_of_identity_is_unit() {
        for n in 1..=3 {
            let spec = symplectic_spectrum(&SymmetricMatrix::identity(2 * n)).unwrap();
            assert_eq!(spec.n, n);
            assert!(spec.values.iter().all(|v| (v - 1.0).abs() < 1e-14));
        }
    }

    #[test]
    fn one_degree_spectrum_is_root_determinant() {
        // JM = [[b, c], [−a, −b]] has characteristic polynomial μ² + (ac − b²)
        let (a, b, c): (f64, f64, f64) = (3.0, 0.7, 1.5);
        let m = SymmetricMatrix::from_rows(&[vec![a, b], vec![b, c]]).unwrap();
        let spec = symplectic_spectrum(&m).unwrap();
        assert!((spec.values[0] - (a * c - b * b).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn gram_of_symplectic_has_unit_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=3 {
            let s = random_symplectic(&mut rng, n);
            let m = SymmetricMatrix::identity(2 * n).congruence(s.as_matrix());
            let spec = symplectic_spectrum(&m).unwrap();
            assert!(spec.values.iter().all(|v| (v - 1.0).abs() < 1e-8), "{spec:?}");
        }
    }

    #[test]
    fn spectrum_rejects_bad_input() {
        assert_eq!(symplectic_spectrum(&SymmetricMatrix::identity(3)), Err(Error::OddDimension(3)));
        let indefinite = SymmetricMatrix::from_diag(&[1.0, -1.0]);
        assert!(matches!(symplectic_spectrum(&indefinite), Err(Error::NotPositiveDefinite { .. })));
    }

    #[test]
    fn williamson_examples() {
        let w = check_williamson(&SymmetricMatrix::identity(4));
        assert!(w.spectrum.values.iter().all(|v| (v - 1.0).abs() < 1e-12));
        let s = w.map.as_matrix();
        assert!((&(s * &s.transpose()) - &Matrix::identity(4)).max_abs() < 1e-12);

        let w = check_williamson(&SymmetricMatrix::from_diag(&[2.0, 0.5]));
        assert!((w.spectrum.values[0] - 1.0).abs() < 1e-12);

        let w = check_williamson(&SymmetricMatrix::from_diag(&[3.0, 1.5, 3.0, 1.5]));
        assert!((w.spectrum.values[0] - 1.5).abs() < 1e-12);
        assert!((w.spectrum.values[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn williamson_handles_degenerate_clusters() {
        // image of a degenerate normal form under a random symplectic map
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let d = SymmetricMatrix::from_diag(&[2.0, 2.0, 5.0, 2.0, 2.0, 5.0]);
        let s = random_symplectic(&mut rng, 3);
        let m = d.congruence(s.as_matrix());
        let w = check_williamson(&m);
        assert!((w.spectrum.values[0] - 2.0).abs() < 1e-8);
        assert!((w.spectrum.values[1] - 2.0).abs() < 1e-8);
        assert!((w.spectrum.values[2] - 5.0).abs() < 1e-8);
    }

    #[test]
    fn williamson_random_and_determinant_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=3 {
            for _ in 0..50 {
                let m = random_spd(&mut rng, 2 * n);
                let w = check_williamson(&m);
                let det = m.as_matrix().det().unwrap();
                let prod = w.spectrum.product();
                assert!((det - prod * prod).abs() <= 1e-8 * det);
            }
        }
    }

    #[test]
    fn inverse_is_exact_for_symplectic() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = random_symplectic(&mut rng, 2);
        let prod = s.as_matrix() * s.inverse().as_matrix();
        assert!((&prod - &Matrix::identity(4)).max_abs() < 1e-10);
    }

    #[test]
    fn parsing_rejects_non_symplectic() {
        let text = r#"{"dim":2,"entries":[[2.0,0.0],[0.0,2.0]]}"#;
        assert!(serde_json::from_str::<SymplecticMatrix>(text).is_err());
        let text = r#"{"dim":2,"entries":[[2.0,0.0],[0.0,0.5]]}"#;
        assert!(serde_json::from_str::<SymplecticMatrix>(text).is_ok());
    }
}
