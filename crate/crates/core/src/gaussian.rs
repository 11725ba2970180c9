//! Generalized coherent states `Ψ_{X,Y}` and the phase-space objects attached
//! to them: Fermi form and ellipsoid, symplectic factorization, Wigner matrix.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::capacity::PhaseSpaceEllipsoid;
use crate::error::{Error, Result};
use crate::matcore::{dot, inv_spd, inv_sqrt_spd, sqrt_spd, Matrix, SymmetricMatrix};
use crate::symplectic::SymplecticMatrix;

/// `Ψ_{X,Y}(x) = (πħ)^{-n/4} (det X)^{1/4} exp[−(X + iY)x·x / 2ħ]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateRepr", into = "StateRepr")]
pub struct GaussianState {
    hbar: f64,
    x: SymmetricMatrix,
    y: SymmetricMatrix,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct StateRepr {
    n: usize,
    hbar: f64,
    #[serde(rename = "X")]
    x: SymmetricMatrix,
    #[serde(rename = "Y")]
    y: SymmetricMatrix,
}

impl TryFrom<StateRepr> for GaussianState {
    type Error = Error;
    fn try_from(r: StateRepr) -> Result<Self> {
        if r.x.dim() != r.n {
            return Err(Error::DimensionMismatch { expected: r.n, found: r.x.dim() });
        }
        GaussianState::new(r.x, r.y, r.hbar)
    }
}

impl From<GaussianState> for StateRepr {
    fn from(g: GaussianState) -> Self {
        StateRepr { n: g.n(), hbar: g.hbar, x: g.x, y: g.y }
    }
}

impl GaussianState {
    pub fn new(x: SymmetricMatrix, y: SymmetricMatrix, hbar: f64) -> Result<Self> {
        if x.dim() != y.dim() {
            return Err(Error::DimensionMismatch { expected: x.dim(), found: y.dim() });
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidInput(format!("hbar must be positive, got {hbar}")));
        }
        x.require_positive_definite()?;
        Ok(Self { hbar, x, y })
    }

    /// The fiducial state `(πħ)^{-n/4} e^{−|x|²/2ħ}`.
    pub fn fiducial(n: usize, hbar: f64) -> Result<Self> {
        Self::new(SymmetricMatrix::identity(n), SymmetricMatrix::from_diag(&vec![0.0; n]), hbar)
    }

    /// One degree of freedom with scalar `X = x`, `Y = y`.
    pub fn scalar(x: f64, y: f64, hbar: f64) -> Result<Self> {
        Self::new(SymmetricMatrix::from_diag(&[x]), SymmetricMatrix::from_diag(&[y]), hbar)
    }

    pub fn n(&self) -> usize {
        self.x.dim()
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn x(&self) -> &SymmetricMatrix {
        &self.x
    }

    pub fn y(&self) -> &SymmetricMatrix {
        &self.y
    }

    fn normalization(&self) -> f64 {
        let det = self.x.as_matrix().det().expect("X is square");
        (PI * self.hbar).powf(-(self.n() as f64) / 4.0) * det.powf(0.25)
    }

    /// Amplitude `R(x) = exp(−Xx·x / 2ħ)` (unnormalized).
    pub fn amplitude(&self, x: &[f64]) -> f64 {
        (-self.x.quad_form(x) / (2.0 * self.hbar)).exp()
    }

    /// Phase `Φ(x) = −½ Yx·x`, so that `Ψ ∝ R e^{iΦ/ħ}`.
    pub fn phase(&self, x: &[f64]) -> f64 {
        -0.5 * self.y.quad_form(x)
    }
}

/// Value of the normalized wavefunction at `x`.
pub fn eval_wavefunction(g: &GaussianState, x: &[f64]) -> Result<Complex64> {
    if x.len() != g.n() {
        return Err(Error::LengthMismatch { expected: g.n(), found: x.len() });
    }
    let exponent = Complex64::new(-g.x.quad_form(x), -g.y.quad_form(x)) / (2.0 * g.hbar);
    Ok(g.normalization() * exponent.exp())
}

/// The Fermi quadratic form: `g_F(z) = M_F z·z − level` with
/// `M_F = [[X² + Y², Y], [Y, I]]` and `level = ħ Tr X`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FermiForm {
    pub matrix: SymmetricMatrix,
    pub level: f64,
}

impl FermiForm {
    /// `g_F(z)`; negative inside the Fermi ellipsoid.
    pub fn value(&self, z: &[f64]) -> f64 {
        self.matrix.quad_form(z) - self.level
    }

    /// The Fermi ellipsoid `Ω_F = {M_F z·z ≤ ħ Tr X}`.
    pub fn ellipsoid(&self) -> Result<PhaseSpaceEllipsoid> {
        PhaseSpaceEllipsoid::centered(self.matrix.clone(), self.level)
    }
}

pub fn fermi_form(g: &GaussianState) -> FermiForm {
    let n = g.n();
    let x = g.x.as_matrix();
    let y = g.y.as_matrix();
    let top = &(x * x) + &(y * y);
    let m = Matrix::from_blocks(&top, y, y, &Matrix::identity(n)).expect("n x n blocks");
    FermiForm { matrix: SymmetricMatrix::new(m).expect("symmetric by construction"), level: g.hbar * x.trace() }
}

/// Fermi function `(p + Yx)² + X²x·x − ħ Tr X` evaluated from its definition.
pub fn fermi_function(g: &GaussianState, z: &[f64]) -> f64 {
    let n = g.n();
    let (x, p) = z.split_at(n);
    let yx = g.y.as_matrix().mul_vec(x);
    let shifted: Vec<f64> = p.iter().zip(&yx).map(|(a, b)| a + b).collect();
    let xx = g.x.as_matrix().mul_vec(x);
    dot(&shifted, &shifted) + dot(&xx, &xx) - g.hbar * g.x.as_matrix().trace()
}

/// `S = [[X^{1/2}, 0], [X^{-1/2}Y, X^{-1/2}]]`, which satisfies
/// `Sᵀ diag(X, X) S = M_F`.
pub fn fermi_factorization(g: &GaussianState) -> Result<SymplecticMatrix> {
    let n = g.n();
    let root = sqrt_spd(&g.x)?;
    let inv_root = inv_sqrt_spd(&g.x)?;
    let lower = inv_root.as_matrix() * g.y.as_matrix();
    let s = Matrix::from_blocks(root.as_matrix(), &Matrix::zeros(n, n), &lower, inv_root.as_matrix())?;
    Ok(SymplecticMatrix::from_matrix_unchecked(s))
}

/// `G = SᵀS = [[X + YX⁻¹Y, YX⁻¹], [X⁻¹Y, X⁻¹]]`.
pub fn wigner_matrix(g: &GaussianState) -> Result<SymmetricMatrix> {
    let xinv = inv_spd(&g.x)?;
    let xinv = xinv.as_matrix();
    let y = g.y.as_matrix();
    let yxi = y * xinv;
    let top = g.x.as_matrix() + &(&yxi * y);
    let m = Matrix::from_blocks(&top, &yxi, &(xinv * y), xinv)?;
    SymmetricMatrix::new(m)
}

/// `WΨ(z) = (πħ)^{-n} exp(−Gz·z / ħ)`.
pub fn wigner_closed_form(g: &GaussianState, z: &[f64]) -> Result<f64> {
    if z.len() != 2 * g.n() {
        return Err(Error::LengthMismatch { expected: 2 * g.n(), found: z.len() });
    }
    let gm = wigner_matrix(g)?;
    Ok(wigner_with_matrix(&gm, g.hbar, z))
}

/// Closed-form Wigner function for a precomputed `G`; for evaluating many points.
pub fn wigner_with_matrix(gm: &SymmetricMatrix, hbar: f64, z: &[f64]) -> f64 {
    let n = (gm.dim() / 2) as i32;
    (PI * hbar).powi(-n) * (-gm.quad_form(z) / hbar).exp()
}

/// Capacity of the Fermi ellipsoid: `πħ Tr X / ω_max`, `ω_max` the largest
/// eigenvalue of `X`.
pub fn fermi_capacity(g: &GaussianState) -> Result<f64> {
    let eig = g.x.eigh()?;
    let top = *eig.values.last().expect("X is nonempty");
    Ok(PI * g.hbar * g.x.as_matrix().trace() / top)
}

/// Per-axis Schrödinger–Robertson check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RsReport {
    pub covariance: SymmetricMatrix,
    /// `(Σ_{xⱼxⱼ} Σ_{pⱼpⱼ}, Σ_{xⱼpⱼ}² + ħ²/4)` for each degree of freedom.
    pub per_axis: Vec<(f64, f64)>,
    /// Every inequality holds to `1e-12`.
    pub satisfied: bool,
    /// Every inequality is an equality to `1e-9`.
    pub saturated: bool,
}

/// Covariance `Σ = (ħ/2) G⁻¹` of the Wigner Gaussian and the per-axis
/// Schrödinger–Robertson comparison.
pub fn rs_check(g: &GaussianState) -> Result<RsReport> {
    let n = g.n();
    let covariance = inv_spd(&wigner_matrix(g)?)?.scale(0.5 * g.hbar);
    let c = covariance.as_matrix();
    let per_axis: Vec<(f64, f64)> = (0..n)
        .map(|j| {
            let lhs = c[(j, j)] * c[(n + j, n + j)];
            let rhs = c[(j, n + j)].powi(2) + 0.25 * g.hbar * g.hbar;
            (lhs, rhs)
        })
        .collect();
    let satisfied = per_axis.iter().all(|(l, r)| *l >= r - 1e-12);
    let saturated = per_axis.iter().all(|(l, r)| (l - r).abs() <= 1e-9);
    Ok(RsReport { covariance, per_axis, satisfied, saturated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::capacity;
    use crate::sampling::{random_spd_with_spectrum, random_symmetric};
    use crate::symplectic::{is_symplectic, symplectic_spectrum};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(rng: &mut ChaCha8Rng, n: usize) -> GaussianState {
        let hbar = rng.gen_range(0.5..2.0);
        GaussianState::new(random_spd_with_spectrum(rng, n, 0.3, 3.0), random_symmetric(rng, n, 1.5), hbar).unwrap()
    }

    fn trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, count: usize) -> f64 {
        let h = (b - a) / (count - 1) as f64;
        let inner: f64 = (1..count - 1).map(|k| f(a + k as f64 * h)).sum();
        h * (inner + 0.5 * (f(a) + f(b)))
    }

    #[test]
    fn wavefunction_values() {
        let g = GaussianState::fiducial(1, 1.0).unwrap();
        let v = eval_wavefunction(&g, &[0.0]).unwrap();
        assert!((v.re - PI.powf(-0.25)).abs() < 1e-15 && v.im == 0.0);

        let g = GaussianState::scalar(1.3, 0.8, 0.7).unwrap();
        let flipped = GaussianState::scalar(1.3, -0.8, 0.7).unwrap();
        let a = eval_wavefunction(&g, &[0.9]).unwrap();
        let b = eval_wavefunction(&flipped, &[0.9]).unwrap();
        assert!((a - b.conj()).norm() < 1e-15);

        let g = GaussianState::scalar(1.0, 0.0, 1.0).unwrap();
        let mass = trapezoid(|x| eval_wavefunction(&g, &[x]).unwrap().norm_sqr(), -8.0, 8.0, 2048);
        assert!((mass - 1.0).abs() < 1e-10);
        assert!(eval_wavefunction(&g, &[0.0, 1.0]).is_err());
    }

    #[test]
    fn fermi_form_examples() {
        let hbar = 0.6;
        let f = fermi_form(&GaussianState::fiducial(1, hbar).unwrap());
        assert_eq!(f.matrix, SymmetricMatrix::identity(2));
        assert_eq!(f.level, hbar);

        let x = SymmetricMatrix::from_rows(&[vec![2.0, 0.5], vec![0.5, 1.0]]).unwrap();
        let g = GaussianState::new(x.clone(), SymmetricMatrix::from_diag(&[0.0, 0.0]), 1.0).unwrap();
        let f = fermi_form(&g);
        let x2 = x.as_matrix() * x.as_matrix();
        assert!((&f.matrix.as_matrix().block(0, 0, 2, 2) - &x2).max_abs() < 1e-15);
        assert_eq!(f.matrix.as_matrix().block(0, 2, 2, 2), Matrix::zeros(2, 2));
        assert_eq!(f.level, 3.0);

        let g = GaussianState::new(SymmetricMatrix::identity(2), SymmetricMatrix::identity(2), 1.0).unwrap();
        let f = fermi_form(&g);
        let expected = Matrix::from_rows(&[
            vec![2.0, 0.0, 1.0, 0.0],
            vec![0.0, 2.0, 0.0, 1.0],
            vec![1.0, 0.0, 1.0, 0.0],
            vec![0.0, 1.0, 0.0, 1.0],
        ])
        .unwrap();
        assert_eq!(f.matrix.as_matrix(), &expected);
        assert_eq!(f.level, 2.0);
    }

    #[test]
    fn fermi_form_matches_expanded_function() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in 1..=3 {
            let g = random_state(&mut rng, n);
            let f = fermi_form(&g);
            for _ in 0..20 {
                let z: Vec<f64> = (0..2 * n).map(|_| rng.gen_range(-2.0..2.0)).collect();
                assert!((f.value(&z) - fermi_function(&g, &z)).abs() <= 1e-12 * (1.0 + f.matrix.quad_form(&z)));
            }
        }
    }

    #[test]
    fn factorization_examples() {
        let s = fermi_factorization(&GaussianState::fiducial(2, 1.0).unwrap()).unwrap();
        assert!((s.as_matrix() - &Matrix::identity(4)).max_abs() < 1e-15);
        let s = fermi_factorization(&GaussianState::scalar(4.0, 0.0, 1.0).unwrap()).unwrap();
        assert!((s.as_matrix() - &Matrix::from_diag(&[2.0, 0.5])).max_abs() < 1e-15);
        assert!(is_symplectic(s.as_matrix(), 1e-12).unwrap());
    }

    #[test]
    fn factorization_and_wigner_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for n in 1..=3 {
            for _ in 0..30 {
                let g = random_state(&mut rng, n);
                let s = fermi_factorization(&g).unwrap();
                assert!(is_symplectic(s.as_matrix(), 1e-9).unwrap());
                let x = g.x().as_matrix();
                let z = Matrix::zeros(n, n);
                let dxx = SymmetricMatrix::new(Matrix::from_blocks(x, &z, &z, x).unwrap()).unwrap();
                let mf = fermi_form(&g).matrix;
                let residual = (dxx.congruence(s.as_matrix()).as_matrix() - mf.as_matrix()).max_abs();
                assert!(residual <= 1e-9 * mf.as_matrix().max_abs());

                let gm = wigner_matrix(&g).unwrap();
                let sts = s.as_matrix().transpose();
                assert!((&(&sts * s.as_matrix()) - gm.as_matrix()).max_abs() <= 1e-10 * gm.as_matrix().max_abs());
                let spec = symplectic_spectrum(&gm).unwrap();
                assert!(spec.values.iter().all(|v| (v - 1.0).abs() <= 1e-8));
            }
        }
    }

    #[test]
    fn wigner_matrix_examples() {
        let gm = wigner_matrix(&GaussianState::fiducial(2, 1.0).unwrap()).unwrap();
        assert!((gm.as_matrix() - &Matrix::identity(4)).max_abs() < 1e-15);
        let y = 0.7;
        let gm = wigner_matrix(&GaussianState::scalar(1.0, y, 1.0).unwrap()).unwrap();
        let expected = Matrix::from_rows(&[vec![1.0 + y * y, y], vec![y, 1.0]]).unwrap();
        assert!((gm.as_matrix() - &expected).max_abs() < 1e-15);
    }

    #[test]
    fn wigner_closed_form_properties() {
        let g = GaussianState::fiducial(1, 1.0).unwrap();
        assert!((wigner_closed_form(&g, &[0.0, 0.0]).unwrap() - 1.0 / PI).abs() < 1e-16);

        let g = GaussianState::scalar(1.7, -0.6, 0.8).unwrap();
        let a = wigner_closed_form(&g, &[0.3, -0.4]).unwrap();
        let b = wigner_closed_form(&g, &[-0.3, 0.4]).unwrap();
        assert_eq!(a, b);
        assert!(a > 0.0 && a < wigner_closed_form(&g, &[0.0, 0.0]).unwrap());

        // nested trapezoid over a box holding the whole Gaussian
        let gm = wigner_matrix(&g).unwrap();
        let total =
            trapezoid(|x| trapezoid(|p| wigner_with_matrix(&gm, g.hbar(), &[x, p]), -8.0, 8.0, 801), -8.0, 8.0, 801);
        assert!((total - 1.0).abs() < 1e-9, "{total}");
    }

    #[test]
    fn fermi_capacity_examples() {
        for (x, y, hbar) in [(0.3, 0.0, 1.0), (2.0, 1.2, 0.5), (5.0, -3.0, 2.0)] {
            let c = fermi_capacity(&GaussianState::scalar(x, y, hbar).unwrap()).unwrap();
            assert!((c - PI * hbar).abs() <= 1e-12 * c);
        }
        for n in 1..=3 {
            let g =
                GaussianState::new(SymmetricMatrix::identity(n).scale(2.5), SymmetricMatrix::identity(n), 1.0).unwrap();
            let c = fermi_capacity(&g).unwrap();
            assert!((c - n as f64 * PI).abs() <= 1e-12 * c);
        }
        let g =
            GaussianState::new(SymmetricMatrix::from_diag(&[1.0, 2.0]), SymmetricMatrix::from_diag(&[0.0, 0.0]), 1.0)
                .unwrap();
        let c = fermi_capacity(&g).unwrap();
        assert!((c - 1.5 * PI).abs() < 1e-12);
        let pipeline = capacity(&fermi_form(&g).ellipsoid().unwrap()).unwrap();
        assert!((c - pipeline).abs() <= 1e-9 * c);
    }

    #[test]
    fn rs_examples() {
        let r = rs_check(&GaussianState::fiducial(1, 1.0).unwrap()).unwrap();
        assert!((r.covariance.as_matrix() - &Matrix::from_diag(&[0.5, 0.5])).max_abs() < 1e-15);
        assert!((r.per_axis[0].0 - 0.25).abs() < 1e-15 && (r.per_axis[0].1 - 0.25).abs() < 1e-15);
        assert!(r.saturated && r.satisfied);

        let r = rs_check(&GaussianState::scalar(4.0, 0.0, 1.0).unwrap()).unwrap();
        assert!((r.covariance.as_matrix() - &Matrix::from_diag(&[0.125, 2.0])).max_abs() < 1e-14);
        assert!(r.saturated);

        let r = rs_check(&GaussianState::scalar(1.0, 1.0, 1.0).unwrap()).unwrap();
        let expected = Matrix::from_rows(&[vec![1.0, -1.0], vec![-1.0, 2.0]]).unwrap().scale(0.5);
        assert!((r.covariance.as_matrix() - &expected).max_abs() < 1e-14);
        assert!((r.per_axis[0].0 - 0.5).abs() < 1e-14 && (r.per_axis[0].1 - 0.5).abs() < 1e-14);
        assert!(r.saturated);
    }

    #[test]
    fn covariance_matches_position_moments() {
        // ⟨x²⟩ from |Ψ|² by quadrature against Σ_xx
        for (x, y, hbar) in [(1.0, 0.0, 1.0), (4.0, 0.0, 1.0), (1.0, 1.0, 1.0), (0.6, -0.9, 1.7)] {
            let g = GaussianState::scalar(x, y, hbar).unwrap();
            let second = trapezoid(|t| t * t * eval_wavefunction(&g, &[t]).unwrap().norm_sqr(), -15.0, 15.0, 4001);
            let r = rs_check(&g).unwrap();
            assert!((second - r.covariance.as_matrix()[(0, 0)]).abs() < 1e-10);
        }
    }

    #[test]
    fn state_json_roundtrip() {
        let g = GaussianState::scalar(1.5, -0.25, 0.5).unwrap();
        let text = serde_json::to_string(&g).unwrap();
        assert!(text.contains("\"X\"") && text.contains("\"hbar\""));
        let back: GaussianState = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
        let bad = r#"{"n":1,"hbar":1,"X":{"dim":1,"entries":[[-1]]},"Y":{"dim":1,"entries":[[0]]}}"#;
        assert!(serde_json::from_str::<GaussianState>(bad).is_err());
    }
}
