//! Metaplectic operators for one degree of freedom, by oscillatory quadrature
//! against the generating function `W(x, x′) = ½(D/B)x² − xx′/B + ½(A/B)x′²`.

use std::f64::consts::PI;

use fermiblob::gaussian::wigner_with_matrix;
use fermiblob::matcore::Matrix;
use fermiblob::{wigner_matrix, GaussianState, QuadraticHamiltonian, SymplecticMatrix};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{GridError, Result};
use crate::grid::{Grid1D, PhaseGrid, SampledWavefunction};
use crate::stencil::{first_derivative, second_derivative, StencilOrder};
use crate::wigner::{require_decay, wigner_numeric};

/// `|B|` at or below this is treated as singular.
pub const SING_TOL: f64 = 1e-8;

/// Tolerance on `|AD − BC − 1|`, relative to the squared largest entry.
pub const DET_TOL: f64 = 1e-9;

/// Side of the square phase-space grid used by [`covariance_check`].
pub const COVARIANCE_POINTS: usize = 48;

/// Half-width of that grid in standard deviations.
pub const COVARIANCE_SIGMAS: f64 = 4.0;

/// Blocks of a `2 x 2` symplectic matrix `[[A, B], [C, D]]` with `B ≠ 0`
/// and the Maslov index choosing the sign of the operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetaplecticData {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    maslov: u8,
}

impl MetaplecticData {
    /// Uses the default Maslov index: 0 when `B > 0`, 1 when `B < 0`.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if ![a, b, c, d].iter().all(|v| v.is_finite()) {
            return Err(GridError::InvalidSamples("non-finite matrix entry".into()));
        }
        let det = a * d - b * c;
        let scale = [a, b, c, d].iter().fold(1.0f64, |m, v| m.max(v.abs()));
        if (det - 1.0).abs() > DET_TOL * scale * scale {
            return Err(GridError::NotSymplectic { det });
        }
        if b.abs() <= SING_TOL {
            return Err(GridError::SingularB { b });
        }
        Ok(Self { a, b, c, d, maslov: if b > 0.0 { 0 } else { 1 } })
    }

    pub fn from_symplectic(s: &SymplecticMatrix) -> Result<Self> {
        if s.n() != 1 {
            return Err(GridError::InvalidSamples(format!("metaplectic quadrature needs n = 1, got n = {}", s.n())));
        }
        let m = s.as_matrix();
        Self::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)])
    }

    /// Picks one of the two admissible Maslov indices.
    pub fn with_maslov(self, m: u8) -> Result<Self> {
        let expected = if self.b > 0.0 { 0 } else { 1 };
        let alternate = expected + 2;
        if m != expected && m != alternate {
            return Err(GridError::InvalidMaslov { m, expected, alternate });
        }
        Ok(Self { maslov: m, ..self })
    }

    /// The other sheet of the double cover: Maslov index shifted by 2.
    pub fn alternate(self) -> Self {
        Self { maslov: (self.maslov + 2) % 4, ..self }
    }

    pub fn blocks(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn maslov(&self) -> u8 {
        self.maslov
    }

    pub fn matrix(&self) -> SymplecticMatrix {
        let m = Matrix::from_rows(&[vec![self.a, self.b], vec![self.c, self.d]]).expect("2 x 2");
        SymplecticMatrix::new(m, 1e-6).expect("validated on construction")
    }

    /// `S z`.
    pub fn apply(&self, z: (f64, f64)) -> (f64, f64) {
        (self.a * z.0 + self.b * z.1, self.c * z.0 + self.d * z.1)
    }

    /// `S⁻¹ z = [[D, −B], [−C, A]] z`.
    pub fn apply_inverse(&self, z: (f64, f64)) -> (f64, f64) {
        (self.d * z.0 - self.b * z.1, -self.c * z.0 + self.a * z.1)
    }

    /// `W(x, x′)`.
    pub fn generating_function(&self, x: f64, xp: f64) -> f64 {
        (0.5 * self.d * x * x - x * xp + 0.5 * self.a * xp * xp) / self.b
    }

    /// `(2πiħ)^{-1/2} i^m |B|^{-1/2}`, principal branch of the square root.
    fn prefactor(&self, hbar: f64) -> Complex64 {
        let i_m = Complex64::new(0.0, 1.0).powu(u32::from(self.maslov));
        i_m * Complex64::cis(-PI / 4.0) / (2.0 * PI * hbar * self.b.abs()).sqrt()
    }
}

/// `ŜΨ(x) = (2πiħ)^{-1/2} Δ(W) ∫ e^{iW(x, x′)/ħ} Ψ(x′) dx′` with
/// `Δ(W) = i^m |B|^{-1/2}`, by the trapezoid rule on the input grid.
/// The output is sampled on the same grid.
pub fn metaplectic_apply(s: &MetaplecticData, psi: &SampledWavefunction) -> Result<SampledWavefunction> {
    if s.b.abs() <= SING_TOL {
        return Err(GridError::SingularB { b: s.b });
    }
    require_decay(psi)?;
    let grid = *psi.grid();
    let hbar = psi.hbar();
    let dx = grid.spacing();
    let xs = grid.points();
    let last = xs.len() - 1;
    // e^{iW/ħ} = e^{iDx²/2Bħ} e^{−ixx′/Bħ} e^{iAx′²/2Bħ}
    let weighted: Vec<Complex64> = xs
        .iter()
        .zip(psi.values())
        .enumerate()
        .map(|(k, (&xp, v))| {
            let w = if k == 0 || k == last { 0.5 * dx } else { dx };
            v * Complex64::cis(0.5 * s.a * xp * xp / (s.b * hbar)) * w
        })
        .collect();
    let pref = s.prefactor(hbar);
    let values: Vec<Complex64> = xs
        .par_iter()
        .map(|&x| {
            let mut sum = Complex64::new(0.0, 0.0);
            for (&xp, w) in xs.iter().zip(&weighted) {
                sum += Complex64::cis(-x * xp / (s.b * hbar)) * w;
            }
            pref * Complex64::cis(0.5 * s.d * x * x / (s.b * hbar)) * sum
        })
        .collect();
    SampledWavefunction::new(grid, values, hbar)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CovarianceReport {
    /// `max |W(ŜΨ)(z) − WΨ(S⁻¹z)|` over the phase-space grid.
    pub max_error: f64,
    /// `‖ŜΨ‖² / ‖Ψ‖²`.
    pub norm_ratio: f64,
}

/// Compares the quadrature Wigner function of `ŜΨ` with the closed-form
/// Wigner function of `Ψ` pulled back by `S⁻¹`, on a square grid covering
/// four standard deviations of the transformed state.
pub fn covariance_check(s: &MetaplecticData, g: &GaussianState, grid: &Grid1D) -> Result<CovarianceReport> {
    let psi = SampledWavefunction::from_gaussian(g, *grid)?;
    let out = metaplectic_apply(s, &psi)?;
    let gm = wigner_matrix(g)?;
    let hbar = g.hbar();
    // covariance of ŜΨ is S Σ Sᵀ with Σ = (ħ/2) G⁻¹
    let sigma = gm.as_matrix().inverse()?.scale(0.5 * hbar);
    let sm = s.matrix().into_matrix();
    let moved = &(&sm * &sigma) * &sm.transpose();
    let spread = (moved[(0, 0)].sqrt(), moved[(1, 1)].sqrt());
    let z = PhaseGrid::covering(grid, (0.0, 0.0), spread, COVARIANCE_SIGMAS, COVARIANCE_POINTS, COVARIANCE_POINTS);
    let numeric = wigner_numeric(&out, &z)?;
    let max_error = z
        .points()
        .zip(&numeric.values)
        .map(|(pt, w)| {
            let back = s.apply_inverse(pt);
            (w - wigner_with_matrix(&gm, hbar, &[back.0, back.1])).abs()
        })
        .fold(0.0, f64::max);
    Ok(CovarianceReport { max_error, norm_ratio: out.norm_sqr() / psi.norm_sqr() })
}

/// Symplectic factor `S` of `H` with `SᵀMS = ωI`, rotated within the
/// normal-form frame so that `|B|` is as large as possible.
pub fn transport_factor(h: &QuadraticHamiltonian) -> Result<MetaplecticData> {
    if h.n() != 1 {
        return Err(GridError::InvalidSamples(format!("transport needs n = 1, got n = {}", h.n())));
    }
    let s0 = h.normal_form()?.map.into_matrix();
    let (a, b) = (s0[(0, 0)], s0[(0, 1)]);
    let theta = a.atan2(b);
    let (sin, cos) = theta.sin_cos();
    let rot = Matrix::from_rows(&[vec![cos, sin], vec![-sin, cos]]).expect("2 x 2");
    let s = &s0 * &rot;
    MetaplecticData::new(s[(0, 0)], s[(0, 1)], s[(1, 0)], s[(1, 1)])
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransportReport {
    /// `‖ĤΨ − ½ħωΨ‖ / ‖½ħωΨ‖` over the grid interior.
    pub residual: f64,
    pub omega: f64,
}

/// Transports the fiducial ground state by `Ŝ` and measures how well the
/// result solves `ĤΨ = ½ħωΨ`, with `Ĥ` the Weyl quantization of `½Mz·z`.
pub fn ground_state_transport(s: &MetaplecticData, h: &QuadraticHamiltonian, grid: &Grid1D) -> Result<TransportReport> {
    if h.n() != 1 {
        return Err(GridError::InvalidSamples(format!("transport needs n = 1, got n = {}", h.n())));
    }
    let m = h.matrix().as_matrix();
    let omega = m.det()?.sqrt();
    let sm = s.matrix().into_matrix();
    let normal = &(&sm.transpose() * m) * &sm;
    let residual = (&normal - &Matrix::identity(2).scale(omega)).max_abs();
    if residual > 1e-8 * m.max_abs() * sm.max_abs().powi(2).max(1.0) {
        return Err(GridError::NotWilliamsonFactor { residual });
    }
    let hbar = h.hbar();
    let ground = SampledWavefunction::from_gaussian(&GaussianState::fiducial(1, hbar)?, *grid)?;
    let psi = metaplectic_apply(s, &ground)?;
    let (a, b, c) = (m[(0, 0)], m[(0, 1)], m[(1, 1)]);
    let v = psi.values();
    let xs = grid.points();
    let dx = grid.spacing();
    let order = StencilOrder::Fourth;
    let energy = 0.5 * hbar * omega;
    let minus_i_hbar = Complex64::new(0.0, -hbar);
    let (mut num, mut den) = (0.0, 0.0);
    for k in order.reach()..xs.len() - order.reach() {
        let x = xs[k];
        let d1 = first_derivative(v, k, dx, order);
        let d2 = second_derivative(v, k, dx, order);
        // Weyl symbol of xp is (xp̂ + p̂x)/2
        let hpsi = (v[k] * (a * x * x) + minus_i_hbar * b * (d1 * (2.0 * x) + v[k]) - d2 * (c * hbar * hbar)) * 0.5;
        num += (hpsi - v[k] * energy).norm_sqr();
        den += (v[k] * energy).norm_sqr();
    }
    Ok(TransportReport { residual: (num / den).sqrt(), omega })
}
