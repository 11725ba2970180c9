//! Seeded random generators for matrices, symplectic maps and states.
//!
//! Used by the property tests and acceptance suites, and by the boundary
//! sampler that certifies blob containment.

use rand::Rng;

use crate::matcore::{inv_sqrt_spd, sqrt_spd, Matrix, SymmetricMatrix};
use crate::symplectic::{standard_form, SymplecticMatrix};

/// Symmetric matrix with entries uniform in `[-scale, scale]`.
pub fn random_symmetric<R: Rng + ?Sized>(rng: &mut R, d: usize, scale: f64) -> SymmetricMatrix {
    let mut m = Matrix::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let v = rng.gen_range(-scale..=scale);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    SymmetricMatrix::new(m).expect("symmetric by construction")
}

/// Positive-definite `AᵀA + εI` with `A` uniform in `[-1, 1]`; well conditioned
/// enough for every tolerance used in the test suites.
pub fn random_spd<R: Rng + ?Sized>(rng: &mut R, d: usize) -> SymmetricMatrix {
    let a = Matrix::from_fn(d, d, |_, _| rng.gen_range(-1.0..=1.0));
    let ata = &a.transpose() * &a;
    let shift = rng.gen_range(0.2..1.0);
    SymmetricMatrix::new(&ata + &Matrix::identity(d).scale(shift)).expect("symmetric by construction")
}

/// Positive-definite matrix with eigenvalues drawn from `[lo, hi]` in a random
/// orthonormal frame.
pub fn random_spd_with_spectrum<R: Rng + ?Sized>(rng: &mut R, d: usize, lo: f64, hi: f64) -> SymmetricMatrix {
    let q = random_spd(rng, d).eigh().expect("random SPD is well formed").vectors;
    let values: Vec<f64> = (0..d).map(|_| rng.gen_range(lo..=hi)).collect();
    let m = Matrix::from_fn(d, d, |i, j| (0..d).map(|k| q[(i, k)] * values[k] * q[(j, k)]).sum());
    SymmetricMatrix::new(m).expect("symmetric by construction")
}

/// The symplectic factor `[[X^{1/2}, 0], [X^{-1/2}Y, X^{-1/2}]]`.
pub fn squeeze_shear(x: &SymmetricMatrix, y: &SymmetricMatrix) -> SymplecticMatrix {
    let root = sqrt_spd(x).expect("X must be positive definite");
    let inv_root = inv_sqrt_spd(x).expect("X must be positive definite");
    let n = x.dim();
    let lower = inv_root.as_matrix() * y.as_matrix();
    let m = Matrix::from_blocks(root.as_matrix(), &Matrix::zeros(n, n), &lower, inv_root.as_matrix())
        .expect("blocks are n x n");
    SymplecticMatrix::from_matrix_unchecked(m)
}

/// Random symplectic matrix: a product of two squeeze-shear factors with `J`
/// between them.
pub fn random_symplectic<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SymplecticMatrix {
    let first = squeeze_shear(&random_spd_with_spectrum(rng, n, 0.4, 2.5), &random_symmetric(rng, n, 1.0));
    let second = squeeze_shear(&random_spd_with_spectrum(rng, n, 0.4, 2.5), &random_symmetric(rng, n, 1.0));
    first.compose(&standard_form(n)).compose(&second)
}

/// Uniform point on the unit sphere in `ℝᵈ`.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<f64> {
    loop {
        // Box–Muller pairs give isotropic Gaussian coordinates
        let v: Vec<f64> = (0..d)
            .map(|_| {
                let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                let u2: f64 = rng.gen();
                (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
            })
            .collect();
        let len = crate::matcore::norm(&v);
        if len > 1e-8 {
            return v.into_iter().map(|x| x / len).collect();
        }
    }
}
