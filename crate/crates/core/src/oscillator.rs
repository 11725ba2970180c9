//! Quadratic Hamiltonians, Hermite eigenstates, energy levels and the
//! capacities of their energy ellipsoids.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::capacity::{capacity, PhaseSpaceEllipsoid};
use crate::error::{Error, Result};
use crate::matcore::SymmetricMatrix;
use crate::symplectic::{williamson, Williamson};

/// Largest Hermite degree evaluated by the recurrence.
pub const MAX_HERMITE_DEGREE: u32 = 30;

/// Tolerance on `|lhs/rhs − 1|` for the capacity claim to count as a match.
pub const CLAIM_TOL: f64 = 1e-9;

/// `H(z) = ½ Mz·z` with positive-definite `M`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HamiltonianRepr", into = "HamiltonianRepr")]
pub struct QuadraticHamiltonian {
    hbar: f64,
    m: SymmetricMatrix,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct HamiltonianRepr {
    n: usize,
    hbar: f64,
    #[serde(rename = "M")]
    m: SymmetricMatrix,
}

impl TryFrom<HamiltonianRepr> for QuadraticHamiltonian {
    type Error = Error;
    fn try_from(r: HamiltonianRepr) -> Result<Self> {
        if r.m.dim() != 2 * r.n {
            return Err(Error::DimensionMismatch { expected: 2 * r.n, found: r.m.dim() });
        }
        QuadraticHamiltonian::new(r.m, r.hbar)
    }
}

impl From<QuadraticHamiltonian> for HamiltonianRepr {
    fn from(h: QuadraticHamiltonian) -> Self {
        HamiltonianRepr { n: h.n(), hbar: h.hbar, m: h.m }
    }
}

impl QuadraticHamiltonian {
    pub fn new(m: SymmetricMatrix, hbar: f64) -> Result<Self> {
        if !m.dim().is_multiple_of(2) {
            return Err(Error::OddDimension(m.dim()));
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidInput(format!("hbar must be positive, got {hbar}")));
        }
        m.require_positive_definite()?;
        Ok(Self { hbar, m })
    }

    /// Normal-form Hamiltonian `Σ ωⱼ(xⱼ² + pⱼ²)/2`, i.e. `M = diag(ω, ω)`.
    pub fn from_frequencies(omegas: &[f64], hbar: f64) -> Result<Self> {
        if omegas.is_empty() {
            return Err(Error::InvalidInput("need at least one frequency".into()));
        }
        let diag: Vec<f64> = omegas.iter().chain(omegas).copied().collect();
        Self::new(SymmetricMatrix::from_diag(&diag), hbar)
    }

    pub fn n(&self) -> usize {
        self.m.dim() / 2
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn matrix(&self) -> &SymmetricMatrix {
        &self.m
    }

    pub fn value(&self, z: &[f64]) -> f64 {
        0.5 * self.m.quad_form(z)
    }

    /// Williamson frame: `SᵀMS = diag(ω, ω)`, so `H(z) = K(S⁻¹z)`.
    pub fn normal_form(&self) -> Result<Williamson> {
        williamson(&self.m)
    }
}

/// Quantum numbers `(N₁, …, Nₙ)` of a tensor-product Hermite state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn ground(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total excitation `|N| = Σ Nⱼ`.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }
}

/// Physicists' Hermite polynomial `H_N(x)` by the three-term recurrence
/// `H_{N+1} = 2x H_N − 2N H_{N−1}`.
pub fn hermite_polynomial(degree: u32, x: f64) -> f64 {
    assert!(degree <= MAX_HERMITE_DEGREE, "Hermite degree {degree} exceeds {MAX_HERMITE_DEGREE}");
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if degree == 0 {
        return prev;
    }
    for k in 1..degree {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Unnormalized Hermite function `e^{−x²/2ħ} H_N(x/√ħ)`.
pub fn hermite_function(degree: u32, x: f64, hbar: f64) -> f64 {
    (-x * x / (2.0 * hbar)).exp() * hermite_polynomial(degree, x / hbar.sqrt())
}

/// Normalized eigenfunction of `½(−ħ² d²/dx² + ω² x²)` with eigenvalue `(N + ½)ħω`.
pub fn oscillator_eigenfunction(degree: u32, omega: f64, hbar: f64, x: f64) -> f64 {
    let scale = (omega / hbar).sqrt();
    let factorial: f64 = (1..=degree).map(f64::from).product();
    let norm = (scale / PI.sqrt() / (2f64.powi(degree as i32) * factorial)).sqrt();
    let s = scale * x;
    norm * (-0.5 * s * s).exp() * hermite_polynomial(degree, s)
}

/// `E_N = Σⱼ (Nⱼ + ½) ħ ωⱼ`.
pub fn energy_level(omegas: &[f64], index: &MultiIndex, hbar: f64) -> Result<f64> {
    if omegas.len() != index.len() {
        return Err(Error::LengthMismatch { expected: omegas.len(), found: index.len() });
    }
    Ok(omegas.iter().zip(&index.0).map(|(w, &k)| (f64::from(k) + 0.5) * hbar * w).sum())
}

/// Energy ellipsoid `{½Mz·z ≤ E_N}` of the eigenstate `N`: shape `M`, level `2E_N`.
pub fn excited_fermi_ellipsoid(h: &QuadraticHamiltonian, index: &MultiIndex) -> Result<PhaseSpaceEllipsoid> {
    let frame = h.normal_form()?;
    let energy = energy_level(&frame.spectrum.values, index, h.hbar)?;
    PhaseSpaceEllipsoid::centered(h.m.clone(), 2.0 * energy)
}

/// Comparison of the energy-ellipsoid capacity with `Σⱼ (Nⱼ + ½) h`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimReport {
    /// Capacity of the energy ellipsoid, from the capacity pipeline.
    pub lhs: f64,
    /// `Σⱼ (Nⱼ + ½) h` with `h = 2πħ`.
    pub rhs: f64,
    pub ratio: f64,
    #[serde(rename = "match")]
    pub matches: bool,
    /// Closed form `h Σⱼ (Nⱼ + ½) ωⱼ / ω_max` of `lhs`.
    pub expected_lhs: f64,
}

pub fn claim_check(h: &QuadraticHamiltonian, index: &MultiIndex) -> Result<ClaimReport> {
    let frame = h.normal_form()?;
    let omegas = &frame.spectrum.values;
    if omegas.len() != index.len() {
        return Err(Error::LengthMismatch { expected: omegas.len(), found: index.len() });
    }
    let planck = 2.0 * PI * h.hbar;
    let lhs = capacity(&excited_fermi_ellipsoid(h, index)?)?;
    let half_sum: f64 = index.0.iter().map(|&k| f64::from(k) + 0.5).sum();
    let rhs = half_sum * planck;
    let weighted: f64 = omegas.iter().zip(&index.0).map(|(w, &k)| (f64::from(k) + 0.5) * w).sum();
    let expected_lhs = planck * weighted / frame.spectrum.max();
    let ratio = lhs / rhs;
    Ok(ClaimReport { lhs, rhs, ratio, matches: (ratio - 1.0).abs() <= CLAIM_TOL, expected_lhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::random_spd;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Explicit sum `H_N(x) = N! Σₘ (−1)ᵐ (2x)^{N−2m} / (m! (N−2m)!)` from
    /// expanding the Rodrigues formula.
    fn hermite_explicit(degree: u32, x: f64) -> f64 {
        let fact = |k: u32| (1..=k).map(f64::from).product::<f64>();
        (0..=degree / 2)
            .map(|m| {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                sign * (2.0 * x).powi((degree - 2 * m) as i32) / (fact(m) * fact(degree - 2 * m))
            })
            .sum::<f64>()
            * fact(degree)
    }

    #[test]
    fn hermite_low_orders() {
        for x in [-1.5, 0.0, 0.3, 2.0] {
            assert_eq!(hermite_polynomial(0, x), 1.0);
            assert_eq!(hermite_polynomial(1, x), 2.0 * x);
        }
        assert_eq!(hermite_polynomial(2, 3.0), 34.0);
    }

    #[test]
    fn hermite_parity_and_explicit_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let x: f64 = rng.gen_range(-5.0..5.0);
            for n in 0..=10 {
                let (a, b) = (hermite_polynomial(n, x), hermite_polynomial(n, -x));
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                assert!((a - sign * b).abs() <= 1e-12 * a.abs().max(1.0));
                if n <= 8 {
                    let e = hermite_explicit(n, x);
                    assert!((a - e).abs() <= 1e-9 * e.abs().max(1.0), "N={n} x={x}: {a} vs {e}");
                }
            }
        }
    }

    #[test]
    fn eigenfunction_is_normalized() {
        for (n, omega, hbar) in [(0, 1.0, 1.0), (3, 2.0, 0.5), (7, 0.7, 1.3)] {
            let h = 0.005;
            let mass: f64 =
                (-4000..=4000).map(|k| oscillator_eigenfunction(n, omega, hbar, k as f64 * h).powi(2)).sum::<f64>() * h;
            assert!((mass - 1.0).abs() < 1e-10, "N={n}: {mass}");
        }
        let ratio = oscillator_eigenfunction(2, 1.0, 1.0, 0.4) / hermite_function(2, 0.4, 1.0);
        let ratio2 = oscillator_eigenfunction(2, 1.0, 1.0, 1.9) / hermite_function(2, 1.9, 1.0);
        assert!((ratio - ratio2).abs() < 1e-12);
    }

    #[test]
    fn energy_levels() {
        let hbar = 0.9;
        assert_eq!(energy_level(&[1.0], &MultiIndex(vec![0]), hbar).unwrap(), 0.5 * hbar);
        assert_eq!(energy_level(&[1.0], &MultiIndex(vec![3]), hbar).unwrap(), 3.5 * hbar);
        assert_eq!(energy_level(&[1.0, 2.0], &MultiIndex(vec![0, 1]), 1.0).unwrap(), 3.5);
        assert!(matches!(energy_level(&[1.0], &MultiIndex(vec![0, 0]), 1.0), Err(Error::LengthMismatch { .. })));
        // slope ħωⱼ in each quantum number
        let omegas = [0.7, 1.9];
        let base = energy_level(&omegas, &MultiIndex(vec![2, 5]), hbar).unwrap();
        let up = energy_level(&omegas, &MultiIndex(vec![2, 6]), hbar).unwrap();
        assert!((up - base - hbar * 1.9).abs() < 1e-14);
    }

    #[test]
    fn excited_disks() {
        let hbar = 1.0;
        let h = QuadraticHamiltonian::from_frequencies(&[1.0], hbar).unwrap();
        let e = excited_fermi_ellipsoid(&h, &MultiIndex(vec![0])).unwrap();
        assert!((e.level() - hbar).abs() < 1e-12);
        for n in 0..6u32 {
            let e = excited_fermi_ellipsoid(&h, &MultiIndex(vec![n])).unwrap();
            // ½(x² + p²) ≤ (N + ½)ħ  ⇔  x² + p² ≤ (2N + 1)ħ
            assert!((e.level() - (2 * n + 1) as f64 * hbar).abs() < 1e-12);
            let area = capacity(&e).unwrap();
            assert!((area - (f64::from(n) + 0.5) * 2.0 * PI * hbar).abs() < 1e-11);
        }
    }

    #[test]
    fn ground_state_ellipsoid_of_gaussian_hamiltonian() {
        // M = G from a Gaussian: capacity of the ground-state energy ellipsoid is ≥ h/2
        let g = crate::gaussian::GaussianState::scalar(2.0, 0.5, 1.0).unwrap();
        let m = crate::gaussian::wigner_matrix(&g).unwrap();
        let h = QuadraticHamiltonian::new(m, 1.0).unwrap();
        let e = excited_fermi_ellipsoid(&h, &MultiIndex::ground(1)).unwrap();
        assert!(capacity(&e).unwrap() >= PI * (1.0 - 1e-12));
    }

    #[test]
    fn claim_examples() {
        let planck = 2.0 * PI;
        for omega in [0.3, 1.0, 4.0] {
            let h = QuadraticHamiltonian::from_frequencies(&[omega], 1.0).unwrap();
            let r = claim_check(&h, &MultiIndex(vec![2])).unwrap();
            assert!((r.lhs - 2.5 * planck).abs() < 1e-10 && r.matches);
            assert!((r.lhs - 2.0 * PI * 2.5 * omega / omega).abs() < 1e-10);
        }
        let h = QuadraticHamiltonian::from_frequencies(&[1.0, 1.0], 1.0).unwrap();
        let r = claim_check(&h, &MultiIndex(vec![1, 0])).unwrap();
        assert!((r.lhs - 2.0 * planck).abs() < 1e-10 && (r.rhs - 2.0 * planck).abs() < 1e-12 && r.matches);

        let h = QuadraticHamiltonian::from_frequencies(&[1.0, 2.0], 1.0).unwrap();
        let r = claim_check(&h, &MultiIndex(vec![0, 1])).unwrap();
        assert!((r.lhs - 1.75 * planck).abs() < 1e-10);
        assert!((r.rhs - 2.0 * planck).abs() < 1e-12);
        assert!((r.ratio - 0.875).abs() < 1e-9 && !r.matches);
        assert!((r.expected_lhs - r.lhs).abs() <= 1e-9 * r.lhs);
    }

    #[test]
    fn normal_form_reproduces_hamiltonian() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for n in 1..=3 {
            let h = QuadraticHamiltonian::new(random_spd(&mut rng, 2 * n), 1.0).unwrap();
            let frame = h.normal_form().unwrap();
            let inv = frame.map.inverse();
            for _ in 0..100 {
                let z: Vec<f64> = (0..2 * n).map(|_| rng.gen_range(-2.0..2.0)).collect();
                let w = inv.apply(&z);
                let k: f64 = (0..n).map(|j| 0.5 * frame.spectrum.values[j] * (w[j] * w[j] + w[n + j] * w[n + j])).sum();
                let hz = h.value(&z);
                assert!((k - hz).abs() <= 1e-8 * hz.abs().max(1e-3));
            }
        }
    }

    #[test]
    fn hamiltonian_json() {
        let text = r#"{"n":1,"hbar":1.0,"M":{"dim":2,"entries":[[2.0,0.0],[0.0,1.0]]}}"#;
        let h: QuadraticHamiltonian = serde_json::from_str(text).unwrap();
        assert_eq!(h.n(), 1);
        assert_eq!(serde_json::to_string(&h).unwrap(), text);
        let r = claim_check(&h, &MultiIndex(vec![0])).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        for key in ["lhs", "rhs", "ratio", "match", "expected_lhs"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
    }
}
