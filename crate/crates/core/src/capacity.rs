//! Phase-space ellipsoids, their symplectic capacities, and quantum blobs.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{dot, SymmetricMatrix};
use crate::sampling::random_unit_vector;
use crate::symplectic::{symplectic_spectrum, williamson, SymplecticMatrix, SymplecticSpectrum};

/// Boundary samples used to certify that an inscribed blob lies inside its ellipsoid.
pub const CERTIFY_SAMPLES: usize = 10_000;
/// Smallest acceptable containment margin.
pub const CERTIFY_MARGIN: f64 = -1e-9;

/// The set `{z : M(z − z₀)·(z − z₀) ≤ r}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EllipsoidRepr", into = "EllipsoidRepr")]
pub struct PhaseSpaceEllipsoid {
    center: Vec<f64>,
    shape: SymmetricMatrix,
    level: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct EllipsoidRepr {
    n: usize,
    center: Vec<f64>,
    shape: SymmetricMatrix,
    level: f64,
}

impl TryFrom<EllipsoidRepr> for PhaseSpaceEllipsoid {
    type Error = Error;
    fn try_from(r: EllipsoidRepr) -> Result<Self> {
        if r.shape.dim() != 2 * r.n {
            return Err(Error::DimensionMismatch { expected: 2 * r.n, found: r.shape.dim() });
        }
        PhaseSpaceEllipsoid::new(r.center, r.shape, r.level)
    }
}

impl From<PhaseSpaceEllipsoid> for EllipsoidRepr {
    fn from(e: PhaseSpaceEllipsoid) -> Self {
        EllipsoidRepr { n: e.n(), center: e.center, shape: e.shape, level: e.level }
    }
}

impl PhaseSpaceEllipsoid {
    pub fn new(center: Vec<f64>, shape: SymmetricMatrix, level: f64) -> Result<Self> {
        let d = shape.dim();
        if !d.is_multiple_of(2) {
            return Err(Error::OddDimension(d));
        }
        if center.len() != d {
            return Err(Error::LengthMismatch { expected: d, found: center.len() });
        }
        if !(level.is_finite() && level > 0.0) {
            return Err(Error::InvalidInput(format!("ellipsoid level must be positive, got {level}")));
        }
        if center.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("ellipsoid center must be finite".into()));
        }
        shape.require_positive_definite()?;
        Ok(Self { center, shape, level })
    }

    /// Centered ellipsoid `Mz·z ≤ r`.
    pub fn centered(shape: SymmetricMatrix, level: f64) -> Result<Self> {
        let d = shape.dim();
        Self::new(vec![0.0; d], shape, level)
    }

    /// The ball `|z|² ≤ R²` in `ℝ²ⁿ`.
    pub fn ball(n: usize, radius: f64) -> Result<Self> {
        Self::centered(SymmetricMatrix::identity(2 * n), radius * radius)
    }

    pub fn n(&self) -> usize {
        self.center.len() / 2
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn shape(&self) -> &SymmetricMatrix {
        &self.shape
    }

    pub fn level(&self) -> f64 {
        self.level
    }

    /// Same point set at level 1.
    pub fn normalize(&self) -> Self {
        Self { center: self.center.clone(), shape: self.shape.scale(1.0 / self.level), level: 1.0 }
    }

    /// `λΩ = {λz : z ∈ Ω}`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if lambda == 0.0 || !lambda.is_finite() {
            return Err(Error::InvalidInput("scale factor must be finite and nonzero".into()));
        }
        Ok(Self {
            center: self.center.iter().map(|c| lambda * c).collect(),
            shape: self.shape.clone(),
            level: self.level * lambda * lambda,
        })
    }

    /// Image `{Sz : z ∈ Ω}` under a linear symplectic map.
    pub fn image(&self, s: &SymplecticMatrix) -> Result<Self> {
        if s.as_matrix().rows() != self.center.len() {
            return Err(Error::DimensionMismatch { expected: self.center.len(), found: s.as_matrix().rows() });
        }
        let inv = s.inverse();
        Ok(Self { center: s.apply(&self.center), shape: self.shape.congruence(inv.as_matrix()), level: self.level })
    }

    /// `M(z − z₀)·(z − z₀) / r`; at most 1 inside the ellipsoid.
    pub fn gauge(&self, z: &[f64]) -> f64 {
        let d: Vec<f64> = z.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        self.shape.quad_form(&d) / self.level
    }

    pub fn contains(&self, z: &[f64]) -> bool {
        self.gauge(z) <= 1.0
    }

    /// Symplectic spectrum of the level-1 shape matrix `M/r`.
    pub fn normalized_spectrum(&self) -> Result<SymplecticSpectrum> {
        symplectic_spectrum(&self.shape.scale(1.0 / self.level))
    }
}

/// Symplectic capacity `π r / λ_max` of an ellipsoid, where `λ_max` is the
/// largest symplectic eigenvalue of its shape matrix.
pub fn capacity(e: &PhaseSpaceEllipsoid) -> Result<f64> {
    let spec = symplectic_spectrum(e.shape())?;
    Ok(PI * e.level() / spec.max())
}

#[derive(Debug, PartialEq)]
struct Progression {
    value: f64,
    step: f64,
    multiple: u64,
    index: usize,
}

impl Eq for Progression {}

impl Ord for Progression {
    // min-heap on value; ties resolved by progression index for determinism
    fn cmp(&self, other: &Self) -> Ordering {
        other.value.total_cmp(&self.value).then_with(|| other.index.cmp(&self.index))
    }
}

impl PartialOrd for Progression {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// First `k` Ekeland–Hofer capacities: the sorted multiset
/// `{N·π r/λⱼ : N ≥ 1, j = 1…n}` with repetitions.
pub fn eh_capacities(e: &PhaseSpaceEllipsoid, k: usize) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(Error::InvalidInput("need at least one Ekeland–Hofer capacity".into()));
    }
    let spec = symplectic_spectrum(e.shape())?;
    let mut heap: BinaryHeap<Progression> = spec
        .values
        .iter()
        .enumerate()
        .map(|(index, lambda)| {
            let step = PI * e.level() / lambda;
            Progression { value: step, step, multiple: 1, index }
        })
        .collect();
    let mut out = Vec::with_capacity(k);
    while out.len() < k {
        let mut top = heap.pop().expect("heap holds one progression per eigenvalue");
        out.push(top.value);
        top.multiple += 1;
        top.value = top.multiple as f64 * top.step;
        heap.push(top);
    }
    Ok(out)
}

/// Area of the central section `Ω ∩ {z₀ + αu + βv}`.
///
/// In the `(α, β)` chart the section is `Q(α, β)·(α, β) ≤ r` with Gram form
/// `Q₁₁ = Mu·u`, `Q₁₂ = Mu·v`, `Q₂₂ = Mv·v`; its area there is `πr/√det Q`,
/// and the chart's area element `|u ∧ v|` converts it to Euclidean area in the
/// plane, so the result does not depend on the basis chosen.
pub fn plane_section_area(e: &PhaseSpaceEllipsoid, u: &[f64], v: &[f64]) -> Result<f64> {
    let d = e.center().len();
    for w in [u, v] {
        if w.len() != d {
            return Err(Error::LengthMismatch { expected: d, found: w.len() });
        }
    }
    let (uu, vv, uv) = (dot(u, u), dot(v, v), dot(u, v));
    let gram = uu * vv - uv * uv;
    if !(gram > 1e-12 * uu * vv) {
        return Err(Error::DegeneratePlane);
    }
    let m = e.shape().as_matrix();
    let (mu, mv) = (m.mul_vec(u), m.mul_vec(v));
    let det_q = dot(&mu, u) * dot(&mv, v) - dot(&mu, v) * dot(&mu, v);
    Ok(PI * e.level() * gram.sqrt() / det_q.sqrt())
}

/// `S(B²ⁿ(√ħ)) + z₀` for a symplectic `S`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BlobRepr", into = "BlobRepr")]
pub struct QuantumBlob {
    center: Vec<f64>,
    map: SymplecticMatrix,
    hbar: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct BlobRepr {
    center: Vec<f64>,
    map: SymplecticMatrix,
    hbar: f64,
}

impl TryFrom<BlobRepr> for QuantumBlob {
    type Error = Error;
    fn try_from(r: BlobRepr) -> Result<Self> {
        QuantumBlob::new(r.center, r.map, r.hbar)
    }
}

impl From<QuantumBlob> for BlobRepr {
    fn from(b: QuantumBlob) -> Self {
        BlobRepr { center: b.center, map: b.map, hbar: b.hbar }
    }
}

impl QuantumBlob {
    pub fn new(center: Vec<f64>, map: SymplecticMatrix, hbar: f64) -> Result<Self> {
        let d = map.as_matrix().rows();
        if center.len() != d {
            return Err(Error::LengthMismatch { expected: d, found: center.len() });
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidInput(format!("hbar must be positive, got {hbar}")));
        }
        Ok(Self { center, map, hbar })
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn map(&self) -> &SymplecticMatrix {
        &self.map
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// The blob as an ellipsoid: shape `(SSᵀ)⁻¹` at level `ħ`.
    pub fn as_ellipsoid(&self) -> Result<PhaseSpaceEllipsoid> {
        let d = self.center.len();
        let shape = SymmetricMatrix::identity(d).congruence(self.map.inverse().as_matrix());
        PhaseSpaceEllipsoid::new(self.center.clone(), shape, self.hbar)
    }

    /// Point `z₀ + √ħ·S w` for a unit vector `w`.
    pub fn boundary_point(&self, w: &[f64]) -> Vec<f64> {
        let root = self.hbar.sqrt();
        self.map.apply(w).iter().zip(&self.center).map(|(sw, c)| c + root * sw).collect()
    }
}

/// True iff every symplectic eigenvalue of `M/r` equals `1/ħ` to relative `tol`.
pub fn is_quantum_blob(e: &PhaseSpaceEllipsoid, hbar: f64, tol: f64) -> Result<bool> {
    let spec = e.normalized_spectrum()?;
    Ok(spec.values.iter().all(|lambda| (lambda * hbar - 1.0).abs() <= tol))
}

/// A quantum blob inside `e`, built in the Williamson frame of its shape.
///
/// With `SᵀMS = diag(Λ, Λ)` the ellipsoid reads `Σ λⱼ(wⱼ² + wₙ₊ⱼ²) ≤ r` in the
/// coordinates `z = z₀ + Sw`, which holds the ball `|w| ≤ √ħ` exactly when
/// `ħ λ_max ≤ r`, i.e. when the capacity is at least `πħ`. Containment is
/// certified on [`CERTIFY_SAMPLES`] random boundary points of the blob.
pub fn inscribed_quantum_blob(e: &PhaseSpaceEllipsoid, hbar: f64) -> Result<QuantumBlob> {
    inscribed_quantum_blob_seeded(e, hbar, 0)
}

/// [`inscribed_quantum_blob`] with an explicit seed for the certifying sampler.
pub fn inscribed_quantum_blob_seeded(e: &PhaseSpaceEllipsoid, hbar: f64, seed: u64) -> Result<QuantumBlob> {
    if !(hbar.is_finite() && hbar > 0.0) {
        return Err(Error::InvalidInput(format!("hbar must be positive, got {hbar}")));
    }
    let c = capacity(e)?;
    let minimum = PI * hbar;
    if c < minimum * (1.0 - 1e-9) {
        return Err(Error::TooSmall { capacity: c, minimum });
    }
    let frame = williamson(e.shape())?;
    let blob = QuantumBlob::new(e.center().to_vec(), frame.map, hbar)?;
    let margin = containment_margin(e, &blob, CERTIFY_SAMPLES, seed)?;
    if margin < CERTIFY_MARGIN {
        return Err(Error::ContainmentFailure { margin });
    }
    Ok(blob)
}

/// `min (1 − gauge)` over `samples` random boundary points of the blob plus the
/// `±` images of its frame axes; nonnegative (up to rounding) iff the sampled
/// boundary lies inside `e`.
pub fn containment_margin(e: &PhaseSpaceEllipsoid, blob: &QuantumBlob, samples: usize, seed: u64) -> Result<f64> {
    let d = e.center().len();
    if blob.center().len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: blob.center().len() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut margin = f64::INFINITY;
    for k in 0..2 * d {
        let mut w = vec![0.0; d];
        w[k / 2] = if k % 2 == 0 { 1.0 } else { -1.0 };
        margin = margin.min(1.0 - e.gauge(&blob.boundary_point(&w)));
    }
    for _ in 0..samples {
        let w = random_unit_vector(&mut rng, d);
        margin = margin.min(1.0 - e.gauge(&blob.boundary_point(&w)));
    }
    Ok(margin)
}

/// Algebraic containment margin for concentric ellipsoids:
/// `1 − λ_max(ħ SᵀMS / r)`, nonnegative iff the blob lies inside `e`.
pub fn loewner_containment_margin(e: &PhaseSpaceEllipsoid, blob: &QuantumBlob) -> Result<f64> {
    let pulled = e.shape().congruence(blob.map().as_matrix()).scale(blob.hbar() / e.level());
    let top = pulled.eigh()?.values.last().copied().unwrap_or(0.0);
    Ok(1.0 - top)
}

/// Conjugate-plane basis `(e_{xⱼ}, e_{pⱼ})` in `ℝ²ⁿ`.
pub fn conjugate_plane(n: usize, j: usize) -> (Vec<f64>, Vec<f64>) {
    let mut u = vec![0.0; 2 * n];
    let mut v = vec![0.0; 2 * n];
    u[j] = 1.0;
    v[n + j] = 1.0;
    (u, v)
}
