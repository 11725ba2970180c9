//! Finite-difference Fermi operator and Fermi contours for `Ψ = R e^{iΦ/ħ}`.
//!
//! The operator `(−iħ d/dx − Φ′)² + ħ² R″/R` is discretized with the
//! gauge-covariant difference
//! `(Af)_k = e^{iΦ_k/ħ} (−iħ) (e^{−iΦ_{k+1}/ħ} f_{k+1} − e^{−iΦ_{k−1}/ħ} f_{k−1}) / 2Δx`,
//! which is the plain centered difference in the frame where the phase has
//! been removed. `R″` uses the compact three-point stencil.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{GridError, Result};
use crate::grid::{Grid1D, PhaseField, PhaseGrid};
use crate::stencil::{d1, d2};

/// Points with `R < MASK_TOL · max R` are excluded.
pub const MASK_TOL: f64 = 1e-6;

/// Excluded points are widened by this many cells on each side.
pub const MASK_DILATION: usize = 4;

/// A local minimum of `R` whose relative second difference exceeds
/// this is treated as an unresolved zero of `Ψ`.
pub const KINK_RATIO: f64 = 0.1;

/// `|g_F|` below this fraction of `max |g_F|` counts as an exact zero.
pub const CONTOUR_ZERO_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct FermiResidual {
    pub residual_norm: f64,
    /// `true` where the point took part in the residual.
    pub field_mask: Vec<bool>,
}

fn validate(r: &[f64], phi: &[f64], grid: &Grid1D) -> Result<()> {
    grid.check_len(r.len())?;
    grid.check_len(phi.len())?;
    if r.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
        return Err(GridError::InvalidSamples("R must be finite and nonnegative".into()));
    }
    if phi.iter().any(|a| !a.is_finite()) {
        return Err(GridError::InvalidSamples("Φ must be finite".into()));
    }
    Ok(())
}

/// Points kept for the Fermi operator: away from small amplitudes, from
/// unresolved zeros of `Ψ` and from the grid ends.
pub fn node_mask(r: &[f64]) -> Vec<bool> {
    let count = r.len();
    let top = r.iter().copied().fold(0.0, f64::max);
    let mut bad = vec![false; count];
    for k in 0..count {
        if r[k] == 0.0 || r[k] < MASK_TOL * top {
            bad[k] = true;
        } else if k > 0 && k + 1 < count && r[k] <= r[k - 1] && r[k] <= r[k + 1] {
            bad[k] = (r[k - 1] + r[k + 1] - 2.0 * r[k]) / r[k] > KINK_RATIO;
        }
    }
    let reach = 2;
    (0..count)
        .map(|k| {
            if k < reach || k + reach >= count {
                return false;
            }
            let lo = k.saturating_sub(MASK_DILATION);
            let hi = (k + MASK_DILATION).min(count - 1);
            !bad[lo..=hi].iter().any(|&b| b)
        })
        .collect()
}

/// Relative residual of the Fermi equation `ĝ_F Ψ = 0` over unmasked points.
///
/// Normalized by `‖ħ² Ψ″‖` on the same points, or by `‖Ψ‖` when that vanishes.
pub fn fermi_operator_residual(r: &[f64], phi: &[f64], grid: &Grid1D, hbar: f64) -> Result<FermiResidual> {
    validate(r, phi, grid)?;
    let mask = node_mask(r);
    if !mask.iter().any(|&m| m) {
        return Err(GridError::AllMasked);
    }
    let dx = grid.spacing();
    let count = grid.count();
    let gauge: Vec<Complex64> = phi.iter().map(|p| Complex64::cis(p / hbar)).collect();
    let psi: Vec<Complex64> = r.iter().zip(&gauge).map(|(a, u)| u * *a).collect();
    let minus_i_hbar = Complex64::new(0.0, -hbar);
    let covariant = |f: &[Complex64], k: usize| {
        let ahead = gauge[k + 1].conj() * f[k + 1];
        let behind = gauge[k - 1].conj() * f[k - 1];
        gauge[k] * minus_i_hbar * (ahead - behind) / (2.0 * dx)
    };
    let mut first = vec![Complex64::new(0.0, 0.0); count];
    for k in 1..count - 1 {
        first[k] = covariant(&psi, k);
    }
    let (mut num, mut den, mut plain) = (0.0, 0.0, 0.0);
    for k in (0..count).filter(|&k| mask[k]) {
        let curvature = hbar * hbar * d2(r, k, dx) / r[k];
        let value = covariant(&first, k) + psi[k] * curvature;
        num += value.norm_sqr();
        let lap = (psi[k + 1] - psi[k] * 2.0 + psi[k - 1]) * (hbar * hbar / (dx * dx));
        den += lap.norm_sqr();
        plain += psi[k].norm_sqr();
    }
    let scale = if den > 0.0 { den } else { plain };
    Ok(FermiResidual { residual_norm: (num / scale).sqrt(), field_mask: mask })
}

/// `g_F(x, p) = (p − Φ′)² + ħ² R″/R` on unmasked columns; masked columns hold NaN.
pub fn fermi_function_field(r: &[f64], phi: &[f64], grid: &Grid1D, p_axis: &Grid1D, hbar: f64) -> Result<PhaseField> {
    validate(r, phi, grid)?;
    let mask = node_mask(r);
    if !mask.iter().any(|&m| m) {
        return Err(GridError::AllMasked);
    }
    let dx = grid.spacing();
    let ps = p_axis.points();
    let values: Vec<f64> = (0..grid.count())
        .into_par_iter()
        .flat_map_iter(|k| {
            let row: Vec<f64> = if mask[k] {
                let drift = d1(phi, k, dx);
                let quantum = hbar * hbar * d2(r, k, dx) / r[k];
                ps.iter().map(|p| (p - drift).powi(2) + quantum).collect()
            } else {
                vec![f64::NAN; ps.len()]
            };
            row
        })
        .collect();
    Ok(PhaseField { grid: PhaseGrid { xs: grid.points(), ps }, values })
}

/// Zero set of `g_F` on the `(x, p)` grid: exact zeros at nodes plus sign
/// changes along grid edges, located by linear interpolation.
pub fn fermi_contour(r: &[f64], phi: &[f64], grid: &Grid1D, p_axis: &Grid1D, hbar: f64) -> Result<Vec<(f64, f64)>> {
    let field = fermi_function_field(r, phi, grid, p_axis, hbar)?;
    let (xs, ps) = (&field.grid.xs, &field.grid.ps);
    let scale = field.values.iter().filter(|v| v.is_finite()).fold(0.0f64, |m, v| m.max(v.abs()));
    let zero = CONTOUR_ZERO_TOL * scale;
    let sign = |v: f64| -> i8 {
        if v.is_nan() {
            0
        } else if v > zero {
            1
        } else if v < -zero {
            -1
        } else {
            0
        }
    };
    let crossing = |a: f64, b: f64| sign(a) * sign(b) < 0;
    let lerp = |a: f64, b: f64, u: f64, v: f64| u + (v - u) * a / (a - b);
    let mut points = Vec::new();
    for ix in 0..xs.len() {
        for ip in 0..ps.len() {
            let g = field.at(ix, ip);
            if g.is_nan() {
                continue;
            }
            if sign(g) == 0 {
                points.push((xs[ix], ps[ip]));
                continue;
            }
            if ip + 1 < ps.len() {
                let h = field.at(ix, ip + 1);
                if crossing(g, h) {
                    points.push((xs[ix], lerp(g, h, ps[ip], ps[ip + 1])));
                }
            }
            if ix + 1 < xs.len() {
                let h = field.at(ix + 1, ip);
                if crossing(g, h) {
                    points.push((lerp(g, h, xs[ix], xs[ix + 1]), ps[ip]));
                }
            }
        }
    }
    if points.is_empty() {
        return Err(GridError::NoContour);
    }
    Ok(points)
}
