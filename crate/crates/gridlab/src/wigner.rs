//! Wigner transform of sampled one-dimensional wavefunctions by quadrature.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{GridError, Result};
use crate::grid::{PhaseField, PhaseGrid, SampledWavefunction};

/// `|Ψ|` at both grid ends must be below this fraction of `max |Ψ|`.
pub const DECAY_TOL: f64 = 1e-12;

/// Largest imaginary part tolerated before it is discarded.
pub const IMAG_TOL: f64 = 1e-10;

pub(crate) fn require_decay(psi: &SampledWavefunction) -> Result<()> {
    let v = psi.values();
    let ratio = v[0].norm().max(v[v.len() - 1].norm()) / psi.max_abs();
    if ratio > DECAY_TOL {
        return Err(GridError::InsufficientDecay { ratio });
    }
    Ok(())
}

/// `WΨ(x, p) = (1/2πħ) ∫ e^{−ipy/ħ} Ψ(x + y/2) Ψ*(x − y/2) dy`.
///
/// The integral runs over `y = 2s` with step `Δs = Δx`. Rows whose `x` is a
/// grid node or a midpoint between nodes pair the samples directly, since
/// `x ± s` then land on nodes; other rows interpolate linearly. Rows are
/// evaluated in parallel, each summed in a fixed order.
pub fn wigner_numeric(psi: &SampledWavefunction, z: &PhaseGrid) -> Result<PhaseField> {
    require_decay(psi)?;
    let grid = psi.grid();
    let dx = grid.spacing();
    let hbar = psi.hbar();
    let values = psi.values();
    let rows: Vec<Result<Vec<f64>>> =
        z.xs.par_iter()
            .map(|&x| {
                let q = 2.0 * (x - grid.xmin()) / dx;
                let qi = q.round();
                let last = (grid.count() - 1) as isize;
                let exact = (q - qi).abs() < 1e-9 && qi >= 0.0 && qi <= 2.0 * last as f64;
                // samples (a, b) with a + b = q sit at x ± s, s = (a − b)Δx/2
                let (offsets, products): (Vec<f64>, Vec<Complex64>) = if exact {
                    let q = qi as isize;
                    ((q - last).max(0)..=q.min(last))
                        .map(|a| {
                            let b = q - a;
                            ((a - b) as f64 * 0.5 * dx, values[a as usize] * values[b as usize].conj())
                        })
                        .unzip()
                } else {
                    let reach = ((x - grid.xmin()).min(grid.xmax() - x) / dx).floor().max(0.0) as isize;
                    (-reach..=reach)
                        .map(|j| {
                            let s = j as f64 * dx;
                            (s, psi.value_at(x + s) * psi.value_at(x - s).conj())
                        })
                        .unzip()
                };
                z.ps.iter()
                    .map(|&p| {
                        let mut sum = Complex64::new(0.0, 0.0);
                        let last = products.len() - 1;
                        for (idx, (s, prod)) in offsets.iter().zip(&products).enumerate() {
                            let weight = if idx == 0 || idx == last { 0.5 } else { 1.0 };
                            sum += Complex64::cis(-2.0 * p * s / hbar) * prod * weight;
                        }
                        let w = sum * (dx / (PI * hbar));
                        if w.im.abs() > IMAG_TOL {
                            return Err(GridError::ComplexWigner { imag: w.im });
                        }
                        Ok(w.re)
                    })
                    .collect()
            })
            .collect();
    let mut out = Vec::with_capacity(z.len());
    for row in rows {
        out.extend(row?);
    }
    Ok(PhaseField { grid: z.clone(), values: out })
}
