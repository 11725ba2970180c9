//! Finite-difference residuals of oscillator eigenstates.

use fermiblob::oscillator::oscillator_eigenfunction;
use num_complex::Complex64;

use crate::error::{GridError, Result};
use crate::grid::Grid1D;
use crate::stencil::{second_derivative, StencilOrder};

/// Smallest half-width that resolves the `N`-th eigenstate: 20 % beyond the
/// classical turning point plus three ground-state widths.
pub fn required_half_width(n: u32, omega: f64, hbar: f64) -> f64 {
    let width = (hbar / omega).sqrt();
    1.2 * ((2 * n + 1) as f64).sqrt() * width + 1.2 * 3.0 * width
}

/// `‖ĤΨ_N − (N + ½)ħωΨ_N‖ / ‖(N + ½)ħωΨ_N‖` with a fourth-order stencil.
pub fn eigen_residual(n: u32, omega: f64, grid: &Grid1D, hbar: f64) -> Result<f64> {
    let energy = (f64::from(n) + 0.5) * hbar * omega;
    eigen_residual_with(n, omega, grid, hbar, energy, StencilOrder::Fourth)
}

/// Residual of `Ĥ = ½(−ħ² d²/dx² + ω² x²)` on the `N`-th eigenfunction
/// against an arbitrary trial `energy`, relative to `‖energy · Ψ_N‖`.
pub fn eigen_residual_with(
    n: u32,
    omega: f64,
    grid: &Grid1D,
    hbar: f64,
    energy: f64,
    order: StencilOrder,
) -> Result<f64> {
    if !(omega.is_finite() && omega > 0.0 && hbar.is_finite() && hbar > 0.0) {
        return Err(GridError::InvalidSamples("omega and hbar must be positive".into()));
    }
    let required = required_half_width(n, omega, hbar);
    if grid.half_width() < required {
        return Err(GridError::GridTooNarrow { required, found: grid.half_width() });
    }
    let xs = grid.points();
    let psi: Vec<Complex64> =
        xs.iter().map(|&x| Complex64::new(oscillator_eigenfunction(n, omega, hbar, x), 0.0)).collect();
    let dx = grid.spacing();
    let reach = order.reach();
    let (mut num, mut den) = (0.0, 0.0);
    for k in reach..xs.len() - reach {
        let kinetic = -0.5 * hbar * hbar * second_derivative(&psi, k, dx, order).re;
        let potential = 0.5 * omega * omega * xs[k] * xs[k] * psi[k].re;
        num += (kinetic + potential - energy * psi[k].re).powi(2);
        den += (energy * psi[k].re).powi(2);
    }
    Ok((num / den).sqrt())
}
