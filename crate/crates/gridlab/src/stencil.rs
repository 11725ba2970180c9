//! Centered finite-difference stencils on uniform grids.

use num_complex::Complex64;

/// Accuracy order of a centered stencil.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StencilOrder {
    Second,
    Fourth,
}

impl StencilOrder {
    /// Number of neighbours needed on each side.
    pub fn reach(self) -> usize {
        match self {
            StencilOrder::Second => 1,
            StencilOrder::Fourth => 2,
        }
    }
}

pub fn first_derivative(f: &[Complex64], k: usize, dx: f64, order: StencilOrder) -> Complex64 {
    match order {
        StencilOrder::Second => (f[k + 1] - f[k - 1]) / (2.0 * dx),
        StencilOrder::Fourth => (f[k - 2] - f[k - 1] * 8.0 + f[k + 1] * 8.0 - f[k + 2]) / (12.0 * dx),
    }
}

pub fn second_derivative(f: &[Complex64], k: usize, dx: f64, order: StencilOrder) -> Complex64 {
    match order {
        StencilOrder::Second => (f[k + 1] - f[k] * 2.0 + f[k - 1]) / (dx * dx),
        StencilOrder::Fourth => {
            (-f[k - 2] + f[k - 1] * 16.0 - f[k] * 30.0 + f[k + 1] * 16.0 - f[k + 2]) / (12.0 * dx * dx)
        }
    }
}

/// Second-order central first derivative of real samples.
pub fn d1(f: &[f64], k: usize, dx: f64) -> f64 {
    (f[k + 1] - f[k - 1]) / (2.0 * dx)
}

/// Compact three-point second derivative of real samples.
pub fn d2(f: &[f64], k: usize, dx: f64) -> f64 {
    (f[k + 1] - 2.0 * f[k] + f[k - 1]) / (dx * dx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples(h: f64, f: impl Fn(f64) -> f64) -> Vec<Complex64> {
        (0..5).map(|k| Complex64::new(f((k as f64 - 2.0) * h), 0.0)).collect()
    }

    #[test]
    fn stencils_are_exact_on_low_degree_polynomials() {
        let h = 0.1;
        let cubic = samples(h, |x| 1.0 + 2.0 * x - x * x + 0.5 * x * x * x);
        assert!((first_derivative(&cubic, 2, h, StencilOrder::Fourth).re - 2.0).abs() < 1e-12);
        assert!((second_derivative(&cubic, 2, h, StencilOrder::Fourth).re + 2.0).abs() < 1e-10);
        let quad = samples(h, |x| 3.0 * x * x - x);
        assert!((first_derivative(&quad, 2, h, StencilOrder::Second).re + 1.0).abs() < 1e-12);
        assert!((second_derivative(&quad, 2, h, StencilOrder::Second).re - 6.0).abs() < 1e-10);
    }

    #[test]
    fn fourth_order_error_drops_sixteenfold() {
        let err = |h: f64| {
            let f = samples(h, f64::sin);
            (second_derivative(&f, 2, h, StencilOrder::Fourth).re + 0.0f64.sin()).abs()
                + (first_derivative(&f, 2, h, StencilOrder::Fourth).re - 1.0).abs()
        };
        let ratio = err(0.2) / err(0.1);
        assert!((14.0..18.0).contains(&ratio), "ratio {ratio}");
    }
}
