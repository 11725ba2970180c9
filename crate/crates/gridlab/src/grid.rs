//! Uniform grids, sampled wavefunctions and phase-space sample grids.

use std::f64::consts::PI;

use fermiblob::{eval_wavefunction, GaussianState};
use num_complex::Complex64;

use crate::error::{GridError, Result};

/// Uniform grid of `count` points on `[xmin, xmax]`, endpoints included.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid1D {
    xmin: f64,
    xmax: f64,
    count: usize,
}

impl Grid1D {
    pub const MIN_POINTS: usize = 16;

    pub fn new(xmin: f64, xmax: f64, count: usize) -> Result<Self> {
        if !(xmin.is_finite() && xmax.is_finite() && xmax > xmin) {
            return Err(GridError::InvalidGrid(format!("need xmin < xmax, got [{xmin}, {xmax}]")));
        }
        if count < Self::MIN_POINTS {
            return Err(GridError::InvalidGrid(format!("need at least {} points, got {count}", Self::MIN_POINTS)));
        }
        Ok(Self { xmin, xmax, count })
    }

    pub fn symmetric(half_width: f64, count: usize) -> Result<Self> {
        Self::new(-half_width, half_width, count)
    }

    /// `count` points on `[−12√ħ, 12√ħ]`.
    pub fn standard(hbar: f64, count: usize) -> Result<Self> {
        Self::symmetric(12.0 * hbar.sqrt(), count)
    }

    pub fn xmin(&self) -> f64 {
        self.xmin
    }

    pub fn xmax(&self) -> f64 {
        self.xmax
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn spacing(&self) -> f64 {
        (self.xmax - self.xmin) / (self.count - 1) as f64
    }

    pub fn point(&self, k: usize) -> f64 {
        if k + 1 == self.count {
            self.xmax
        } else {
            self.xmin + k as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.count).map(|k| self.point(k)).collect()
    }

    /// Same interval with the spacing halved; every old node stays a node.
    pub fn refined(&self) -> Self {
        Self { count: 2 * (self.count - 1) + 1, ..*self }
    }

    /// Smallest distance from the origin to either end.
    pub fn half_width(&self) -> f64 {
        (-self.xmin).min(self.xmax)
    }

    /// Index of the node closest to `x`, clamped to the grid.
    pub fn nearest_index(&self, x: f64) -> usize {
        let t = ((x - self.xmin) / self.spacing()).round();
        t.clamp(0.0, (self.count - 1) as f64) as usize
    }

    /// Trapezoid rule for samples on this grid.
    pub fn trapezoid(&self, values: &[f64]) -> f64 {
        let inner: f64 = values.iter().sum();
        self.spacing() * (inner - 0.5 * (values[0] + values[values.len() - 1]))
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.count {
            return Err(GridError::LengthMismatch { expected: self.count, found: len });
        }
        Ok(())
    }
}

/// Complex samples `Ψ(x_k)` on a [`Grid1D`].
#[derive(Clone, Debug, PartialEq)]
pub struct SampledWavefunction {
    grid: Grid1D,
    values: Vec<Complex64>,
    hbar: f64,
}

impl SampledWavefunction {
    pub fn new(grid: Grid1D, values: Vec<Complex64>, hbar: f64) -> Result<Self> {
        grid.check_len(values.len())?;
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(GridError::InvalidSamples(format!("hbar must be positive, got {hbar}")));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(GridError::InvalidSamples("non-finite sample".into()));
        }
        let psi = Self { grid, values, hbar };
        if psi.norm_sqr() <= 0.0 {
            return Err(GridError::InvalidSamples("wavefunction has zero norm".into()));
        }
        Ok(psi)
    }

    pub fn from_fn(grid: Grid1D, hbar: f64, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        Self::new(grid, grid.points().into_iter().map(f).collect(), hbar)
    }

    /// Samples of a one-dimensional Gaussian state.
    pub fn from_gaussian(g: &GaussianState, grid: Grid1D) -> Result<Self> {
        if g.n() != 1 {
            return Err(GridError::InvalidSamples(format!("grid numerics need n = 1, got n = {}", g.n())));
        }
        let values = grid.points().iter().map(|&x| eval_wavefunction(g, &[x])).collect::<fermiblob::Result<_>>()?;
        Self::new(grid, values, g.hbar())
    }

    /// `Ψ = R e^{iΦ/ħ}`.
    pub fn from_polar(grid: Grid1D, r: &[f64], phi: &[f64], hbar: f64) -> Result<Self> {
        grid.check_len(r.len())?;
        grid.check_len(phi.len())?;
        let values = r.iter().zip(phi).map(|(&a, &p)| Complex64::from_polar(a, p / hbar)).collect();
        Self::new(grid, values, hbar)
    }

    /// `(R, Φ)` with `R = |Ψ|` and `Φ = ħ arg Ψ` unwrapped along the grid.
    /// Only defined when `Ψ` has no zeros on the grid.
    pub fn polar(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let r: Vec<f64> = self.values.iter().map(|v| v.norm()).collect();
        if let Some(k) = r.iter().position(|&a| a == 0.0) {
            return Err(GridError::HasNodes { x: self.grid.point(k) });
        }
        let mut phi = Vec::with_capacity(r.len());
        let mut prev = self.values[0].arg();
        let mut turns = 0.0;
        phi.push(prev * self.hbar);
        for v in &self.values[1..] {
            let a = v.arg();
            let jump = a - prev;
            if jump > PI {
                turns -= 1.0;
            } else if jump < -PI {
                turns += 1.0;
            }
            prev = a;
            phi.push((a + 2.0 * PI * turns) * self.hbar);
        }
        Ok((r, phi))
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// `∫|Ψ|²` by the trapezoid rule.
    pub fn norm_sqr(&self) -> f64 {
        let density: Vec<f64> = self.values.iter().map(|v| v.norm_sqr()).collect();
        self.grid.trapezoid(&density)
    }

    /// Linear interpolation; zero outside the grid.
    pub fn value_at(&self, x: f64) -> Complex64 {
        let t = (x - self.grid.xmin) / self.grid.spacing();
        if !(0.0..=(self.grid.count - 1) as f64).contains(&t) {
            return Complex64::new(0.0, 0.0);
        }
        let k = (t.floor() as usize).min(self.grid.count - 2);
        let w = t - k as f64;
        self.values[k] * (1.0 - w) + self.values[k + 1] * w
    }

    /// `max |Ψ|` over the grid.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Rectangular sample grid in the `(x, p)` plane.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseGrid {
    pub xs: Vec<f64>,
    pub ps: Vec<f64>,
}

impl PhaseGrid {
    pub fn uniform(x: (f64, f64), p: (f64, f64), nx: usize, np: usize) -> Self {
        let axis = |(lo, hi): (f64, f64), m: usize| -> Vec<f64> {
            if m == 1 {
                return vec![0.5 * (lo + hi)];
            }
            (0..m).map(|k| lo + (hi - lo) * k as f64 / (m - 1) as f64).collect()
        };
        Self { xs: axis(x, nx), ps: axis(p, np) }
    }

    /// `nx x np` points covering `center ± k·sigma`, with the `x` coordinates
    /// moved onto the half-node lattice of `grid` and kept inside it.
    pub fn covering(grid: &Grid1D, center: (f64, f64), sigma: (f64, f64), k: f64, nx: usize, np: usize) -> Self {
        let lo = (center.0 - k * sigma.0).max(grid.xmin());
        let hi = (center.0 + k * sigma.0).min(grid.xmax());
        let uniform = Self::uniform((lo, hi), (center.1 - k * sigma.1, center.1 + k * sigma.1), nx, np);
        uniform.snapped(grid)
    }

    /// Moves every `x` onto the nearest node or cell midpoint of `grid`, where
    /// the Wigner quadrature needs no interpolation.
    pub fn snapped(mut self, grid: &Grid1D) -> Self {
        let h = 0.5 * grid.spacing();
        let top = 2.0 * (grid.count() - 1) as f64;
        for x in &mut self.xs {
            let q = ((*x - grid.xmin()) / h).round().clamp(0.0, top);
            *x = grid.xmin() + q * h;
        }
        self
    }

    pub fn len(&self) -> usize {
        self.xs.len() * self.ps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major `(x, p)` pairs, `x` outer.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().flat_map(move |&x| self.ps.iter().map(move |&p| (x, p)))
    }
}

/// Real samples on a [`PhaseGrid`], row-major with `x` outer.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseField {
    pub grid: PhaseGrid,
    pub values: Vec<f64>,
}

impl PhaseField {
    pub fn at(&self, ix: usize, ip: usize) -> f64 {
        self.values[ix * self.grid.ps.len() + ip]
    }

    /// Two-dimensional trapezoid rule; the axes must be uniform.
    pub fn integral(&self) -> f64 {
        let weights = |axis: &[f64]| -> Vec<f64> {
            let m = axis.len();
            let h = (axis[m - 1] - axis[0]) / (m - 1) as f64;
            (0..m).map(|k| if k == 0 || k + 1 == m { 0.5 * h } else { h }).collect()
        };
        let (wx, wp) = (weights(&self.grid.xs), weights(&self.grid.ps));
        let mut total = 0.0;
        for (ix, a) in wx.iter().enumerate() {
            for (ip, b) in wp.iter().enumerate() {
                total += a * b * self.at(ix, ip);
            }
        }
        total
    }
}
