use std::f64::consts::PI;

use fermiblob::{wigner_closed_form, GaussianState};
use gridlab::{wigner_numeric, Grid1D, PhaseGrid, SampledWavefunction};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn grid() -> Grid1D {
    Grid1D::standard(1.0, 2048).unwrap()
}

#[test]
fn fiducial_at_origin() {
    let psi = SampledWavefunction::from_gaussian(&GaussianState::fiducial(1, 1.0).unwrap(), grid()).unwrap();
    let z = PhaseGrid { xs: vec![0.0], ps: vec![0.0] }.snapped(&grid());
    let w = wigner_numeric(&psi, &z).unwrap();
    assert!((w.values[0] - 1.0 / PI).abs() <= 1e-6);
}

#[test]
fn random_gaussians_match_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let g = GaussianState::scalar(rng.gen_range(0.5..2.0), rng.gen_range(-1.0..1.0), 1.0).unwrap();
        let psi = SampledWavefunction::from_gaussian(&g, grid()).unwrap();
        let z = PhaseGrid::covering(&grid(), (0.0, 0.0), (1.5, 1.5), 2.0, 64, 64);
        let w = wigner_numeric(&psi, &z).unwrap();
        let err = z
            .points()
            .zip(&w.values)
            .map(|((x, p), v)| (v - wigner_closed_form(&g, &[x, p]).unwrap()).abs())
            .fold(0.0, f64::max);
        assert!(err <= 1e-6, "max error {err}");
    }
}

#[test]
fn phase_space_integral_is_the_norm() {
    let g = GaussianState::scalar(1.3, 0.4, 1.0).unwrap();
    let psi = SampledWavefunction::from_gaussian(&g, grid()).unwrap();
    // uniform x axis on the half-node lattice, wide enough that the
    // truncated mass is far below the tolerance
    let step = 10.0 * grid().spacing();
    let xs: Vec<f64> = (-60..=60).map(|k| f64::from(k) * step).collect();
    let ps = PhaseGrid::uniform((-7.0, 7.0), (-7.0, 7.0), 1, 121).ps;
    let z = PhaseGrid { xs, ps };
    let w = wigner_numeric(&psi, &z).unwrap();
    assert!((w.integral() - psi.norm_sqr()).abs() <= 1e-6, "integral {}", w.integral());
}

#[test]
fn off_lattice_rows_interpolate() {
    let g = GaussianState::fiducial(1, 1.0).unwrap();
    let psi = SampledWavefunction::from_gaussian(&g, grid()).unwrap();
    let x = 0.3 + 0.25 * grid().spacing();
    let w = wigner_numeric(&psi, &PhaseGrid { xs: vec![x], ps: vec![0.2] }).unwrap();
    let exact = wigner_closed_form(&g, &[x, 0.2]).unwrap();
    assert!((w.values[0] - exact).abs() < 1e-4);
}

#[test]
fn odd_states_are_negative_at_the_origin() {
    // W of the first excited state at the origin is −1/πħ
    let psi = SampledWavefunction::from_fn(grid(), 1.0, |x| {
        Complex64::new(fermiblob::oscillator::oscillator_eigenfunction(1, 1.0, 1.0, x), 0.0)
    })
    .unwrap();
    let z = PhaseGrid { xs: vec![0.0], ps: vec![0.0] }.snapped(&grid());
    let w = wigner_numeric(&psi, &z).unwrap();
    assert!((w.values[0] + 1.0 / PI).abs() < 1e-6, "{}", w.values[0]);
}

#[test]
fn output_is_deterministic() {
    let g = GaussianState::scalar(0.8, -0.6, 1.0).unwrap();
    let psi = SampledWavefunction::from_gaussian(&g, grid()).unwrap();
    let z = PhaseGrid::covering(&grid(), (0.0, 0.0), (1.0, 1.0), 3.0, 16, 16);
    let a = wigner_numeric(&psi, &z).unwrap();
    let b = wigner_numeric(&psi, &z).unwrap();
    assert!(a.values.iter().zip(&b.values).all(|(x, y)| x.to_bits() == y.to_bits()));
}
