use fermiblob::oscillator::oscillator_eigenfunction;
use gridlab::{fermi_contour, Grid1D, GridError};

fn radial_deviation(points: &[(f64, f64)], radius: f64) -> f64 {
    points.iter().map(|(x, p)| ((x * x + p * p).sqrt() - radius).abs()).fold(0.0, f64::max)
}

#[test]
fn fiducial_contour_is_the_unit_circle() {
    let hbar = 1.0;
    let grid = Grid1D::standard(hbar, 2048).unwrap();
    let r: Vec<f64> = grid.points().iter().map(|x| (-x * x / (2.0 * hbar)).exp()).collect();
    let p_axis = Grid1D::symmetric(3.0, 512).unwrap();
    let pts = fermi_contour(&r, &vec![0.0; grid.count()], &grid, &p_axis, hbar).unwrap();
    assert!(pts.len() > 100);
    assert!(radial_deviation(&pts, hbar.sqrt()) <= 2.0 * grid.spacing());
}

#[test]
fn hermite_contours_away_from_nodes() {
    let hbar = 1.0;
    let grid = Grid1D::standard(hbar, 2048).unwrap();
    for n in [1u32, 4, 10] {
        let r: Vec<f64> = grid.points().iter().map(|&x| oscillator_eigenfunction(n, 1.0, hbar, x).abs()).collect();
        let radius = ((2 * n + 1) as f64 * hbar).sqrt();
        let p_axis = Grid1D::symmetric(radius + 1.0, 512).unwrap();
        let pts = fermi_contour(&r, &vec![0.0; grid.count()], &grid, &p_axis, hbar).unwrap();
        let dev = radial_deviation(&pts, radius);
        assert!(dev <= 2.0 * grid.spacing(), "N = {n}: deviation {dev}");
    }
}

#[test]
fn plane_wave_contour_is_a_doubled_line() {
    let grid = Grid1D::symmetric(4.0, 128).unwrap();
    let p0 = 0.5;
    let r = vec![1.0; grid.count()];
    let phi: Vec<f64> = grid.points().iter().map(|x| p0 * x).collect();
    let p_axis = Grid1D::new(-1.0, 2.0, 31).unwrap();
    let pts = fermi_contour(&r, &phi, &grid, &p_axis, 1.0).unwrap();
    assert!(!pts.is_empty());
    assert!(pts.iter().all(|&(_, p)| (p - p0).abs() < 1e-12));
}

#[test]
fn constant_sign_has_no_contour() {
    let grid = Grid1D::symmetric(4.0, 128).unwrap();
    let r = vec![1.0; grid.count()];
    let p_axis = Grid1D::new(1.0, 2.0, 16).unwrap();
    let err = fermi_contour(&r, &vec![0.0; grid.count()], &grid, &p_axis, 1.0).unwrap_err();
    assert!(matches!(err, GridError::NoContour));
}
