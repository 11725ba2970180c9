//! One function per subcommand; each returns the JSON document to print.

use std::f64::consts::PI;
use std::fs::File;
use std::path::Path;

use fermiblob::capacity::{containment_margin, inscribed_quantum_blob_seeded, CERTIFY_SAMPLES};
use fermiblob::gaussian::wigner_with_matrix;
use fermiblob::oscillator::excited_fermi_ellipsoid;
use fermiblob::{
    capacity, claim_check, eh_capacities, fermi_capacity, fermi_factorization, fermi_form, is_quantum_blob, rs_check,
    symplectic_spectrum, wigner_matrix, williamson, GaussianState, MultiIndex, PhaseSpaceEllipsoid,
    QuadraticHamiltonian, SymmetricMatrix, SymplecticMatrix,
};
use gridlab::eigen::required_half_width;
use gridlab::io::{read_fields, write_contour, write_phase_field, write_wavefunction, PolarFields};
use gridlab::stencil::{d1, d2};
use gridlab::{
    covariance_check, eigen_residual, fermi_contour, fermi_operator_residual, metaplectic_apply, node_mask,
    wigner_numeric, Grid1D, MetaplecticData, PhaseField, PhaseGrid, SampledWavefunction,
};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::output::CliError;
use crate::{Cli, Command};

type Outcome = Result<Value, CliError>;

/// Side of the phase-space grid used by `wigner`.
const WIGNER_POINTS: usize = 64;

/// Half-width of that grid in standard deviations.
const WIGNER_SIGMAS: f64 = 4.0;

pub fn run(cli: &Cli) -> Outcome {
    if !(cli.hbar.is_finite() && cli.hbar > 0.0) {
        return Err(CliError::bad("BadInput", format!("--hbar must be positive, got {}", cli.hbar)));
    }
    if cli.grid_points < Grid1D::MIN_POINTS {
        return Err(CliError::bad("BadInput", format!("--grid-points must be at least {}", Grid1D::MIN_POINTS)));
    }
    match &cli.command {
        Command::Williamson { input } => run_williamson(input),
        Command::Spectrum { input } => {
            let m: SymmetricMatrix = read_json(input)?;
            Ok(to_value(&symplectic_spectrum(&m)?))
        }
        Command::Capacity { ellipsoid } => {
            let e: PhaseSpaceEllipsoid = read_json(ellipsoid)?;
            Ok(json!({ "capacity": capacity(&e)? }))
        }
        Command::Eh { ellipsoid, k } => {
            let e: PhaseSpaceEllipsoid = read_json(ellipsoid)?;
            Ok(to_value(&eh_capacities(&e, *k)?))
        }
        Command::Fermi { state } => run_fermi(state),
        Command::BlobCheck { ellipsoid } => {
            let e: PhaseSpaceEllipsoid = read_json(ellipsoid)?;
            let spectrum = e.normalized_spectrum()?;
            Ok(json!({
                "quantum_blob": is_quantum_blob(&e, cli.hbar, cli.tol)?,
                "hbar": cli.hbar,
                "normalized_spectrum": spectrum.values,
            }))
        }
        Command::Inscribe { ellipsoid } => run_inscribe(cli, ellipsoid),
        Command::Wigner { state, numeric, csv } => run_wigner(cli, state, *numeric, csv.as_deref()),
        Command::RsCheck { state } => {
            let g: GaussianState = read_json(state)?;
            Ok(to_value(&rs_check(&g)?))
        }
        Command::Hermite { n, omega, residual } => run_hermite(cli, *n, *omega, *residual),
        Command::ClaimCheck { omega, n } => {
            let h = QuadraticHamiltonian::from_frequencies(omega, cli.hbar)?;
            Ok(to_value(&claim_check(&h, &MultiIndex(n.clone()))?))
        }
        Command::FermiPde { fields } => {
            let f = read_polar(fields)?;
            let res = fermi_operator_residual(&f.r, &f.phi, &f.grid, cli.hbar)?;
            let kept = res.field_mask.iter().filter(|&&m| m).count();
            Ok(json!({
                "residual": res.residual_norm,
                "points": f.grid.count(),
                "masked": f.grid.count() - kept,
            }))
        }
        Command::Contour { fields, csv, pmax, p_points } => run_contour(cli, fields, csv, *pmax, *p_points),
        Command::Metaplectic { s, state, covariance, half_width, csv } => {
            run_metaplectic(cli, s, state, *covariance, *half_width, csv.as_deref())
        }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library types serialize to JSON")
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let file = File::open(path).map_err(|e| CliError::bad("Io", format!("{}: {e}", path.display())))?;
    serde_json::from_reader(file).map_err(|e| CliError::bad("BadInput", format!("{}: {e}", path.display())))
}

fn read_polar(path: &Path) -> Result<PolarFields, CliError> {
    let file = File::open(path).map_err(|e| CliError::bad("Io", format!("{}: {e}", path.display())))?;
    Ok(read_fields(file)?)
}

fn create(path: &Path) -> Result<File, CliError> {
    File::create(path).map_err(|e| CliError::bad("Io", format!("{}: {e}", path.display())))
}

fn require_one_dimensional(g: &GaussianState) -> Result<(), CliError> {
    if g.n() != 1 {
        return Err(CliError::bad("BadInput", format!("grid numerics need n = 1, got n = {}", g.n())));
    }
    Ok(())
}

fn run_williamson(input: &Path) -> Outcome {
    let m: SymmetricMatrix = read_json(input)?;
    let w = williamson(&m)?;
    Ok(json!({ "S": to_value(&w.map), "spectrum": to_value(&w.spectrum) }))
}

fn run_fermi(state: &Path) -> Outcome {
    let g: GaussianState = read_json(state)?;
    let form = fermi_form(&g);
    Ok(json!({
        "M_F": to_value(&form.matrix),
        "level": form.level,
        "S": to_value(&fermi_factorization(&g)?),
        "Gmat": to_value(&wigner_matrix(&g)?),
        "capacity": fermi_capacity(&g)?,
    }))
}

/// The inscribed blob as an ellipsoid document, so it can be fed back to
/// `capacity` or `blob-check`, plus its symplectic map and margin.
fn run_inscribe(cli: &Cli, ellipsoid: &Path) -> Outcome {
    let e: PhaseSpaceEllipsoid = read_json(ellipsoid)?;
    let blob = inscribed_quantum_blob_seeded(&e, cli.hbar, cli.seed)?;
    let margin = containment_margin(&e, &blob, CERTIFY_SAMPLES, cli.seed)?;
    let mut doc = to_value(&blob.as_ellipsoid()?);
    let obj = doc.as_object_mut().expect("ellipsoids serialize as objects");
    obj.insert("map".into(), to_value(blob.map()));
    obj.insert("hbar".into(), json!(cli.hbar));
    obj.insert("margin".into(), json!(margin));
    Ok(doc)
}

fn run_wigner(cli: &Cli, state: &Path, numeric: bool, csv: Option<&Path>) -> Outcome {
    let g: GaussianState = read_json(state)?;
    let gm = wigner_matrix(&g)?;
    let hbar = g.hbar();
    let peak = (PI * hbar).powi(-(g.n() as i32));
    let mut doc = json!({ "Gmat": to_value(&gm), "peak": peak });
    if !numeric && csv.is_none() {
        return Ok(doc);
    }
    require_one_dimensional(&g)?;
    let grid = Grid1D::standard(hbar, cli.grid_points)?;
    let cov = rs_check(&g)?.covariance;
    let c = cov.as_matrix();
    let spread = (c[(0, 0)].sqrt(), c[(1, 1)].sqrt());
    let z = PhaseGrid::covering(&grid, (0.0, 0.0), spread, WIGNER_SIGMAS, WIGNER_POINTS, WIGNER_POINTS);
    let closed: Vec<f64> = z.points().map(|(x, p)| wigner_with_matrix(&gm, hbar, &[x, p])).collect();
    let obj = doc.as_object_mut().expect("object");
    obj.insert("points".into(), json!(z.len()));
    let field = if numeric {
        let psi = SampledWavefunction::from_gaussian(&g, grid)?;
        let field = wigner_numeric(&psi, &z)?;
        let max_error = field.values.iter().zip(&closed).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        obj.insert("max_error".into(), json!(max_error));
        field
    } else {
        PhaseField { grid: z, values: closed }
    };
    if let Some(path) = csv {
        write_phase_field(create(path)?, &field)?;
        obj.insert("csv".into(), json!(path.display().to_string()));
    }
    Ok(doc)
}

fn run_hermite(cli: &Cli, n: u32, omega: f64, residual: bool) -> Outcome {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(CliError::bad("BadInput", format!("--omega must be positive, got {omega}")));
    }
    if n > fermiblob::oscillator::MAX_HERMITE_DEGREE {
        return Err(CliError::bad(
            "BadInput",
            format!("--N must be at most {}", fermiblob::oscillator::MAX_HERMITE_DEGREE),
        ));
    }
    let h = QuadraticHamiltonian::from_frequencies(&[omega], cli.hbar)?;
    let index = MultiIndex(vec![n]);
    let energy = (f64::from(n) + 0.5) * cli.hbar * omega;
    let cap = capacity(&excited_fermi_ellipsoid(&h, &index)?)?;
    let mut doc = json!({ "N": n, "omega": omega, "energy": energy, "capacity": cap });
    if residual {
        let half = (12.0 * (cli.hbar / omega).sqrt()).max(required_half_width(n, omega, cli.hbar));
        let grid = Grid1D::symmetric(half, cli.grid_points)?;
        doc["residual"] = json!(eigen_residual(n, omega, &grid, cli.hbar)?);
    }
    Ok(doc)
}

/// Momentum half-width that contains the contour: where `(p − Φ′)² = −ħ²R″/R`.
fn estimate_pmax(f: &PolarFields, hbar: f64) -> f64 {
    let dx = f.grid.spacing();
    let mask = node_mask(&f.r);
    let reach = (0..f.grid.count())
        .filter(|&k| mask[k])
        .map(|k| d1(&f.phi, k, dx).abs() + (-hbar * hbar * d2(&f.r, k, dx) / f.r[k]).max(0.0).sqrt())
        .fold(0.0, f64::max);
    1.25 * reach + hbar.sqrt()
}

fn run_contour(cli: &Cli, fields: &Path, csv: &Path, pmax: Option<f64>, p_points: usize) -> Outcome {
    let f = read_polar(fields)?;
    let pmax = pmax.unwrap_or_else(|| estimate_pmax(&f, cli.hbar));
    let p_axis = Grid1D::symmetric(pmax, p_points)?;
    let points = fermi_contour(&f.r, &f.phi, &f.grid, &p_axis, cli.hbar)?;
    write_contour(create(csv)?, &points)?;
    Ok(json!({ "points": points.len(), "pmax": pmax, "csv": csv.display().to_string() }))
}

/// `S` as blocks `{"A", "B", "C", "D", "maslov"?}` or as a `2 x 2` matrix document.
#[derive(Deserialize)]
#[serde(untagged)]
enum MetaplecticInput {
    Blocks {
        #[serde(rename = "A")]
        a: f64,
        #[serde(rename = "B")]
        b: f64,
        #[serde(rename = "C")]
        c: f64,
        #[serde(rename = "D")]
        d: f64,
        maslov: Option<u8>,
    },
    Matrix(SymplecticMatrix),
}

impl MetaplecticInput {
    fn into_data(self) -> Result<MetaplecticData, CliError> {
        Ok(match self {
            MetaplecticInput::Blocks { a, b, c, d, maslov } => {
                let s = MetaplecticData::new(a, b, c, d)?;
                match maslov {
                    Some(m) => s.with_maslov(m)?,
                    None => s,
                }
            }
            MetaplecticInput::Matrix(m) => MetaplecticData::from_symplectic(&m)?,
        })
    }
}

fn run_metaplectic(
    cli: &Cli,
    s: &Path,
    state: &Path,
    covariance: bool,
    half_width: Option<f64>,
    csv: Option<&Path>,
) -> Outcome {
    let s = read_json::<MetaplecticInput>(s)?.into_data()?;
    let g: GaussianState = read_json(state)?;
    require_one_dimensional(&g)?;
    let grid = Grid1D::symmetric(half_width.unwrap_or(12.0 * g.hbar().sqrt()), cli.grid_points)?;
    let psi = SampledWavefunction::from_gaussian(&g, grid)?;
    let out = metaplectic_apply(&s, &psi)?;
    let [a, b, c, d] = s.blocks();
    let mut doc = json!({
        "A": a, "B": b, "C": c, "D": d,
        "maslov": s.maslov(),
        "norm_ratio": out.norm_sqr() / psi.norm_sqr(),
    });
    if covariance {
        doc["max_error"] = json!(covariance_check(&s, &g, &grid)?.max_error);
    }
    if let Some(path) = csv {
        write_wavefunction(create(path)?, &out)?;
        doc["csv"] = json!(path.display().to_string());
    }
    Ok(doc)
}
