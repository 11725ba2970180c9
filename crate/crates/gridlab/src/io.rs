//! CSV exchange of sampled fields. Every number is written with 17
//! significant digits.

use std::io::{Read, Write};

use fermiblob::numfmt::sig17;
use num_complex::Complex64;

use crate::error::{GridError, Result};
use crate::grid::{Grid1D, PhaseField, SampledWavefunction};

/// Real amplitude and phase samples `(x, R, Φ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarFields {
    pub grid: Grid1D,
    pub r: Vec<f64>,
    pub phi: Vec<f64>,
}

fn write_rows<W: Write>(w: W, header: &[&str], rows: impl Iterator<Item = Vec<f64>>) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header)?;
    for row in rows {
        out.write_record(row.iter().map(|v| sig17(*v)))?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

fn read_rows<R: Read>(r: R, header: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut input = csv::Reader::from_reader(r);
    let found: Vec<String> = input.headers()?.iter().map(|h| h.trim().to_string()).collect();
    if found != header {
        return Err(GridError::Parse(format!("expected header {}, found {}", header.join(","), found.join(","))));
    }
    let mut rows = Vec::new();
    for (line, record) in input.records().enumerate() {
        let record = record?;
        let row = record
            .iter()
            .map(|cell| cell.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| GridError::Parse(format!("row {}: {e}", line + 1)))?;
        rows.push(row);
    }
    Ok(rows)
}

/// Recovers the uniform grid from its abscissae.
pub fn grid_from_abscissae(xs: &[f64]) -> Result<Grid1D> {
    if xs.len() < 2 {
        return Err(GridError::InvalidGrid("need at least two abscissae".into()));
    }
    let grid = Grid1D::new(xs[0], xs[xs.len() - 1], xs.len())?;
    let h = grid.spacing();
    for (k, &x) in xs.iter().enumerate() {
        if (x - grid.point(k)).abs() > 1e-9 * h.max(x.abs()) {
            return Err(GridError::InvalidGrid(format!("abscissa {k} ({x}) is off the uniform grid")));
        }
    }
    Ok(grid)
}

/// Header `x,re,im`.
pub fn write_wavefunction<W: Write>(w: W, psi: &SampledWavefunction) -> Result<()> {
    let xs = psi.grid().points();
    write_rows(w, &["x", "re", "im"], xs.into_iter().zip(psi.values()).map(|(x, v)| vec![x, v.re, v.im]))
}

pub fn read_wavefunction<R: Read>(r: R, hbar: f64) -> Result<SampledWavefunction> {
    let rows = read_rows(r, &["x", "re", "im"])?;
    let xs: Vec<f64> = rows.iter().map(|row| row[0]).collect();
    let grid = grid_from_abscissae(&xs)?;
    SampledWavefunction::new(grid, rows.iter().map(|row| Complex64::new(row[1], row[2])).collect(), hbar)
}

/// Header `x,p,value`.
pub fn write_phase_field<W: Write>(w: W, field: &PhaseField) -> Result<()> {
    write_rows(w, &["x", "p", "value"], field.grid.points().zip(&field.values).map(|((x, p), v)| vec![x, p, *v]))
}

/// Header `x,p`.
pub fn write_contour<W: Write>(w: W, points: &[(f64, f64)]) -> Result<()> {
    write_rows(w, &["x", "p"], points.iter().map(|&(x, p)| vec![x, p]))
}

/// Header `x,R,Phi`.
pub fn write_fields<W: Write>(w: W, fields: &PolarFields) -> Result<()> {
    let xs = fields.grid.points();
    write_rows(w, &["x", "R", "Phi"], (0..xs.len()).map(|k| vec![xs[k], fields.r[k], fields.phi[k]]))
}

pub fn read_fields<R: Read>(r: R) -> Result<PolarFields> {
    let rows = read_rows(r, &["x", "R", "Phi"])?;
    let xs: Vec<f64> = rows.iter().map(|row| row[0]).collect();
    Ok(PolarFields {
        grid: grid_from_abscissae(&xs)?,
        r: rows.iter().map(|row| row[1]).collect(),
        phi: rows.iter().map(|row| row[2]).collect(),
    })
}
