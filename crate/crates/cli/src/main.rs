//! `fermiblob` command-line front-end: reads JSON or CSV inputs, runs one
//! library operation and prints a single JSON document.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use crate::output::{render, CliError};

#[derive(Debug, Parser)]
#[command(name = "fermiblob", version, about = "Symplectic capacities, Fermi blobs and their grid checks")]
pub struct Cli {
    /// Reduced Planck constant for commands that take no state file.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub hbar: f64,
    /// Tolerance for predicates such as blob-check.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    /// Number of points of the default 1D grid.
    #[arg(long = "grid-points", global = true, default_value_t = 2048)]
    pub grid_points: usize,
    /// Seed for randomized certification.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Williamson normal form of a positive-definite matrix.
    Williamson {
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
    },
    /// Symplectic eigenvalues of a positive-definite matrix.
    Spectrum {
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
    },
    /// Symplectic capacity of an ellipsoid.
    Capacity {
        #[arg(long)]
        ellipsoid: PathBuf,
    },
    /// First K Ekeland–Hofer capacities of an ellipsoid.
    Eh {
        #[arg(long)]
        ellipsoid: PathBuf,
        #[arg(short = 'k')]
        k: usize,
    },
    /// Fermi form, factorization, Wigner matrix and capacity of a Gaussian state.
    Fermi {
        #[arg(long)]
        state: PathBuf,
    },
    /// Whether an ellipsoid is a quantum blob at the given ħ.
    BlobCheck {
        #[arg(long)]
        ellipsoid: PathBuf,
    },
    /// Largest quantum blob inside an ellipsoid, with certified containment.
    Inscribe {
        #[arg(long)]
        ellipsoid: PathBuf,
    },
    /// Wigner function of a Gaussian state on a 64 x 64 phase-space grid.
    Wigner {
        #[arg(long)]
        state: PathBuf,
        /// Also evaluate by quadrature and report the deviation (n = 1).
        #[arg(long)]
        numeric: bool,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Schrödinger–Robertson inequalities of a Gaussian state.
    RsCheck {
        #[arg(long)]
        state: PathBuf,
    },
    /// Energy and Fermi capacity of an oscillator eigenstate.
    Hermite {
        #[arg(long = "N")]
        n: u32,
        #[arg(long)]
        omega: f64,
        /// Also report the finite-difference eigen-residual.
        #[arg(long)]
        residual: bool,
    },
    /// Compare the energy-ellipsoid capacity with Σ(Nⱼ + ½)h.
    ClaimCheck {
        #[arg(long, value_delimiter = ',', required = true)]
        omega: Vec<f64>,
        #[arg(long = "N", value_delimiter = ',', required = true)]
        n: Vec<u32>,
    },
    /// Finite-difference residual of the Fermi equation for sampled R, Φ.
    FermiPde {
        #[arg(long)]
        fields: PathBuf,
    },
    /// Zero set of the Fermi function for sampled R, Φ.
    Contour {
        #[arg(long)]
        fields: PathBuf,
        #[arg(long)]
        csv: PathBuf,
        /// Half-width of the momentum axis; estimated from the fields if absent.
        #[arg(long)]
        pmax: Option<f64>,
        #[arg(long = "p-points", default_value_t = 512)]
        p_points: usize,
    },
    /// Apply a metaplectic operator to a Gaussian state by quadrature.
    Metaplectic {
        #[arg(long = "S")]
        s: PathBuf,
        #[arg(long)]
        state: PathBuf,
        /// Also compare Wigner functions before and after.
        #[arg(long)]
        covariance: bool,
        /// Half-width of the grid; defaults to 12√ħ.
        #[arg(long = "half-width")]
        half_width: Option<f64>,
        /// Write the transformed wavefunction as x,re,im.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::InvalidSubcommand | ErrorKind::MissingSubcommand => "UnknownCommand",
                _ => "BadInput",
            };
            let err = CliError::bad(code, e.to_string().trim_end());
            println!("{}", render(&err.to_json()));
            return ExitCode::from(2);
        }
    };
    match commands::run(&cli) {
        Ok(doc) => {
            println!("{}", render(&doc));
            ExitCode::SUCCESS
        }
        Err(err) => {
            println!("{}", render(&err.to_json()));
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
