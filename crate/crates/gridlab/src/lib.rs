//! Grid numerics for one degree of freedom that check the closed forms of
//! `fermiblob` independently: a finite-difference Fermi operator, oscillator
//! eigen-residuals, quadrature Wigner transforms, metaplectic operators and
//! Fermi contours.

pub mod eigen;
pub mod error;
pub mod fermi;
pub mod grid;
pub mod io;
pub mod metaplectic;
pub mod stencil;
pub mod wigner;

pub use eigen::{eigen_residual, eigen_residual_with};
pub use error::{GridError, Result};
pub use fermi::{fermi_contour, fermi_function_field, fermi_operator_residual, node_mask, FermiResidual};
pub use grid::{Grid1D, PhaseField, PhaseGrid, SampledWavefunction};
pub use io::PolarFields;
pub use metaplectic::{
    covariance_check, ground_state_transport, metaplectic_apply, transport_factor, CovarianceReport, MetaplecticData,
    TransportReport,
};
pub use stencil::StencilOrder;
pub use wigner::wigner_numeric;
