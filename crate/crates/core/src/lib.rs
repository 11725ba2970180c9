//! Symplectic spectra, Williamson normal forms and symplectic capacities of
//! phase-space ellipsoids, together with the Fermi ellipsoids of Gaussian and
//! Hermite quantum states.
//!
//! Phase-space vectors are ordered `(x₁…xₙ, p₁…pₙ)`.

pub mod capacity;
pub mod error;
pub mod gaussian;
pub mod matcore;
pub mod numfmt;
pub mod oscillator;
pub mod sampling;
pub mod symplectic;

pub use capacity::{
    capacity, eh_capacities, inscribed_quantum_blob, is_quantum_blob, plane_section_area, PhaseSpaceEllipsoid,
    QuantumBlob,
};
pub use error::{Error, Result};
pub use gaussian::{
    eval_wavefunction, fermi_capacity, fermi_factorization, fermi_form, rs_check, wigner_closed_form, wigner_matrix,
    FermiForm, GaussianState, RsReport,
};
pub use matcore::{eigh_sym, inv_spd, sqrt_spd, Eigen, Matrix, SymmetricMatrix};
pub use oscillator::{
    claim_check, energy_level, excited_fermi_ellipsoid, hermite_polynomial, ClaimReport, MultiIndex,
    QuadraticHamiltonian,
};
pub use symplectic::{
    is_symplectic, standard_form, symplectic_spectrum, williamson, SymplecticMatrix, SymplecticSpectrum, Williamson,
};
