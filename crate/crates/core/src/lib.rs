//! One- and two-magnon physics in finite Heisenberg XXZ chains with a
//! gradient magnetic field and a periodically modulated exchange.
//!
//! The chain is handled in the magnon picture (spin flips over the fully
//! polarized state as hard-core bosons), sector by sector in the magnon
//! number. The crate provides the static, lab-frame and rotating-frame
//! Hamiltonians, one-period Floquet propagators and quasienergy spectra,
//! first-order effective models, exact dynamics, observables and spectrum
//! classification.

pub mod basis;
pub mod classify;
pub mod dynamics;
pub mod effective;
pub mod error;
pub mod floquet;
pub mod hamiltonians;
pub mod linalg;
pub mod observables;
pub mod params;
pub mod spectrum;

pub use basis::{build_basis, MagnonBasis, StateVector};
pub use classify::{
    classify_interacting_bands, classify_noninteracting, detect_eic_beic, BandLabel, Classification,
};
pub use dynamics::{evolve_driven, evolve_static, Trajectory};
pub use effective::{effective_single, effective_two, spectral_deviation, wannier_zeeman_defects};
pub use error::{Error, Result};
pub use floquet::{
    floquet_hamiltonian, one_period_propagator, quasienergy_spectrum, stroboscopic_evolve,
    FloquetHamiltonian, FloquetSpectrum, UnitaryPropagator,
};
pub use hamiltonians::{
    coupling_at, lab_frame_hamiltonian, rotating_frame_hamiltonian, static_magnon_hamiltonian,
    Frame, HermitianOperator,
};
pub use observables::{
    density, ipr, magnetization, spin_correlation, two_magnon_correlation, CorrelationMatrix,
};
pub use params::{derived_couplings, ChainParams, ChainParamsBuilder, DerivedCouplings};
pub use spectrum::Eigensystem;
