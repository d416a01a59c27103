//! Numerical laboratory for a nonlinear, charged, periodic string.
//!
//! The crate covers four coupled views of the same system:
//!
//! * [`modes`]: dispersion and mode-coupling coefficients of the quartic
//!   string Hamiltonian.
//! * [`fock`] and [`perturb`]: a truncated bosonic Fock space over string
//!   modes, sparse Hamiltonian assembly, exact diagonalization, and
//!   first-order perturbation theory checked against it.
//! * [`photon`]: reduced transition amplitudes between string phonons and
//!   transverse photons in the dipole approximation, and golden-rule
//!   emission rates.
//! * [`classical`]: a pseudo-spectral solver for the classical field
//!   equation with optional radiation reaction and external drive.
//!
//! Units throughout: `hbar = c = 1` and unit linear mass density.
//!
//! Runnable walkthroughs live in `examples/`; the `nlstring` binary wraps
//! [`app`] for config-driven batch runs.

pub mod app;
pub mod classical;
pub mod config;
mod error;
pub mod fock;
pub mod modes;
pub mod perturb;
pub mod photon;
pub mod table;

pub use error::{Error, Result};
pub use modes::{ModeIndex, StringParams};

pub use num_complex::Complex64;
