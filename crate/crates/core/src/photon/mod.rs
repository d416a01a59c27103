//! String–photon transition amplitudes in the dipole approximation.
//!
//! The string vibrates along `x^2` and lies along `x^1`, so it couples to the
//! photon only through the `x^2` component of the electric field. Every
//! amplitude here is *reduced*: the coefficient of the energy-conserving
//! Dirac deltas, with on-shell predicates reported separately.

mod amplitude;
mod nonlinear;
mod rate;

pub use amplitude::{
    amp_scatter, amp_single_emission, geometric_factor, geometric_factor_raw, polarization_basis,
    Amplitude, PhotonSpec, ScatterAmplitude, ON_SHELL_TOL,
};
pub use nonlinear::{
    amp_nonlinear_absorb4, amp_nonlinear_emission, CouplingComponent, NonlinearAmplitude,
    NonlinearTerm,
};
pub use rate::{angular_distribution, emission_rate, gauss_legendre, AngularSample};
