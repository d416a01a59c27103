//! Pseudo-spectral solver for the classical nonlinear string, with
//! radiation reaction and an external drive.

mod field;
mod io;
mod rr;
mod spectral;

pub use field::{energy, momentum, step_conservative, FieldState, StringSolver};
pub use io::{read_snapshot, trajectory_columns, trajectory_row, write_snapshot};
pub use rr::{
    fornberg_weights, kernel_coefficient, rr_field, rr_field_terms, step_with_rr, ConstantDrive, Drive,
    FnDrive, RRConfig, Reduction, RrStepper, UniformHarmonic, MAX_KERNEL_ORDER,
};
pub use spectral::Spectral;
