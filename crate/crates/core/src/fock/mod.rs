//! Truncated bosonic Fock space over string modes.

mod basis;
mod dense;
mod hamiltonian;
mod operator;
mod state;

pub use basis::{build_basis, FockBasis, DEFAULT_BASIS_CAP};
pub use dense::{
    diagonalize, diagonalize_with_cap, evolve_exact, exact_eigs, norm, EigenPair, Spectrum,
    DEFAULT_DENSE_CAP,
};
pub use hamiltonian::{
    apply_ladder, apply_string, build_h1, build_h2, build_hamiltonian, h1_diagonal, h2_action,
    h2_element, Ladder,
};
pub use operator::{SparseOperator, HERMITIAN_TOL};
pub use state::FockState;
