//! First-order perturbation theory in the quartic string Hamiltonian.

mod energy;
mod evolution;
mod heisenberg;

pub use energy::{degenerate_first_order, energy_correction_first_order, h2_expectation, LevelShift};
pub use evolution::{
    evolve_first_order, evolve_first_order_detuned, finite_time_kernel, records_to_vector,
    transition_rate_longtime, transition_rate_report, RateReport, TransitionRecord,
    RESONANCE_TOL, VALIDITY_THRESHOLD,
};
pub use heisenberg::{
    heisenberg_coefficient, heisenberg_terms, HeisenbergTable, HeisenbergTerm, OperatorSum,
    TermSelector, SECULAR_TOL,
};
