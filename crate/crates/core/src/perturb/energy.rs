use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::fock::{h1_diagonal, h2_action, FockBasis, FockState};
use crate::modes::StringParams;

/// Closed-form first-order energy shift of a Fock state,
/// `sum_i sum_{r != i} 2 gamma pi^4 s_i^2 s_r^2 / (3 omega_{s_i}^2 omega_{s_r}^2 L)`,
/// over ordered pairs of phonons (repeated modes counted with multiplicity).
///
/// With linear dispersion every pair contributes `gamma L^3 / (24 v^4)`.
/// This expression does not coincide with `<s|H2|s>` computed from the
/// quartic Hamiltonian; see [`h2_expectation`].
pub fn energy_correction_first_order(state: &FockState, p: &StringParams) -> f64 {
    let phonons = state.phonons();
    let mut total = 0.0;
    for (i, &si) in phonons.iter().enumerate() {
        for (r, &sr) in phonons.iter().enumerate() {
            if i == r {
                continue;
            }
            let (wi, wr) = (p.omega(si), p.omega(sr));
            let (si, sr) = (f64::from(si), f64::from(sr));
            total += 2.0 * p.gamma * PI.powi(4) * si * si * sr * sr
                / (3.0 * wi * wi * wr * wr * p.length);
        }
    }
    total
}

/// Diagonal matrix element `<s|H2|s>` of the quartic Hamiltonian.
pub fn h2_expectation(state: &FockState, p: &StringParams) -> f64 {
    let cutoff = state.max_abs_mode().max(1);
    h2_action(state, p, cutoff)
        .into_iter()
        .find(|(s, _)| s == state)
        .map_or(0.0, |(_, v)| v)
}

/// A degenerate level of `H1` and its first-order splitting under `H2`.
#[derive(Debug, Clone)]
pub struct LevelShift {
    pub energy: f64,
    pub states: Vec<FockState>,
    /// Eigenvalues of `H2` restricted to the level, ascending; these are the
    /// derivatives `dE/dgamma * gamma` of the exact levels at small gamma.
    pub shifts: Vec<f64>,
}

/// Degenerate first-order perturbation theory on a truncated basis.
///
/// States are grouped into `H1` levels (energies equal to `1e-9` relative)
/// and `H2` is diagonalized inside each level.
pub fn degenerate_first_order(basis: &FockBasis, p: &StringParams) -> Vec<LevelShift> {
    let mut levels: Vec<(f64, Vec<usize>)> = Vec::new();
    for (i, s) in basis.states().iter().enumerate() {
        let e = h1_diagonal(s, p);
        match levels
            .iter_mut()
            .find(|(e0, _)| (e - *e0).abs() <= 1e-9 * e0.abs().max(1.0))
        {
            Some((_, members)) => members.push(i),
            None => levels.push((e, vec![i])),
        }
    }
    levels.sort_by(|a, b| a.0.total_cmp(&b.0));

    levels
        .into_iter()
        .map(|(energy, members)| {
            let d = members.len();
            let mut block = DMatrix::<f64>::zeros(d, d);
            for (col, &j) in members.iter().enumerate() {
                for (out, v) in h2_action(basis.state(j), p, basis.cutoff()) {
                    if let Some(row) = members.iter().position(|&i| basis.state(i) == &out) {
                        block[(row, col)] += v;
                    }
                }
            }
            let mut shifts = SymmetricEigen::new(block).eigenvalues.as_slice().to_vec();
            shifts.sort_by(f64::total_cmp);
            LevelShift {
                energy,
                states: members.iter().map(|&i| basis.state(i).clone()).collect(),
                shifts,
            }
        })
        .collect()
}
