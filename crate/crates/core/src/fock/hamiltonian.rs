//! Ladder-operator action and the Schrodinger-picture string Hamiltonian.
//!
//! The phonon operators obey `[B_n, B_m^dagger] = delta_{nm} / (2 L |omega_n|)`.
//! On the occupation-normalized basis used here
//!
//! ```text
//! B_m^dagger |..., c_m, ...> = sqrt(c_m + 1) / sqrt(2 L |omega_m|) |..., c_m + 1, ...>
//! B_m        |..., c_m, ...> = sqrt(c_m)     / sqrt(2 L |omega_m|) |..., c_m - 1, ...>
//! ```
//!
//! The quadratic part is `H1 = 2L sum_n omega_n^2 B_n^dagger B_n` and the
//! quartic part `H2` is the sum of the five normal-ordered terms
//!
//! ```text
//! -6 M_{n,s,-t} B_n^+ B_s^+ B_t B_{n+s-t}       -4 M_{n,s,-t} B_t^+ B_s B_n B_{t-s-n}
//! -  M_{n,s,t}  B_n^+ B_s^+ B_t^+ B_{-n-s-t}^+  -4 M_{n,s,t}  B_n^+ B_s^+ B_t^+ B_{n+s+t}
//! -  M_{n,s,t}  B_n B_s B_t B_{-n-s-t}
//! ```
//!
//! summed over mode indices within the cutoff. Any term touching the zero
//! mode carries a vanishing coupling and is skipped.

use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{FockBasis, FockState, SparseOperator};
use crate::modes::{coupling_m, ModeIndex, StringParams};
use crate::Result;

/// One ladder operator: `raise = true` is `B_mode^dagger`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ladder {
    pub mode: ModeIndex,
    pub raise: bool,
}

impl Ladder {
    pub fn raise(mode: ModeIndex) -> Self {
        Ladder { mode, raise: true }
    }

    pub fn lower(mode: ModeIndex) -> Self {
        Ladder { mode, raise: false }
    }
}

/// Action of `B_mode` (or `B_mode^dagger` when `raise`) on a basis state.
///
/// Returns `None` when lowering an empty mode. The amplitude is real.
///
/// # Panics
///
/// Panics if `mode == 0`.
pub fn apply_ladder(
    state: &FockState,
    mode: ModeIndex,
    raise: bool,
    p: &StringParams,
) -> Option<(FockState, f64)> {
    assert!(mode != 0, "ladder operators are undefined for the zero mode");
    let norm = (2.0 * p.length * p.phonon_energy(mode)).sqrt();
    let mut out = state.clone();
    if raise {
        let before = out.occupation(mode);
        out.add(mode);
        Some((out, f64::from(before + 1).sqrt() / norm))
    } else {
        let before = out.remove(mode);
        if before == 0 {
            None
        } else {
            Some((out, f64::from(before).sqrt() / norm))
        }
    }
}

/// Applies an operator string right to left: `ops[0]` acts last.
pub fn apply_string(
    state: &FockState,
    ops: &[Ladder],
    p: &StringParams,
) -> Option<(FockState, f64)> {
    let mut current = state.clone();
    let mut amp = 1.0;
    for op in ops.iter().rev() {
        let (next, a) = apply_ladder(&current, op.mode, op.raise, p)?;
        current = next;
        amp *= a;
    }
    Some((current, amp))
}

/// Diagonal element of `H1 = 2L sum_n omega_n^2 B_n^dagger B_n`.
///
/// `B_n^dagger B_n` has eigenvalue `count / (2L |omega_n|)`, so each phonon
/// contributes `|omega_n|`.
pub fn h1_diagonal(state: &FockState, p: &StringParams) -> f64 {
    state
        .occupations()
        .map(|(m, count)| f64::from(count) * p.phonon_energy(m))
        .sum()
}

/// `H2 |state>` with every created or annihilated mode restricted to
/// `1 <= |n| <= cutoff`. The phonon-number cap is not applied here.
pub fn h2_action(state: &FockState, p: &StringParams, cutoff: ModeIndex) -> Vec<(FockState, f64)> {
    let mut acc: HashMap<FockState, f64> = HashMap::new();
    let in_range = |m: ModeIndex| m != 0 && m.abs() <= cutoff;
    let all: Vec<ModeIndex> = (-cutoff..=cutoff).filter(|&m| m != 0).collect();
    let occupied: Vec<ModeIndex> = state.modes().filter(|&m| in_range(m)).collect();
    let mut push = |coef: f64, ops: [Ladder; 4]| {
        if coef == 0.0 {
            return;
        }
        if let Some((out, amp)) = apply_string(state, &ops, p) {
            *acc.entry(out).or_insert(0.0) += coef * amp;
        }
    };

    // -6 M_{n,s,-t} B_n^+ B_s^+ B_t B_{n+s-t}
    for &t in &occupied {
        for &u in &occupied {
            for &n in &all {
                let s = t + u - n;
                if !in_range(s) {
                    continue;
                }
                let coef = -6.0 * coupling_m(n, s, -t, p);
                push(coef, [Ladder::raise(n), Ladder::raise(s), Ladder::lower(t), Ladder::lower(u)]);
            }
        }
    }

    // -4 M_{n,s,-t} B_t^+ B_s B_n B_{t-s-n}
    for &s in &occupied {
        for &n in &occupied {
            for &w in &occupied {
                let t = w + s + n;
                if !in_range(t) {
                    continue;
                }
                let coef = -4.0 * coupling_m(n, s, -t, p);
                push(coef, [Ladder::raise(t), Ladder::lower(s), Ladder::lower(n), Ladder::lower(w)]);
            }
        }
    }

    // -M_{n,s,t} B_n^+ B_s^+ B_t^+ B_{-n-s-t}^+
    for &n in &all {
        for &s in &all {
            for &t in &all {
                let w = -n - s - t;
                if !in_range(w) {
                    continue;
                }
                let coef = -coupling_m(n, s, t, p);
                push(coef, [Ladder::raise(n), Ladder::raise(s), Ladder::raise(t), Ladder::raise(w)]);
            }
        }
    }

    // -4 M_{n,s,t} B_n^+ B_s^+ B_t^+ B_{n+s+t}
    for &w in &occupied {
        for &n in &all {
            for &s in &all {
                let t = w - n - s;
                if !in_range(t) {
                    continue;
                }
                let coef = -4.0 * coupling_m(n, s, t, p);
                push(coef, [Ladder::raise(n), Ladder::raise(s), Ladder::raise(t), Ladder::lower(w)]);
            }
        }
    }

    // -M_{n,s,t} B_n B_s B_t B_{-n-s-t}
    for &n in &occupied {
        for &s in &occupied {
            for &t in &occupied {
                let w = -n - s - t;
                if !in_range(w) {
                    continue;
                }
                let coef = -coupling_m(n, s, t, p);
                push(coef, [Ladder::lower(n), Ladder::lower(s), Ladder::lower(t), Ladder::lower(w)]);
            }
        }
    }

    let mut out: Vec<(FockState, f64)> = acc.into_iter().filter(|(_, v)| *v != 0.0).collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// `<final | H2 | initial>` without any phonon-number truncation.
pub fn h2_element(final_state: &FockState, initial: &FockState, p: &StringParams) -> f64 {
    let cutoff = final_state.max_abs_mode().max(initial.max_abs_mode()).max(1);
    h2_action(initial, p, cutoff)
        .into_iter()
        .find(|(s, _)| s == final_state)
        .map_or(0.0, |(_, v)| v)
}

/// Diagonal quadratic Hamiltonian on `basis`.
pub fn build_h1(basis: &FockBasis, p: &StringParams) -> SparseOperator {
    let entries = basis
        .states()
        .iter()
        .enumerate()
        .map(|(i, s)| (i, i, Complex64::new(h1_diagonal(s, p), 0.0)));
    SparseOperator::new(basis.dim(), entries, true).expect("diagonal real operator is Hermitian")
}

/// Quartic Hamiltonian projected onto `basis`.
pub fn build_h2(basis: &FockBasis, p: &StringParams) -> Result<SparseOperator> {
    let cutoff = basis.cutoff();
    let columns: Vec<Vec<(usize, usize, Complex64)>> = basis
        .states()
        .par_iter()
        .enumerate()
        .map(|(col, state)| {
            h2_action(state, p, cutoff)
                .into_iter()
                .filter_map(|(out, v)| basis.index_of(&out).map(|row| (row, col, Complex64::new(v, 0.0))))
                .collect()
        })
        .collect();
    SparseOperator::new(basis.dim(), columns.into_iter().flatten(), true)
}

/// `H1 + H2` on `basis`.
pub fn build_hamiltonian(basis: &FockBasis, p: &StringParams) -> Result<SparseOperator> {
    build_h1(basis, p).add_scaled(&build_h2(basis, p)?, 1.0)
}

#[cfg(test)]
mod tests {
    #[test]
    fn h1_diagonal_matches_ladder_composition() {
        let p = StringParams::new(3.0, 0.7, 0.0, 0.0).unwrap();
        let s = FockState::from_modes(&[1, 1, -2, 3, 3, 3]).unwrap();
        let via_ladders: f64 = s
            .modes()
            .map(|m| {
                let w = p.omega(m);
                apply_string(&s, &[Ladder::raise(m), Ladder::lower(m)], &p)
                    .map_or(0.0, |(_, a)| 2.0 * p.length * w * w * a)
            })
            .sum();
        assert!((h1_diagonal(&s, &p) - via_ladders).abs() < 1e-13 * via_ladders);
    }

    use super::*;
    use crate::fock::build_basis;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn params(gamma: f64) -> StringParams {
        StringParams::default().with_gamma(gamma)
    }

    #[test]
    fn lowering_the_vacuum_vanishes() {
        assert!(apply_ladder(&FockState::vacuum(), 1, false, &params(0.0)).is_none());
    }

    #[test]
    fn raising_the_vacuum() {
        let (s, a) = apply_ladder(&FockState::vacuum(), 1, true, &params(0.0)).unwrap();
        assert_eq!(s, FockState::from_modes(&[1]).unwrap());
        assert_relative_eq!(a, 1.0 / (4.0 * PI).sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn lowering_a_doubly_occupied_mode() {
        let two = FockState::from_modes(&[1, 1]).unwrap();
        let (s, a) = apply_ladder(&two, 1, false, &params(0.0)).unwrap();
        assert_eq!(s, FockState::from_modes(&[1]).unwrap());
        assert_relative_eq!(a, 2f64.sqrt() / (4.0 * PI).sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn h1_diagonal_values() {
        let p = params(0.0);
        assert_eq!(h1_diagonal(&FockState::vacuum(), &p), 0.0);
        assert_relative_eq!(h1_diagonal(&FockState::from_modes(&[3]).unwrap(), &p), 3.0, max_relative = 1e-14);
        assert_relative_eq!(h1_diagonal(&FockState::from_modes(&[1, 2]).unwrap(), &p), 3.0, max_relative = 1e-14);
        assert_relative_eq!(h1_diagonal(&FockState::from_modes(&[-2, -2, 1]).unwrap(), &p), 5.0, max_relative = 1e-14);
    }

    #[test]
    fn linear_string_has_zero_h2() {
        let b = build_basis(2, 3, None).unwrap();
        assert_eq!(build_h2(&b, &params(0.0)).unwrap().nnz(), 0);
    }

    #[test]
    fn h2_conserves_momentum_and_is_hermitian() {
        let b = build_basis(2, 3, None).unwrap();
        let h2 = build_h2(&b, &params(0.37)).unwrap();
        assert!(h2.nnz() > 0);
        for &(r, c, _) in h2.entries() {
            assert_eq!(b.state(r).momentum(), b.state(c).momentum());
        }
        assert!(h2.hermitian_deviation() < 1e-13 * h2.max_abs().max(1.0));
    }

    #[test]
    fn vacuum_to_four_phonon_element() {
        // -4 sqrt(6) M_{111} / sqrt((2L)^4 w1^3 w3): four placements of the -3
        // phonon among the creation operators, sqrt(3!) from the triple mode.
        let p = params(1.0);
        let target = FockState::from_modes(&[1, 1, 1, -3]).unwrap();
        let v = h2_element(&target, &FockState::vacuum(), &p);
        let l = p.length;
        let reference = coupling_m(1, 1, 1, &p) / ((2.0 * l).powi(4) * 3.0).sqrt();
        assert_relative_eq!(v, -4.0 * 6f64.sqrt() * reference, max_relative = 1e-13);
    }
}
