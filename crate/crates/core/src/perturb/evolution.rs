use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::fock::{h1_diagonal, h2_action, h2_element, FockBasis, FockState};
use crate::modes::{require_nonzero, ModeIndex, StringParams};
use crate::Result;

/// Probability above which first-order theory is flagged as unreliable.
pub const VALIDITY_THRESHOLD: f64 = 0.1;

/// Relative frequency tolerance for treating a transition as resonant.
pub const RESONANCE_TOL: f64 = 1e-9;

/// First-order amplitude for `initial -> final_state` at time `t`, in the
/// interaction picture of `H1`.
#[derive(Debug, Clone, Serialize)]
pub struct TransitionRecord {
    #[serde(serialize_with = "crate::table::serialize_display")]
    pub initial: FockState,
    #[serde(serialize_with = "crate::table::serialize_display")]
    pub final_state: FockState,
    #[serde(serialize_with = "crate::table::serialize_complex")]
    pub amplitude: Complex64,
    pub on_resonance: bool,
    pub t: f64,
    /// Set when a transition probability exceeds [`VALIDITY_THRESHOLD`].
    pub outside_validity: bool,
}

impl TransitionRecord {
    pub fn probability(&self) -> f64 {
        self.amplitude.norm_sqr()
    }
}

/// `(exp(i w t) - 1) / (i w)`, equal to `t` at `w = 0`.
pub fn finite_time_kernel(w: f64, t: f64) -> Complex64 {
    let x = 0.5 * w * t;
    let sinc = if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    };
    Complex64::from_polar(t * sinc, x)
}

/// First-order evolved state `|psi(t)>` in the interaction picture:
///
/// ```text
/// |psi(t)> = |i> - i sum_f <f|H2|i> (exp(i dw t) - 1) / (i dw) |f>,  dw = E_f - E_i
/// ```
///
/// with `E` the `H1` energies. Finals are restricted to `basis`.
pub fn evolve_first_order(
    initial: &FockState,
    t: f64,
    basis: &FockBasis,
    p: &StringParams,
) -> Result<Vec<TransitionRecord>> {
    evolve_first_order_detuned(initial, t, basis, p, 0.0)
}

/// As [`evolve_first_order`] with the initial energy lowered by `detuning`,
/// so every transition frequency becomes `E_f - E_i + detuning`.
pub fn evolve_first_order_detuned(
    initial: &FockState,
    t: f64,
    basis: &FockBasis,
    p: &StringParams,
    detuning: f64,
) -> Result<Vec<TransitionRecord>> {
    basis.require_index(initial)?;
    let e_i = h1_diagonal(initial, p);
    let mut couplings: Vec<(FockState, f64)> = h2_action(initial, p, basis.cutoff())
        .into_iter()
        .filter(|(f, _)| basis.index_of(f).is_some())
        .collect();
    if !couplings.iter().any(|(f, _)| f == initial) {
        couplings.push((initial.clone(), 0.0));
    }
    couplings.sort_by(|a, b| {
        basis
            .index_of(&a.0)
            .cmp(&basis.index_of(&b.0))
    });

    let minus_i = Complex64::new(0.0, -1.0);
    let mut records: Vec<TransitionRecord> = couplings
        .into_iter()
        .map(|(f, v)| {
            let e_f = h1_diagonal(&f, p);
            let dw = e_f - e_i + detuning;
            let mut amplitude = minus_i * v * finite_time_kernel(dw, t);
            if &f == initial {
                amplitude += 1.0;
            }
            TransitionRecord {
                initial: initial.clone(),
                on_resonance: dw.abs() <= RESONANCE_TOL * e_i.max(e_f).max(1.0),
                final_state: f,
                amplitude,
                t,
                outside_validity: false,
            }
        })
        .collect();
    let leaked: f64 = records
        .iter()
        .filter(|r| &r.final_state != initial)
        .map(TransitionRecord::probability)
        .fold(0.0, f64::max);
    if leaked > VALIDITY_THRESHOLD {
        for r in &mut records {
            r.outside_validity = r.probability() > VALIDITY_THRESHOLD || &r.final_state == initial;
        }
    }
    Ok(records)
}

/// Dense amplitude vector over `basis` from a record list.
pub fn records_to_vector(records: &[TransitionRecord], basis: &FockBasis) -> Result<Vec<Complex64>> {
    let mut v = vec![Complex64::new(0.0, 0.0); basis.dim()];
    for r in records {
        v[basis.require_index(&r.final_state)?] += r.amplitude;
    }
    Ok(v)
}

/// Long-time rate for `|j> -> |p,q,r>` alongside the closed-form expression
/// it is compared against.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RateReport {
    pub momentum_conserved: bool,
    pub resonant: bool,
    /// `<p,q,r| H2 |j>` in the occupation-normalized basis.
    pub matrix_element: f64,
    /// Coefficient of `t * delta(dw)` in the first-order probability.
    pub rate: f64,
    /// `32 pi^9 gamma^2 (jpqr)^2 / (L^6 w_p w_q w_r w_j)`, zero off the
    /// selection rules.
    pub closed_form: f64,
    /// `rate / closed_form`, `NaN` when the closed form vanishes.
    pub ratio: f64,
}

/// Golden-rule rate for the decay of one phonon `j` into three phonons.
///
/// Zero unless `j = p + q + r` and `|w_p| + |w_q| + |w_r| = |w_j|`. On
/// resonance the finite-time probability `|V|^2 sin^2(dw t/2)/(dw/2)^2`
/// tends to `2 pi |V|^2 t delta(dw)`; the returned value is `2 pi |V|^2`.
pub fn transition_rate_longtime(
    j: ModeIndex,
    finals: (ModeIndex, ModeIndex, ModeIndex),
    params: &StringParams,
) -> Result<f64> {
    Ok(transition_rate_report(j, finals, params)?.rate)
}

pub fn transition_rate_report(
    j: ModeIndex,
    (a, b, c): (ModeIndex, ModeIndex, ModeIndex),
    params: &StringParams,
) -> Result<RateReport> {
    for m in [j, a, b, c] {
        require_nonzero(m)?;
    }
    let momentum_conserved = j == a + b + c;
    let e_f = params.phonon_energy(a) + params.phonon_energy(b) + params.phonon_energy(c);
    let e_i = params.phonon_energy(j);
    let resonant = (e_f - e_i).abs() <= RESONANCE_TOL * e_i;
    if !(momentum_conserved && resonant) {
        return Ok(RateReport {
            momentum_conserved,
            resonant,
            matrix_element: 0.0,
            rate: 0.0,
            closed_form: 0.0,
            ratio: f64::NAN,
        });
    }
    let initial = FockState::from_modes(&[j])?;
    let final_state = FockState::from_modes(&[a, b, c])?;
    let v = h2_element(&final_state, &initial, params);
    let rate = 2.0 * PI * v * v;
    let jpqr = f64::from(j) * f64::from(a) * f64::from(b) * f64::from(c);
    let closed_form = 32.0 * PI.powi(9) * params.gamma * params.gamma * jpqr * jpqr
        / (params.length.powi(6) * params.omega(a) * params.omega(b) * params.omega(c) * params.omega(j));
    Ok(RateReport {
        momentum_conserved,
        resonant,
        matrix_element: v,
        rate,
        closed_form,
        ratio: if closed_form != 0.0 { rate / closed_form } else { f64::NAN },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::build_basis;

    #[test]
    fn kernel_limits() {
        assert_eq!(finite_time_kernel(0.0, 2.5), Complex64::new(2.5, 0.0));
        let w = 0.7;
        let t = 3.0;
        let direct = (Complex64::from_polar(1.0, w * t) - 1.0) / Complex64::new(0.0, w);
        assert!((finite_time_kernel(w, t) - direct).norm() < 1e-15);
        let tiny = 1e-9;
        let k = finite_time_kernel(tiny, t);
        assert!((k - Complex64::new(t, 0.5 * tiny * t * t)).norm() < 1e-15);
    }

    #[test]
    fn time_zero_is_identity() {
        let basis = build_basis(2, 4, Some(0)).unwrap();
        let p = StringParams::default().with_gamma(0.3);
        let recs = evolve_first_order(&FockState::vacuum(), 0.0, &basis, &p).unwrap();
        for r in recs {
            let expected = if r.final_state.is_vacuum() { 1.0 } else { 0.0 };
            assert_eq!(r.amplitude, Complex64::new(expected, 0.0));
        }
    }

    #[test]
    fn linear_string_has_no_transitions() {
        let basis = build_basis(3, 3, None).unwrap();
        let p = StringParams::default();
        let init = FockState::from_modes(&[3]).unwrap();
        let recs = evolve_first_order(&init, 4.0, &basis, &p).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].final_state, init);
        assert_eq!(recs[0].amplitude, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn initial_must_be_in_basis() {
        let basis = build_basis(1, 2, None).unwrap();
        let init = FockState::from_modes(&[2]).unwrap();
        assert!(evolve_first_order(&init, 1.0, &basis, &StringParams::default()).is_err());
    }

    #[test]
    fn selection_rules() {
        let p = StringParams::default().with_gamma(1.0);
        assert_eq!(transition_rate_longtime(3, (1, 1, 2), &p).unwrap(), 0.0);
        assert!(transition_rate_longtime(3, (4, -1, 0), &p).is_err());
        assert_eq!(transition_rate_longtime(3, (4, -2, 1), &p).unwrap(), 0.0);
        assert!(transition_rate_longtime(3, (1, 1, 1), &p).unwrap() > 0.0);
        assert!(transition_rate_longtime(-3, (-1, -1, -1), &p).unwrap() > 0.0);
    }

    #[test]
    fn validity_flag_trips_for_strong_coupling() {
        let basis = build_basis(3, 4, Some(0)).unwrap();
        let p = StringParams::default().with_gamma(2000.0);
        let recs = evolve_first_order(&FockState::vacuum(), 5.0, &basis, &p).unwrap();
        assert!(recs.iter().any(|r| r.outside_validity));
        let weak = StringParams::default().with_gamma(1e-3);
        let recs = evolve_first_order(&FockState::vacuum(), 1.0, &basis, &weak).unwrap();
        assert!(recs.iter().all(|r| !r.outside_validity));
    }
}
