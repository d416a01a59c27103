//! Photon emission that exists only through the quartic string term.
//!
//! Both processes share the prefactor
//!
//! ```text
//! -gamma sigma eps^c(p, r) / (4 sqrt(|w_l w_f w_m w_n w_j|)) * sqrt((2 pi)^9 w_p / L^11)
//! ```
//!
//! and a sum of terms, each gated by a Kronecker momentum rule and carrying
//! two energy deltas and one geometric factor `(e^{-i p1 L} - 1)/(p1 - k_a)`.

use num_complex::Complex64;

use super::amplitude::{geometric_factor, on_shell, PhotonSpec};
use crate::modes::{require_nonzero, ModeIndex, StringParams};
use crate::Result;

/// Which polarization component couples in the nonlinear amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CouplingComponent {
    /// `eps^3`, the default form of these amplitudes.
    #[default]
    E3,
    /// `eps^2`, the component the dipole coupling actually involves.
    E2,
}

impl CouplingComponent {
    pub fn axis(self) -> usize {
        match self {
            CouplingComponent::E3 => 3,
            CouplingComponent::E2 => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonlinearTerm {
    pub index: u8,
    /// Product of the four mode labels multiplying the term.
    pub mode_product: i64,
    /// Kronecker momentum rule attached to the term.
    pub gate_open: bool,
    /// Whether the Kronecker rule matches the term's string energy
    /// delta (same modes on each side).
    pub gate_consistent: bool,
    /// String energy balance (absolute frequencies).
    pub string_on_shell: bool,
    /// Photon frequency equals the emitting mode's `|omega|`.
    pub photon_on_shell: bool,
    /// Mode whose wavenumber enters the geometric factor.
    pub emitting_mode: ModeIndex,
    /// Zero when the gate is closed.
    pub contribution: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonlinearAmplitude {
    pub value: Complex64,
    pub component: CouplingComponent,
    pub terms: Vec<NonlinearTerm>,
}

fn prefactor(
    modes: [ModeIndex; 5],
    photon: &PhotonSpec,
    component: CouplingComponent,
    p: &StringParams,
) -> f64 {
    let wprod: f64 = modes.iter().map(|&m| p.phonon_energy(m)).product();
    let two_pi = 2.0 * std::f64::consts::PI;
    -p.gamma * p.sigma * photon.epsilon_component(component.axis()) / (4.0 * wprod.sqrt())
        * (two_pi.powi(9) * photon.omega() / p.length.powi(11)).sqrt()
}

/// `(e^{-i p1 L} - 1)/(p1 - k_a)`, the negated emission factor.
fn emission_geometry(photon: &PhotonSpec, a: ModeIndex, p: &StringParams) -> Complex64 {
    -geometric_factor(photon.q.x, p.wavenumber(a), p.length)
}

struct TermSpec {
    product: [ModeIndex; 4],
    gate: bool,
    gate_consistent: bool,
    /// `(created, destroyed)` string modes of the energy delta.
    energy: (Vec<ModeIndex>, Vec<ModeIndex>),
    emitter: ModeIndex,
}

fn evaluate(
    specs: Vec<TermSpec>,
    pref: f64,
    photon: &PhotonSpec,
    component: CouplingComponent,
    p: &StringParams,
) -> NonlinearAmplitude {
    let mut value = Complex64::new(0.0, 0.0);
    let terms = specs
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            let mode_product: i64 = s.product.iter().map(|&m| i64::from(m)).product();
            let contribution = if s.gate {
                emission_geometry(photon, s.emitter, p) * (pref * mode_product as f64)
            } else {
                Complex64::new(0.0, 0.0)
            };
            value += contribution;
            let e = |ms: &[ModeIndex]| ms.iter().map(|&m| p.phonon_energy(m)).sum::<f64>();
            NonlinearTerm {
                index: i as u8 + 1,
                mode_product,
                gate_open: s.gate,
                gate_consistent: s.gate_consistent,
                string_on_shell: on_shell(e(&s.energy.0), e(&s.energy.1)),
                photon_on_shell: on_shell(photon.omega(), p.phonon_energy(s.emitter)),
                emitting_mode: s.emitter,
                contribution,
            }
        })
        .collect();
    NonlinearAmplitude {
        value,
        component,
        terms,
    }
}

/// Reduced amplitude for `|m, l, f> -> |n, j> (x) |p, r>_F`.
pub fn amp_nonlinear_emission(
    initial: [ModeIndex; 3],
    finals: [ModeIndex; 2],
    photon: &PhotonSpec,
    component: CouplingComponent,
    p: &StringParams,
) -> Result<NonlinearAmplitude> {
    let [m, l, f] = initial;
    let [n, j] = finals;
    for x in [m, l, f, n, j] {
        require_nonzero(x)?;
    }
    let pref = prefactor([m, l, f, n, j], photon, component, p);
    let term = |a: ModeIndex, b: ModeIndex, emitter: ModeIndex| TermSpec {
        product: [a, b, n, j],
        gate: a + b == n + j,
        gate_consistent: true,
        energy: (vec![n, j], vec![a, b]),
        emitter,
    };
    let specs = vec![term(m, l, f), term(m, f, l), term(l, f, m)];
    Ok(evaluate(specs, pref, photon, component, p))
}

/// Reduced amplitude for `|m, l, f, j> -> |n> (x) |p, r>_F`.
///
/// The second term is gated by `m + l + j = f`, although its
/// energy delta balances `n` against `m, l, j`; its `gate_consistent` flag
/// is false.
pub fn amp_nonlinear_absorb4(
    initial: [ModeIndex; 4],
    final_mode: ModeIndex,
    photon: &PhotonSpec,
    component: CouplingComponent,
    p: &StringParams,
) -> Result<NonlinearAmplitude> {
    let [m, l, f, j] = initial;
    let n = final_mode;
    for x in [m, l, f, j, n] {
        require_nonzero(x)?;
    }
    let pref = prefactor([m, l, f, n, j], photon, component, p);
    let specs = vec![
        TermSpec {
            product: [m, l, n, f],
            gate: m + l + f == n,
            gate_consistent: true,
            energy: (vec![n], vec![f, m, l]),
            emitter: j,
        },
        TermSpec {
            product: [m, l, n, j],
            gate: m + l + j == f,
            gate_consistent: false,
            energy: (vec![n], vec![l, m, j]),
            emitter: f,
        },
        TermSpec {
            product: [l, f, n, j],
            gate: l + f + j == n,
            gate_consistent: true,
            energy: (vec![n], vec![j, l, f]),
            emitter: m,
        },
        TermSpec {
            product: [m, f, n, j],
            gate: m + f + j == n,
            gate_consistent: true,
            energy: (vec![n], vec![j, m, f]),
            emitter: l,
        },
    ];
    Ok(evaluate(specs, pref, photon, component, p))
}
