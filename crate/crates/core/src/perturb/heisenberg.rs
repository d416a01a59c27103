//! First-order solution of the Heisenberg equation for the mode amplitude
//! `C_n(t)`.
//!
//! To first order in `gamma`,
//!
//! ```text
//! C_n(t) = E_n exp(i w_n t) + F_n exp(-i w_n t)
//!        + sum_{s,j} sum_{k=1..8} L_k / (w_n^2 - W_k^2) O_k exp(+-i W_k t)
//! ```
//!
//! where each `O_k` is a cubic monomial in the phonon ladder operators and
//! `W_k` a signed combination of three mode frequencies. Linear dispersion
//! makes many `w_n^2 - W_k^2` vanish exactly; those terms are secular and
//! are reported instead of evaluated.

use num_complex::Complex64;

use crate::fock::Ladder;
use crate::modes::{coupling_l, require_nonzero, ModeIndex, StringParams};
use crate::Result;

/// Relative threshold on `|w_n^2 - W^2| / w_n^2` below which a term is secular.
pub const SECULAR_TOL: f64 = 1e-9;

/// One of the eight cubic terms for a fixed `(n, s, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeisenbergTerm {
    /// Term number 1..=8 in the fixed order of the expansion.
    pub index: u8,
    pub s: ModeIndex,
    pub j: ModeIndex,
    /// Operator monomial, leftmost factor first.
    pub operators: [Ladder; 3],
    /// The `L` coupling of the term, evaluated for the equation of mode `n`.
    pub coupling: f64,
    /// Phase frequency `W`.
    pub frequency: f64,
    /// `+1` for `exp(+i W t)`, `-1` for `exp(-i W t)`.
    pub phase_sign: f64,
    pub denominator: f64,
    /// `coupling / denominator`; `None` when the term is secular.
    pub prefactor: Option<f64>,
    pub secular: bool,
    /// Created minus annihilated momentum; `-n` for a momentum-balanced term.
    pub momentum_change: i64,
    pub conserves_momentum: bool,
}

impl HeisenbergTerm {
    pub fn phase(&self, t: f64) -> Complex64 {
        Complex64::from_polar(1.0, self.phase_sign * self.frequency * t)
    }

    /// `prefactor * phase(t)`, zero for secular terms.
    pub fn value_at(&self, t: f64) -> Complex64 {
        self.prefactor.map_or(Complex64::new(0.0, 0.0), |c| c * self.phase(t))
    }
}

/// Linear combination of ladder-operator monomials.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OperatorSum {
    pub terms: Vec<(f64, Vec<Ladder>)>,
}

impl OperatorSum {
    pub fn coefficient_of(&self, ops: &[Ladder]) -> f64 {
        self.terms
            .iter()
            .filter(|(_, o)| o.as_slice() == ops)
            .map(|(c, _)| c)
            .sum()
    }
}

/// Which `(s, j)` pairs to include.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermSelector {
    /// A single summation pair.
    Pair { s: ModeIndex, j: ModeIndex },
    /// All pairs whose operator modes lie in `1 <= |m| <= cutoff`.
    Cutoff(ModeIndex),
}

#[derive(Debug, Clone)]
pub struct HeisenbergTable {
    pub n: ModeIndex,
    pub t: f64,
    /// Evaluated terms, with vanishing couplings dropped.
    pub terms: Vec<HeisenbergTerm>,
    /// Terms whose denominators are resonant; excluded from `terms` sums
    /// and from `e_n`, `f_n`.
    pub secular: Vec<HeisenbergTerm>,
    /// Coefficient operator of `exp(i w_n t)`.
    pub e_n: OperatorSum,
    /// Coefficient operator of `exp(-i w_n t)`.
    pub f_n: OperatorSum,
}

impl HeisenbergTable {
    pub fn has_secular_terms(&self) -> bool {
        !self.secular.is_empty()
    }
}

/// The eight terms for one `(n, s, j)`, secular ones included and flagged.
pub fn heisenberg_terms(
    n: ModeIndex,
    s: ModeIndex,
    j: ModeIndex,
    p: &StringParams,
) -> Result<[HeisenbergTerm; 8]> {
    require_nonzero(n)?;
    let w = |m: ModeIndex| p.omega(m);
    let wn = w(n);
    let r = w(s + j - n);
    let l = |a: ModeIndex, b: ModeIndex| coupling_l(a, b, n, p);
    use Ladder as B;
    let specs: [(f64, [Ladder; 3], f64, f64); 8] = [
        (l(-s, -j), [B::raise(s), B::raise(j), B::lower(s + j + n)], w(s) + w(j) - r, 1.0),
        (l(-s, -j), [B::raise(s), B::raise(j), B::lower(-s - j - n)], w(s) + w(j) + r, 1.0),
        (l(-s, j), [B::raise(s), B::lower(j), B::lower(s + n - j)], w(s) - w(j) - r, 1.0),
        (l(-s, j), [B::raise(s), B::raise(j - s - n), B::lower(j)], w(s) - w(j) + r, 1.0),
        (l(s, -j), [B::raise(j), B::lower(s), B::lower(n + j - s)], w(j) - w(s) - r, 1.0),
        (l(s, -j), [B::raise(j), B::raise(s - n - j), B::lower(s)], w(j) - w(s) + r, 1.0),
        (l(s, j), [B::lower(j), B::lower(s), B::lower(n - s - j)], w(j) + w(s) + r, -1.0),
        (l(s, j), [B::raise(s + j - n), B::lower(j), B::lower(s)], w(j) + w(s) - r, -1.0),
    ];
    Ok(std::array::from_fn(|k| {
        let (coupling, operators, frequency, phase_sign) = specs[k];
        let denominator = wn * wn - frequency * frequency;
        let secular = coupling != 0.0 && denominator.abs() < SECULAR_TOL * wn * wn;
        let prefactor = if coupling == 0.0 {
            Some(0.0)
        } else if secular {
            None
        } else {
            Some(coupling / denominator)
        };
        let momentum_change: i64 = operators
            .iter()
            .map(|o| if o.raise { i64::from(o.mode) } else { -i64::from(o.mode) })
            .sum();
        HeisenbergTerm {
            index: k as u8 + 1,
            s,
            j,
            operators,
            coupling,
            frequency,
            phase_sign,
            denominator,
            prefactor,
            secular,
            momentum_change,
            conserves_momentum: momentum_change == -i64::from(n),
        }
    }))
}

/// Coefficient table for `C_n(t)` at time `t`.
///
/// `E_n` and `F_n` follow from `C_n(0) = B_{-n}^+ + B_n` and
/// `dC_n/dt(0) = i w_n B_{-n}^+ - i w_n B_n` once the particular solution is
/// subtracted:
///
/// ```text
/// E_n = B_{-n}^+ - 1/2 sum_k c_k (1 + sigma_k W_k / w_n) O_k
/// F_n = B_n      - 1/2 sum_k c_k (1 - sigma_k W_k / w_n) O_k
/// ```
pub fn heisenberg_coefficient(
    n: ModeIndex,
    selector: TermSelector,
    t: f64,
    p: &StringParams,
) -> Result<HeisenbergTable> {
    require_nonzero(n)?;
    let pairs: Vec<(ModeIndex, ModeIndex)> = match selector {
        TermSelector::Pair { s, j } => vec![(s, j)],
        TermSelector::Cutoff(c) => {
            let range: Vec<ModeIndex> = (-c..=c).filter(|&m| m != 0).collect();
            range
                .iter()
                .flat_map(|&s| range.iter().map(move |&j| (s, j)))
                .collect()
        }
    };
    let in_cutoff = |term: &HeisenbergTerm| match selector {
        TermSelector::Pair { .. } => true,
        TermSelector::Cutoff(c) => term.operators.iter().all(|o| o.mode != 0 && o.mode.abs() <= c),
    };

    let wn = p.omega(n);
    let mut terms = Vec::new();
    let mut secular = Vec::new();
    let mut e_n = OperatorSum {
        terms: vec![(1.0, vec![Ladder::raise(-n)])],
    };
    let mut f_n = OperatorSum {
        terms: vec![(1.0, vec![Ladder::lower(n)])],
    };
    for (s, j) in pairs {
        for term in heisenberg_terms(n, s, j, p)? {
            if term.coupling == 0.0 || !in_cutoff(&term) {
                continue;
            }
            match term.prefactor {
                None => secular.push(term),
                Some(c) => {
                    let ratio = term.phase_sign * term.frequency / wn;
                    e_n.terms.push((-0.5 * c * (1.0 + ratio), term.operators.to_vec()));
                    f_n.terms.push((-0.5 * c * (1.0 - ratio), term.operators.to_vec()));
                    terms.push(term);
                }
            }
        }
    }
    Ok(HeisenbergTable {
        n,
        t,
        terms,
        secular,
        e_n,
        f_n,
    })
}
