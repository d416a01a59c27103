use std::collections::HashMap;

use super::FockState;
use crate::modes::ModeIndex;
use crate::{Error, Result};

/// Default upper bound on the number of basis states.
pub const DEFAULT_BASIS_CAP: usize = 200_000;

/// Enumerated, deterministically ordered truncated Fock basis.
///
/// Modes run over `-N..=-1` and `1..=N`; total phonon number is at most `P`;
/// an optional momentum sector keeps only states with `K = sector`.
/// States are sorted by `(total phonons, momentum, occupations)`.
#[derive(Debug, Clone)]
pub struct FockBasis {
    cutoff: ModeIndex,
    max_phonons: u32,
    sector: Option<i64>,
    states: Vec<FockState>,
    index: HashMap<FockState, usize>,
}

impl FockBasis {
    pub fn new(cutoff: ModeIndex, max_phonons: u32, sector: Option<i64>) -> Result<Self> {
        Self::with_cap(cutoff, max_phonons, sector, DEFAULT_BASIS_CAP)
    }

    pub fn with_cap(
        cutoff: ModeIndex,
        max_phonons: u32,
        sector: Option<i64>,
        cap: usize,
    ) -> Result<Self> {
        if cutoff < 1 {
            return Err(Error::InvalidBasis(format!(
                "mode cutoff must be at least 1, got {cutoff}"
            )));
        }
        let modes: Vec<ModeIndex> = (-cutoff..=-1).chain(1..=cutoff).collect();
        let mut states = Vec::new();
        let mut current: Vec<(ModeIndex, u32)> = Vec::new();
        enumerate(
            &modes,
            0,
            max_phonons,
            0,
            i64::from(cutoff),
            sector,
            cap,
            &mut current,
            &mut states,
        )?;
        states.sort_by(|a, b| {
            (a.total_phonons(), a.momentum(), a).cmp(&(b.total_phonons(), b.momentum(), b))
        });
        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Ok(FockBasis {
            cutoff,
            max_phonons,
            sector,
            states,
            index,
        })
    }

    pub fn cutoff(&self) -> ModeIndex {
        self.cutoff
    }

    pub fn max_phonons(&self) -> u32 {
        self.max_phonons
    }

    pub fn sector(&self) -> Option<i64> {
        self.sector
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[FockState] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &FockState {
        &self.states[i]
    }

    pub fn index_of(&self, state: &FockState) -> Option<usize> {
        self.index.get(state).copied()
    }

    pub fn require_index(&self, state: &FockState) -> Result<usize> {
        self.index_of(state)
            .ok_or_else(|| Error::StateNotInBasis(state.to_string()))
    }

    /// Basis vector for `state`.
    pub fn unit_vector(&self, state: &FockState) -> Result<Vec<crate::Complex64>> {
        let i = self.require_index(state)?;
        let mut v = vec![crate::Complex64::new(0.0, 0.0); self.dim()];
        v[i] = crate::Complex64::new(1.0, 0.0);
        Ok(v)
    }
}

/// Convenience wrapper using [`DEFAULT_BASIS_CAP`].
pub fn build_basis(cutoff: ModeIndex, max_phonons: u32, sector: Option<i64>) -> Result<FockBasis> {
    FockBasis::new(cutoff, max_phonons, sector)
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    modes: &[ModeIndex],
    pos: usize,
    remaining: u32,
    momentum: i64,
    cutoff: i64,
    sector: Option<i64>,
    cap: usize,
    current: &mut Vec<(ModeIndex, u32)>,
    out: &mut Vec<FockState>,
) -> Result<()> {
    if let Some(k) = sector {
        // Remaining phonons can shift momentum by at most remaining * cutoff.
        if (k - momentum).abs() > i64::from(remaining) * cutoff {
            return Ok(());
        }
    }
    if pos == modes.len() {
        if sector.is_none_or(|k| k == momentum) {
            if out.len() >= cap {
                return Err(Error::BasisTooLarge {
                    dim: out.len() + 1,
                    cap,
                });
            }
            out.push(FockState::from_occupations(current.iter().copied())?);
        }
        return Ok(());
    }
    let mode = modes[pos];
    for count in 0..=remaining {
        if count > 0 {
            current.push((mode, count));
        }
        enumerate(
            modes,
            pos + 1,
            remaining - count,
            momentum + i64::from(mode) * i64::from(count),
            cutoff,
            sector,
            cap,
            current,
            out,
        )?;
        if count > 0 {
            current.pop();
        }
    }
    Ok(())
}
