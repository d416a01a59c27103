use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::modes::{ModeIndex, StringParams};
use crate::{Error, Result};

/// Occupation-number state over nonzero string modes.
///
/// Keys are kept in a `BTreeMap`, so two states with the same occupations
/// compare equal structurally and sort lexicographically by
/// `(mode, count)` pairs. Zero counts are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockState {
    occupations: BTreeMap<ModeIndex, u32>,
}

impl FockState {
    pub fn vacuum() -> Self {
        FockState::default()
    }

    /// Builds a state from a list of phonon modes; repeated entries stack.
    pub fn from_modes(modes: &[ModeIndex]) -> Result<Self> {
        let mut state = FockState::vacuum();
        for &m in modes {
            if m == 0 {
                return Err(Error::ZeroMode);
            }
            *state.occupations.entry(m).or_insert(0) += 1;
        }
        Ok(state)
    }

    pub fn from_occupations<I>(occupations: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ModeIndex, u32)>,
    {
        let mut state = FockState::vacuum();
        for (m, c) in occupations {
            if m == 0 {
                return Err(Error::ZeroMode);
            }
            if c > 0 {
                *state.occupations.entry(m).or_insert(0) += c;
            }
        }
        Ok(state)
    }

    pub fn is_vacuum(&self) -> bool {
        self.occupations.is_empty()
    }

    pub fn occupation(&self, mode: ModeIndex) -> u32 {
        self.occupations.get(&mode).copied().unwrap_or(0)
    }

    /// `(mode, count)` pairs in ascending mode order.
    pub fn occupations(&self) -> impl Iterator<Item = (ModeIndex, u32)> + '_ {
        self.occupations.iter().map(|(&m, &c)| (m, c))
    }

    /// Distinct occupied modes in ascending order.
    pub fn modes(&self) -> impl Iterator<Item = ModeIndex> + '_ {
        self.occupations.keys().copied()
    }

    /// Every phonon listed once, repeated modes with multiplicity.
    pub fn phonons(&self) -> Vec<ModeIndex> {
        self.occupations
            .iter()
            .flat_map(|(&m, &c)| std::iter::repeat_n(m, c as usize))
            .collect()
    }

    pub fn total_phonons(&self) -> u32 {
        self.occupations.values().sum()
    }

    /// Total momentum label `K = sum_n n * count(n)`.
    pub fn momentum(&self) -> i64 {
        self.occupations
            .iter()
            .map(|(&m, &c)| i64::from(m) * i64::from(c))
            .sum()
    }

    /// Free energy `sum |omega_n|` over all phonons.
    pub fn free_energy(&self, p: &StringParams) -> f64 {
        self.occupations
            .iter()
            .map(|(&m, &c)| f64::from(c) * p.phonon_energy(m))
            .sum()
    }

    pub fn max_abs_mode(&self) -> ModeIndex {
        self.occupations.keys().map(|m| m.abs()).max().unwrap_or(0)
    }

    pub(crate) fn add(&mut self, mode: ModeIndex) {
        *self.occupations.entry(mode).or_insert(0) += 1;
    }

    /// Removes one phonon from `mode`, returning the count held before.
    pub(crate) fn remove(&mut self, mode: ModeIndex) -> u32 {
        match self.occupations.get_mut(&mode) {
            None => 0,
            Some(c) => {
                let before = *c;
                if before == 1 {
                    self.occupations.remove(&mode);
                } else {
                    *c -= 1;
                }
                before
            }
        }
    }
}

/// Kets print as `[m1;m2;...]` with modes ascending and repeated per phonon,
/// so they stay inside one CSV field. The vacuum is `[]`.
impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, m) in self.phonons().iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for FockState {
    type Err = Error;

    /// Accepts `[1;1;-2]`, `1;1;-2`, `1,1,-2`, `vacuum` and `[]`.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim();
        if body.eq_ignore_ascii_case("vacuum") {
            return Ok(FockState::vacuum());
        }
        let body = body.strip_prefix('[').unwrap_or(body);
        let body = body.strip_suffix(']').unwrap_or(body).trim();
        if body.is_empty() {
            return Ok(FockState::vacuum());
        }
        let modes = body
            .split([';', ','])
            .map(|tok| {
                tok.trim().parse::<ModeIndex>().map_err(|e| Error::Parse {
                    what: format!("Fock state `{s}`"),
                    message: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        FockState::from_modes(&modes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structural_equality_ignores_order() {
        let a = FockState::from_modes(&[2, -1, 2]).unwrap();
        let b = FockState::from_modes(&[-1, 2, 2]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.total_phonons(), 3);
        assert_eq!(a.momentum(), 3);
        assert_eq!(a.occupation(2), 2);
    }

    #[test]
    fn zero_mode_rejected() {
        assert!(matches!(FockState::from_modes(&[1, 0]), Err(Error::ZeroMode)));
    }

    #[test]
    fn display_round_trip() {
        let s = FockState::from_modes(&[1, 1, 1, -3]).unwrap();
        assert_eq!(s.to_string(), "[-3;1;1;1]");
        assert_eq!(s.to_string().parse::<FockState>().unwrap(), s);
        assert_eq!("vacuum".parse::<FockState>().unwrap(), FockState::vacuum());
        assert_eq!("[]".parse::<FockState>().unwrap(), FockState::vacuum());
        assert!("1;x".parse::<FockState>().is_err());
    }

    #[test]
    fn remove_tracks_counts() {
        let mut s = FockState::from_modes(&[1, 1]).unwrap();
        assert_eq!(s.remove(1), 2);
        assert_eq!(s.remove(1), 1);
        assert!(s.is_vacuum());
        assert_eq!(s.remove(1), 0);
    }
}
