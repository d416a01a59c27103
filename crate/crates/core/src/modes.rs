//! Mode arithmetic for the periodic string.
//!
//! Modes are the plane waves `exp(i 2 pi n x / L)`; `n` is a signed integer.
//! All functions here are pure and evaluate in units `hbar = c = 1` with unit
//! linear mass density.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Signed mode label `n` of the plane wave `exp(i 2 pi n x / L)`.
///
/// Quantum-side code never accepts `0`: the zero mode has vanishing
/// frequency and its ladder normalization diverges.
pub type ModeIndex = i32;

/// Physical constants of the string.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StringParams {
    /// Length `L` of the periodic string.
    pub length: f64,
    /// Linear wave speed `v`.
    pub speed: f64,
    /// Quartic nonlinearity `gamma`; any sign is admissible.
    pub gamma: f64,
    /// Linear charge density `sigma`.
    pub sigma: f64,
}

impl StringParams {
    pub fn new(length: f64, speed: f64, gamma: f64, sigma: f64) -> Result<Self> {
        let p = StringParams {
            length,
            speed,
            gamma,
            sigma,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length.is_finite() && self.length > 0.0) {
            return Err(Error::InvalidParams(format!(
                "length must be positive, got {}",
                self.length
            )));
        }
        if !(self.speed.is_finite() && self.speed > 0.0) {
            return Err(Error::InvalidParams(format!(
                "wave speed must be positive, got {}",
                self.speed
            )));
        }
        if !self.gamma.is_finite() {
            return Err(Error::InvalidParams("gamma must be finite".into()));
        }
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "charge density must be non-negative, got {}",
                self.sigma
            )));
        }
        Ok(())
    }

    pub fn with_gamma(self, gamma: f64) -> Self {
        StringParams { gamma, ..self }
    }

    pub fn with_sigma(self, sigma: f64) -> Self {
        StringParams { sigma, ..self }
    }

    /// Wavenumber `k_n = 2 pi n / L`.
    pub fn wavenumber(&self, n: ModeIndex) -> f64 {
        2.0 * PI * f64::from(n) / self.length
    }

    pub fn omega(&self, n: ModeIndex) -> f64 {
        omega(n, self)
    }

    /// Phonon energy `|omega_n|`.
    pub fn phonon_energy(&self, n: ModeIndex) -> f64 {
        omega(n, self).abs()
    }

    /// Prefactor `2 pi^4 gamma / (3 L^3)` shared by every quartic coupling.
    pub fn quartic_scale(&self) -> f64 {
        2.0 * PI.powi(4) * self.gamma / (3.0 * self.length.powi(3))
    }
}

impl Default for StringParams {
    /// `L = 2 pi`, `v = 1`, linear and uncharged: every mode frequency
    /// equals its index.
    fn default() -> Self {
        StringParams {
            length: 2.0 * PI,
            speed: 1.0,
            gamma: 0.0,
            sigma: 0.0,
        }
    }
}

/// Signed mode frequency `omega_n = 2 pi v n / L`.
pub fn omega(n: ModeIndex, p: &StringParams) -> f64 {
    2.0 * PI * p.speed * f64::from(n) / p.length
}

/// Quartic coupling `M_{n,s,t} = (2 pi^4 gamma / 3 L^3) n s t (n + s + t)`.
///
/// Symmetric in its three arguments; zero whenever any argument or their sum
/// vanishes.
pub fn coupling_m(n: ModeIndex, s: ModeIndex, t: ModeIndex, p: &StringParams) -> f64 {
    let prod = f64::from(n) * f64::from(s) * f64::from(t) * (f64::from(n) + f64::from(s) + f64::from(t));
    p.quartic_scale() * prod
}

/// Heisenberg-equation coupling for the equation of mode `j`:
/// `L_{s,t} = -(8 pi^4 gamma j / 3 L^4) s t (s + t - j)`.
pub fn coupling_l(s: ModeIndex, t: ModeIndex, j: ModeIndex, p: &StringParams) -> f64 {
    let (s, t, j) = (f64::from(s), f64::from(t), f64::from(j));
    -8.0 * PI.powi(4) * p.gamma * j / (3.0 * p.length.powi(4)) * s * t * (s + t - j)
}

pub(crate) fn require_nonzero(n: ModeIndex) -> Result<()> {
    if n == 0 {
        Err(Error::ZeroMode)
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn unit() -> StringParams {
        StringParams::new(1.0, 1.0, 1.0, 0.0).unwrap()
    }

    #[test]
    fn omega_values() {
        let p = unit();
        assert_eq!(omega(0, &p), 0.0);
        assert_relative_eq!(omega(2, &p), 4.0 * PI, max_relative = 1e-15);
        let p2 = StringParams::new(2.0, 1.0, 0.0, 0.0).unwrap();
        assert_relative_eq!(omega(-3, &p2), -3.0 * PI, max_relative = 1e-15);
    }

    #[test]
    fn coupling_m_values() {
        let p = unit();
        assert_relative_eq!(coupling_m(1, 1, 1, &p), 2.0 * PI.powi(4), max_relative = 1e-14);
        assert_relative_eq!(coupling_m(1, 1, 1, &p), 194.818_182, max_relative = 1e-8);
        assert_eq!(coupling_m(0, 4, -2, &p), 0.0);
        assert_eq!(coupling_m(1, 2, 3, &p), coupling_m(3, 1, 2, &p));
    }

    #[test]
    fn coupling_l_values() {
        let p = unit();
        assert_eq!(coupling_l(0, 3, 1, &p), 0.0);
        assert_eq!(coupling_l(2, 0, 1, &p), 0.0);
        assert_eq!(coupling_l(1, 2, 3, &p), 0.0);
        assert_relative_eq!(coupling_l(1, 1, 1, &p), -8.0 * PI.powi(4) / 3.0, max_relative = 1e-14);
        assert_relative_eq!(coupling_l(1, 1, 1, &p), -259.757_576, max_relative = 1e-8);
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(StringParams::new(0.0, 1.0, 0.0, 0.0).is_err());
        assert!(StringParams::new(1.0, -1.0, 0.0, 0.0).is_err());
        assert!(StringParams::new(1.0, 1.0, 0.0, -0.1).is_err());
        assert!(StringParams::new(1.0, 1.0, -5.0, 0.0).is_ok());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn coupling_m_permutation_symmetric(n in -40i32..40, s in -40i32..40, t in -40i32..40, l in 0.3f64..5.0) {
            let p = StringParams::new(l, 1.0, 0.7, 0.0).unwrap();
            let reference = coupling_m(n, s, t, &p);
            for (a, b, c) in [(n, s, t), (n, t, s), (s, n, t), (s, t, n), (t, n, s), (t, s, n)] {
                prop_assert_eq!(coupling_m(a, b, c, &p), reference);
            }
        }

        #[test]
        fn omega_is_odd(n in -1000i32..1000, l in 0.1f64..10.0, v in 0.1f64..10.0) {
            let p = StringParams::new(l, v, 0.0, 0.0).unwrap();
            prop_assert_eq!(omega(-n, &p), -omega(n, &p));
        }

        #[test]
        fn linear_string_has_no_couplings(n in -20i32..20, s in -20i32..20, t in -20i32..20) {
            let p = StringParams::new(1.3, 0.8, 0.0, 0.2).unwrap();
            prop_assert_eq!(coupling_m(n, s, t, &p), 0.0);
            prop_assert_eq!(coupling_l(n, s, t, &p), 0.0);
        }
    }
}
