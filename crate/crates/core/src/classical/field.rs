use num_complex::Complex64;

use super::spectral::Spectral;
use crate::modes::StringParams;
use crate::{Error, Result};

/// Transverse displacement `y` and velocity `dy/dt` on a uniform periodic
/// grid `x_j = j L / G`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub y: Vec<f64>,
    pub ydot: Vec<f64>,
    pub t: f64,
    pub params: StringParams,
}

impl FieldState {
    pub fn new(params: StringParams, y: Vec<f64>, ydot: Vec<f64>, t: f64) -> Result<Self> {
        params.validate()?;
        let g = y.len();
        if g < 8 || !g.is_power_of_two() {
            return Err(Error::InvalidField(format!(
                "grid size must be a power of two >= 8, got {g}"
            )));
        }
        if ydot.len() != g {
            return Err(Error::InvalidField(format!(
                "y has {g} samples but ydot has {}",
                ydot.len()
            )));
        }
        if !(y.iter().chain(&ydot).all(|v| v.is_finite()) && t.is_finite()) {
            return Err(Error::InvalidField("non-finite sample".into()));
        }
        Ok(FieldState { y, ydot, t, params })
    }

    /// Samples `y(x)` and `dy/dt(x)` at the grid points.
    pub fn from_fn(
        params: StringParams,
        g: usize,
        y: impl Fn(f64) -> f64,
        ydot: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let dx = params.length / g as f64;
        let xs: Vec<f64> = (0..g).map(|j| j as f64 * dx).collect();
        Self::new(
            params,
            xs.iter().map(|&x| y(x)).collect(),
            xs.iter().map(|&x| ydot(x)).collect(),
            0.0,
        )
    }

    pub fn grid_size(&self) -> usize {
        self.y.len()
    }

    pub fn dx(&self) -> f64 {
        self.params.length / self.y.len() as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        j as f64 * self.dx()
    }

    pub fn mean_y(&self) -> f64 {
        self.y.iter().sum::<f64>() / self.y.len() as f64
    }
}

/// Pseudo-spectral integrator for
///
/// ```text
/// y_tt = v^2 y_xx + (gamma/2) y_x^2 y_xx
/// ```
///
/// on a fixed grid. The cubic term is evaluated as `(gamma/6) d/dx (y_x^3)`
/// on a 2x padded grid, which is alias-free once the Nyquist mode is zero.
#[derive(Debug, Clone)]
pub struct StringSolver {
    params: StringParams,
    spectral: Spectral,
}

impl StringSolver {
    pub fn new(params: StringParams, g: usize) -> Result<Self> {
        params.validate()?;
        if g < 8 || !g.is_power_of_two() {
            return Err(Error::InvalidField(format!(
                "grid size must be a power of two >= 8, got {g}"
            )));
        }
        Ok(StringSolver {
            params,
            spectral: Spectral::new(g, params.length),
        })
    }

    pub fn for_state(state: &FieldState) -> Result<Self> {
        Self::new(state.params, state.grid_size())
    }

    pub fn params(&self) -> &StringParams {
        &self.params
    }

    pub fn spectral(&self) -> &Spectral {
        &self.spectral
    }

    /// Largest stable step, `0.5 dx / v`.
    pub fn max_dt(&self) -> f64 {
        0.5 * self.params.length / self.spectral.size() as f64 / self.params.speed
    }

    pub(crate) fn check(&self, state: &FieldState, dt: f64) -> Result<()> {
        if state.grid_size() != self.spectral.size() || state.params != self.params {
            return Err(Error::InvalidField("state does not match solver grid or parameters".into()));
        }
        let limit = self.max_dt();
        if !(dt.is_finite() && dt > 0.0 && dt < limit) {
            return Err(Error::Unstable { dt, limit });
        }
        Ok(())
    }

    /// Fourier coefficients of `(gamma/2) y_x^2 y_xx`.
    pub fn cubic_force_hat(&self, y: &[f64]) -> Vec<Complex64> {
        let s = &self.spectral;
        let yx_hat = s.differentiate(&s.forward(y), 1);
        let cube: Vec<f64> = s.padded_samples(&yx_hat).iter().map(|v| v * v * v).collect();
        let cube_hat = s.truncate_padded(&cube);
        s.differentiate(&cube_hat, 1)
            .into_iter()
            .map(|c| c * (self.params.gamma / 6.0))
            .collect()
    }

    /// The cubic force `(gamma/2) y_x^2 y_xx` at the grid points.
    pub fn cubic_force(&self, y: &[f64]) -> Vec<f64> {
        if self.params.gamma == 0.0 {
            return vec![0.0; y.len()];
        }
        self.spectral.inverse(&self.cubic_force_hat(y))
    }

    /// Total conservative acceleration `v^2 y_xx + (gamma/2) y_x^2 y_xx`.
    pub fn acceleration(&self, y: &[f64]) -> Vec<f64> {
        let s = &self.spectral;
        let v2 = self.params.speed * self.params.speed;
        let lin = s.differentiate(&s.forward(y), 2);
        let mut hat: Vec<Complex64> = lin.iter().map(|c| c * v2).collect();
        if self.params.gamma != 0.0 {
            for (h, c) in hat.iter_mut().zip(self.cubic_force_hat(y)) {
                *h += c;
            }
        }
        s.inverse(&hat)
    }

    /// `integral of 1/2 ydot^2 + 1/2 v^2 y_x^2 + (gamma/24) y_x^4 dx`.
    pub fn energy(&self, state: &FieldState) -> f64 {
        let s = &self.spectral;
        let l = self.params.length;
        let v2 = self.params.speed * self.params.speed;
        let ydot_hat = s.forward(&state.ydot);
        let yx_hat = s.differentiate(&s.forward(&state.y), 1);
        let kinetic: f64 = ydot_hat.iter().map(|c| c.norm_sqr()).sum::<f64>() * 0.5 * l;
        let strain: f64 = yx_hat.iter().map(|c| c.norm_sqr()).sum::<f64>() * 0.5 * v2 * l;
        let quartic = if self.params.gamma == 0.0 {
            0.0
        } else {
            let yx = s.padded_samples(&yx_hat);
            let fourth: Vec<f64> = yx.iter().map(|v| v.powi(4)).collect();
            Spectral::padded_mean(&fourth) * l * self.params.gamma / 24.0
        };
        kinetic + strain + quartic
    }

    /// Field momentum `integral of ydot * y_x dx`.
    pub fn momentum(&self, state: &FieldState) -> f64 {
        let s = &self.spectral;
        let ydot_hat = s.forward(&state.ydot);
        let yx_hat = s.differentiate(&s.forward(&state.y), 1);
        ydot_hat
            .iter()
            .zip(&yx_hat)
            .map(|(a, b)| (a.conj() * b).re)
            .sum::<f64>()
            * self.params.length
    }

    /// Exact evolution of the linear wave equation over `dt`, applied in
    /// Fourier space. The Nyquist mode is removed.
    pub(crate) fn drift(&self, y: &mut Vec<f64>, ydot: &mut Vec<f64>, dt: f64) {
        let s = &self.spectral;
        let v = self.params.speed;
        let mut yh = s.forward(y);
        let mut vh = s.forward(ydot);
        for (i, &k) in s.wavenumbers().iter().enumerate() {
            if i == s.size() / 2 {
                yh[i] = Complex64::new(0.0, 0.0);
                vh[i] = Complex64::new(0.0, 0.0);
                continue;
            }
            if k == 0.0 {
                yh[i] += vh[i] * dt;
                continue;
            }
            let w = v * k.abs();
            let (sn, cs) = (w * dt).sin_cos();
            let (a, b) = (yh[i], vh[i]);
            yh[i] = a * cs + b * (sn / w);
            vh[i] = b * cs - a * (w * sn);
        }
        *y = s.inverse(&yh);
        *ydot = s.inverse(&vh);
    }

    /// One Strang step: half kick by the cubic force, exact linear drift,
    /// half kick.
    pub fn step_conservative(&self, state: &FieldState, dt: f64) -> Result<FieldState> {
        self.check(state, dt)?;
        let mut y = state.y.clone();
        let mut ydot = state.ydot.clone();
        let half = 0.5 * dt;
        for (v, f) in ydot.iter_mut().zip(self.cubic_force(&y)) {
            *v += half * f;
        }
        self.drift(&mut y, &mut ydot, dt);
        for (v, f) in ydot.iter_mut().zip(self.cubic_force(&y)) {
            *v += half * f;
        }
        finite(FieldState {
            y,
            ydot,
            t: state.t + dt,
            params: state.params,
        })
    }

    /// Fourier coefficients of `y` for modes `1..=count`.
    pub fn modes(&self, state: &FieldState, count: usize) -> Vec<Complex64> {
        let hat = self.spectral.forward(&state.y);
        (1..=count).map(|k| hat.get(k).copied().unwrap_or_default()).collect()
    }
}

pub(crate) fn finite(state: FieldState) -> Result<FieldState> {
    if state.y.iter().chain(&state.ydot).all(|v| v.is_finite()) {
        Ok(state)
    } else {
        Err(Error::NonFinite { t: state.t })
    }
}

pub fn energy(state: &FieldState) -> Result<f64> {
    Ok(StringSolver::for_state(state)?.energy(state))
}

pub fn momentum(state: &FieldState) -> Result<f64> {
    Ok(StringSolver::for_state(state)?.momentum(state))
}

/// One conservative step; builds FFT plans on every call, so loops should
/// hold a [`StringSolver`] instead.
pub fn step_conservative(state: &FieldState, dt: f64) -> Result<FieldState> {
    StringSolver::for_state(state)?.step_conservative(state, dt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn params(gamma: f64, length: f64) -> StringParams {
        StringParams::new(length, 1.0, gamma, 0.0).unwrap()
    }

    #[test]
    fn energy_examples() {
        let l = 3.0;
        let k = 2.0 * PI / l;
        let zero = FieldState::from_fn(params(0.0, l), 32, |_| 0.0, |_| 0.0).unwrap();
        assert_eq!(energy(&zero).unwrap(), 0.0);
        let s = FieldState::from_fn(params(0.0, l), 32, |x| (k * x).sin(), |_| 0.0).unwrap();
        assert_relative_eq!(energy(&s).unwrap(), PI * PI / l, max_relative = 1e-13);
        let g = 0.3;
        let s = FieldState::from_fn(params(g, l), 32, |x| (k * x).sin(), |_| 0.0).unwrap();
        let quartic = g / 24.0 * k.powi(4) * 3.0 * l / 8.0;
        assert_relative_eq!(energy(&s).unwrap(), PI * PI / l + quartic, max_relative = 1e-13);
    }

    #[test]
    fn rejects_bad_grids_and_steps() {
        let p = params(0.0, 1.0);
        assert!(FieldState::new(p, vec![0.0; 12], vec![0.0; 12], 0.0).is_err());
        assert!(FieldState::new(p, vec![0.0; 4], vec![0.0; 4], 0.0).is_err());
        assert!(FieldState::new(p, vec![0.0; 16], vec![0.0; 8], 0.0).is_err());
        let s = FieldState::from_fn(p, 16, |_| 0.0, |_| 0.0).unwrap();
        let limit = 0.5 / 16.0;
        assert!(matches!(step_conservative(&s, limit), Err(Error::Unstable { .. })));
        assert!(step_conservative(&s, 0.9 * limit).is_ok());
    }

    #[test]
    fn standing_wave_is_exact() {
        let p = params(0.0, 2.0 * PI);
        let solver = StringSolver::new(p, 64).unwrap();
        let mut s = FieldState::from_fn(p, 64, f64::sin, |_| 0.0).unwrap();
        let steps = 1000;
        let dt = 2.0 * PI / steps as f64;
        for _ in 0..steps {
            s = solver.step_conservative(&s, dt).unwrap();
        }
        for j in 0..64 {
            let x = s.x(j);
            assert!((s.y[j] - x.sin() * s.t.cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn traveling_wave_translates() {
        let p = params(0.0, 2.0 * PI);
        let f = |x: f64| (2.0 * x).cos() + 0.3 * (3.0 * x).sin();
        let fp = |x: f64| -2.0 * (2.0 * x).sin() + 0.9 * (3.0 * x).cos();
        let mut s = FieldState::from_fn(p, 32, f, |x| -fp(x)).unwrap();
        let solver = StringSolver::for_state(&s).unwrap();
        for _ in 0..100 {
            s = solver.step_conservative(&s, 0.01).unwrap();
        }
        for j in 0..32 {
            assert!((s.y[j] - f(s.x(j) - s.t)).abs() < 1e-12);
        }
    }

    #[test]
    fn cubic_force_matches_coefficient_convolution() {
        // y_x = sum of five modes; y_x^3 computed by explicit convolution of
        // Fourier coefficients, truncated to the grid.
        let g = 32;
        let p = params(0.7, 2.0 * PI);
        let solver = StringSolver::new(p, g).unwrap();
        let coeffs: [(i64, Complex64); 5] = [
            (1, Complex64::new(0.3, -0.1)),
            (2, Complex64::new(-0.2, 0.25)),
            (5, Complex64::new(0.05, 0.1)),
            (9, Complex64::new(0.1, 0.0)),
            (15, Complex64::new(-0.04, 0.07)),
        ];
        let mut yhat = std::collections::BTreeMap::new();
        for (n, c) in coeffs {
            yhat.insert(n, c);
            yhat.insert(-n, c.conj());
        }
        let y: Vec<f64> = (0..g)
            .map(|j| {
                let x = 2.0 * PI * j as f64 / g as f64;
                yhat.iter()
                    .map(|(&n, c)| (c * Complex64::from_polar(1.0, n as f64 * x)).re)
                    .sum()
            })
            .collect();
        let yx: Vec<(i64, Complex64)> = yhat
            .iter()
            .map(|(&n, &c)| (n, c * Complex64::new(0.0, n as f64)))
            .collect();
        let mut cube = std::collections::BTreeMap::<i64, Complex64>::new();
        for &(a, ca) in &yx {
            for &(b, cb) in &yx {
                for &(c, cc) in &yx {
                    *cube.entry(a + b + c).or_default() += ca * cb * cc;
                }
            }
        }
        let force = solver.cubic_force_hat(&y);
        for (i, f) in force.iter().enumerate() {
            let n = if i <= g / 2 { i as i64 } else { i as i64 - g as i64 };
            let expected = if n.abs() >= (g / 2) as i64 {
                Complex64::new(0.0, 0.0)
            } else {
                cube.get(&n).copied().unwrap_or_default() * Complex64::new(0.0, n as f64) * (0.7 / 6.0)
            };
            assert!((f - expected).norm() < 1e-12, "mode {n}: {f} vs {expected}");
        }
    }
}
