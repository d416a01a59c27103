//! Radiation reaction and external drive.
//!
//! The self-field on the string at `x` is the kernel series
//!
//! ```text
//! E_RR(x) = (sigma/pi) sum_m (m+1) / ((2m)! (2m+1) (2m+3))
//!           * integral_0^L (x - z)^{2m} d^{2m+3}y/dt^{2m+3}(z) dz
//! ```
//!
//! truncated at `m = M_max`, and the string obeys
//! `y_tt = v^2 y_xx + (gamma/2) y_x^2 y_xx + sigma E_RR + sigma E0^2(x, t)`.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::field::{FieldState, StringSolver};
use crate::{Error, Result};

/// Largest supported kernel order.
pub const MAX_KERNEL_ORDER: usize = 6;

/// External field `E0^2(x, t)` driving the string.
pub trait Drive: Send + Sync + fmt::Debug {
    fn value(&self, x: f64, t: f64) -> f64;

    /// `d^order/dt^order` of [`Drive::value`].
    fn time_derivative(&self, x: f64, t: f64, order: u32) -> f64;

    fn is_zero(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantDrive(pub f64);

impl Drive for ConstantDrive {
    fn value(&self, _x: f64, _t: f64) -> f64 {
        self.0
    }

    fn time_derivative(&self, x: f64, t: f64, order: u32) -> f64 {
        if order == 0 {
            self.value(x, t)
        } else {
            0.0
        }
    }

    fn is_zero(&self) -> bool {
        self.0 == 0.0
    }
}

/// Spatially uniform `A cos(W t + phase)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformHarmonic {
    pub amplitude: f64,
    pub frequency: f64,
    pub phase: f64,
}

impl Drive for UniformHarmonic {
    fn value(&self, _x: f64, t: f64) -> f64 {
        self.amplitude * (self.frequency * t + self.phase).cos()
    }

    fn time_derivative(&self, _x: f64, t: f64, order: u32) -> f64 {
        let shift = f64::from(order) * std::f64::consts::FRAC_PI_2;
        self.amplitude * self.frequency.powi(order as i32) * (self.frequency * t + self.phase + shift).cos()
    }

    fn is_zero(&self) -> bool {
        self.amplitude == 0.0
    }
}

/// Drive given by a closure; time derivatives by central differences.
#[derive(Clone)]
pub struct FnDrive {
    f: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
}

impl FnDrive {
    pub fn new(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        FnDrive { f: Arc::new(f) }
    }
}

impl fmt::Debug for FnDrive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("FnDrive")
    }
}

impl Drive for FnDrive {
    fn value(&self, x: f64, t: f64) -> f64 {
        (self.f)(x, t)
    }

    fn time_derivative(&self, x: f64, t: f64, order: u32) -> f64 {
        if order == 0 {
            return self.value(x, t);
        }
        let half = order as usize / 2 + 1;
        let h = f64::EPSILON.powf(1.0 / (f64::from(order) + 2.0)) * t.abs().max(1.0);
        let nodes: Vec<f64> = (0..=2 * half).map(|i| i as f64 - half as f64).collect();
        let w = fornberg_weights(0.0, &nodes, order as usize);
        nodes
            .iter()
            .zip(&w[order as usize])
            .map(|(&s, &c)| c * self.value(x, t + s * h))
            .sum::<f64>()
            / h.powi(order as i32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Reduction {
    /// Replace time derivatives of `y` beyond the second by derivatives of
    /// the conservative acceleration. Removes runaway solutions.
    #[default]
    OrderReduced,
    /// Finite differences of the stored `y` history. Experimental: admits
    /// runaway growth.
    Off,
}

impl std::str::FromStr for Reduction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "order-reduced" | "reduced" => Ok(Reduction::OrderReduced),
            "off" | "none" => Ok(Reduction::Off),
            other => Err(Error::Parse {
                what: "classical.reduction".into(),
                message: format!("expected order-reduced or off, got '{other}'"),
            }),
        }
    }
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reduction::OrderReduced => "order-reduced",
            Reduction::Off => "off",
        })
    }
}

#[derive(Debug, Clone)]
pub struct RRConfig {
    order: usize,
    pub drive: Arc<dyn Drive>,
    pub reduction: Reduction,
}

impl Default for RRConfig {
    fn default() -> Self {
        RRConfig {
            order: 0,
            drive: Arc::new(ConstantDrive(0.0)),
            reduction: Reduction::OrderReduced,
        }
    }
}

impl RRConfig {
    pub fn new(order: usize) -> Result<Self> {
        if order > MAX_KERNEL_ORDER {
            return Err(Error::KernelOrder(order));
        }
        Ok(RRConfig {
            order,
            ..Default::default()
        })
    }

    pub fn with_drive(mut self, drive: impl Drive + 'static) -> Self {
        self.drive = Arc::new(drive);
        self
    }

    pub fn with_reduction(mut self, reduction: Reduction) -> Self {
        self.reduction = reduction;
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Samples required to differentiate `order`-th kernel term in time.
    pub fn min_history(&self) -> usize {
        2 * self.order + 4
    }

    /// Samples kept by [`RrStepper`].
    pub fn history_len(&self) -> usize {
        2 * self.order + 5
    }
}

/// Kernel coefficient `(m+1) / ((2m)! (2m+1) (2m+3))`.
pub fn kernel_coefficient(m: usize) -> f64 {
    let fact: f64 = (1..=2 * m).map(|i| i as f64).product();
    (m + 1) as f64 / (fact * (2 * m + 1) as f64 * (2 * m + 3) as f64)
}

/// Finite-difference weights at `x0` for derivatives up to `max_order`
/// on arbitrary nodes; `w[k][j]` multiplies `f(nodes[j])` for order `k`.
pub fn fornberg_weights(x0: f64, nodes: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; max_order + 1];
    if n == 0 {
        return c;
    }
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// `integral_0^L (x - z)^p e^{i k z} dz` for `p = 0..=pmax`, with `k` a
/// multiple of `2 pi / L`.
fn power_moments(k: f64, x: f64, length: f64, pmax: usize) -> Vec<Complex64> {
    if k == 0.0 {
        return (0..=pmax)
            .map(|p| {
                if p == 0 {
                    Complex64::new(length, 0.0)
                } else {
                    let q = (p + 1) as i32;
                    Complex64::new((x.powi(q) - (x - length).powi(q)) / q as f64, 0.0)
                }
            })
            .collect();
    }
    let ik = Complex64::new(0.0, k);
    let mut out = Vec::with_capacity(pmax + 1);
    out.push(Complex64::new(0.0, 0.0));
    for p in 1..=pmax {
        let boundary = ((x - length).powi(p as i32) - x.powi(p as i32)) / ik;
        let prev = out[p - 1];
        out.push(boundary + prev * (p as f64) / ik);
    }
    out
}

/// Per-term kernel values at each `x`, given Fourier coefficients of the
/// time-derivative fields `d^{2m+3}y/dt^{2m+3}`, `m = 0..derivs.len()`.
/// `None` entries contribute zero.
fn kernel_terms(
    solver: &StringSolver,
    derivs: &[Option<Vec<Complex64>>],
    xs: &[f64],
) -> Vec<Vec<f64>> {
    let s = solver.spectral();
    let length = s.length();
    let sigma = solver.params().sigma;
    let pmax = 2 * derivs.len().saturating_sub(1);
    let k = s.wavenumbers();
    let nyquist = s.size() / 2;
    xs.iter()
        .map(|&x| {
            let moments: Vec<Vec<Complex64>> = k
                .iter()
                .enumerate()
                .map(|(i, &k)| {
                    if i == nyquist {
                        Vec::new()
                    } else {
                        power_moments(k, x, length, pmax)
                    }
                })
                .collect();
            derivs
                .iter()
                .enumerate()
                .map(|(m, d)| {
                    let Some(d) = d else { return 0.0 };
                    let integral: Complex64 = d
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != nyquist)
                        .map(|(i, c)| c * moments[i][2 * m])
                        .sum();
                    sigma / std::f64::consts::PI * kernel_coefficient(m) * integral.re
                })
                .collect()
        })
        .collect()
}

fn check_history(history: &[FieldState]) -> Result<f64> {
    let first = history.first().ok_or(Error::InsufficientHistory { have: 0, need: 1 })?;
    if history.len() < 2 {
        return Ok(0.0);
    }
    let dt = history[1].t - history[0].t;
    for w in history.windows(2) {
        if w[1].grid_size() != first.grid_size() || w[1].params != first.params {
            return Err(Error::InvalidField("history mixes grids or parameters".into()));
        }
        let step = w[1].t - w[0].t;
        if !(dt > 0.0) || (step - dt).abs() > 1e-9 * dt {
            return Err(Error::InvalidField("history time steps are not uniform".into()));
        }
    }
    Ok(dt)
}

/// Coefficients of `d^order y / dt^order` at the newest history sample,
/// from a backward stencil over the last `min(len, needed)` samples.
fn history_derivative(solver: &StringSolver, history: &[FieldState], dt: f64, order: usize) -> Option<Vec<Complex64>> {
    let n = order + 2;
    if history.len() < order + 1 {
        return None;
    }
    let window = &history[history.len().saturating_sub(n)..];
    let nodes: Vec<f64> = (0..window.len()).map(|i| i as f64).collect();
    let w = fornberg_weights((window.len() - 1) as f64, &nodes, order);
    let g = window[0].grid_size();
    let scale = dt.powi(order as i32);
    let samples: Vec<f64> = (0..g)
        .map(|j| {
            window
                .iter()
                .zip(&w[order])
                .map(|(s, c)| c * s.y[j])
                .sum::<f64>()
                / scale
        })
        .collect();
    Some(solver.spectral().forward(&samples))
}

/// Kernel series terms `m = 0..=M_max` at position `x`, using the newest
/// history sample as the evaluation time. Time derivatives come from
/// finite differences on the stored `y` samples (oldest first, uniform
/// spacing).
pub fn rr_field_terms(history: &[FieldState], x: f64, config: &RRConfig) -> Result<Vec<f64>> {
    let need = config.min_history();
    if history.len() < need {
        return Err(Error::InsufficientHistory {
            have: history.len(),
            need,
        });
    }
    let dt = check_history(history)?;
    let solver = StringSolver::for_state(&history[0])?;
    let derivs: Vec<Option<Vec<Complex64>>> = (0..=config.order)
        .map(|m| history_derivative(&solver, history, dt, 2 * m + 3))
        .collect();
    Ok(kernel_terms(&solver, &derivs, &[x]).remove(0))
}

/// Truncated self-field `E_RR(x)` at the newest history sample.
pub fn rr_field(history: &[FieldState], x: f64, config: &RRConfig) -> Result<f64> {
    Ok(rr_field_terms(history, x, config)?.iter().sum())
}

/// Integrator for the driven equation with radiation reaction.
///
/// Same Strang splitting as [`StringSolver::step_conservative`], with the
/// self-field and drive added to both half kicks. In the order-reduced mode
/// the self-field at the closing half kick uses a predicted velocity.
#[derive(Debug)]
pub struct RrStepper {
    solver: StringSolver,
    config: RRConfig,
    history: VecDeque<FieldState>,
}

impl RrStepper {
    pub fn new(solver: StringSolver, config: RRConfig) -> Self {
        RrStepper {
            solver,
            config,
            history: VecDeque::new(),
        }
    }

    pub fn for_state(state: &FieldState, config: RRConfig) -> Result<Self> {
        Ok(Self::new(StringSolver::for_state(state)?, config))
    }

    pub fn solver(&self) -> &StringSolver {
        &self.solver
    }

    pub fn config(&self) -> &RRConfig {
        &self.config
    }

    fn drive_samples(&self, t: f64, order: u32, g: usize) -> Vec<f64> {
        let dx = self.solver.params().length / g as f64;
        (0..g)
            .map(|j| self.config.drive.time_derivative(j as f64 * dx, t, order))
            .collect()
    }

    /// `d^{2m+3}y/dt^{2m+3}` coefficients from the equation of motion:
    /// `D_3 = d/dx (v^2 ydot_x + (gamma/2) y_x^2 ydot_x) + sigma dE0^2/dt` and
    /// `D_{2m+5} = v^2 D_{2m+3,xx} + sigma d^{2m+3}E0^2/dt^{2m+3}`.
    fn reduced_derivatives(&self, y: &[f64], ydot: &[f64], t: f64) -> Vec<Option<Vec<Complex64>>> {
        let s = self.solver.spectral();
        let p = self.solver.params();
        let v2 = p.speed * p.speed;
        let ydot_x = s.differentiate(&s.forward(ydot), 1);
        let mut flux: Vec<Complex64> = ydot_x.iter().map(|c| c * v2).collect();
        if p.gamma != 0.0 {
            let yx = s.padded_samples(&s.differentiate(&s.forward(y), 1));
            let vx = s.padded_samples(&ydot_x);
            let prod: Vec<f64> = yx.iter().zip(&vx).map(|(a, b)| 0.5 * p.gamma * a * a * b).collect();
            for (f, c) in flux.iter_mut().zip(s.truncate_padded(&prod)) {
                *f += c;
            }
        }
        let mut current = s.differentiate(&flux, 1);
        let mut out = Vec::with_capacity(self.config.order + 1);
        for m in 0..=self.config.order {
            if m > 0 {
                current = s.differentiate(&current, 2).into_iter().map(|c| c * v2).collect();
            }
            if !self.config.drive.is_zero() {
                let d = s.forward(&self.drive_samples(t, (2 * m + 1) as u32, y.len()));
                for (c, e) in current.iter_mut().zip(d) {
                    *c += e * p.sigma;
                }
            }
            out.push(Some(current.clone()));
        }
        out
    }

    /// Radiation-reaction force `sigma E_RR(x_j)` at every grid point.
    ///
    /// In the literal mode, kernel terms without enough history are zero.
    pub fn rr_force(&self, y: &[f64], ydot: &[f64], t: f64) -> Vec<f64> {
        let g = y.len();
        let p = self.solver.params();
        let derivs = match self.config.reduction {
            Reduction::OrderReduced => self.reduced_derivatives(y, ydot, t),
            Reduction::Off => {
                let history: Vec<FieldState> = self.history.iter().cloned().collect();
                let dt = if history.len() >= 2 {
                    history[1].t - history[0].t
                } else {
                    0.0
                };
                (0..=self.config.order)
                    .map(|m| {
                        let order = 2 * m + 3;
                        if history.len() < order + 1 {
                            None
                        } else {
                            history_derivative(&self.solver, &history, dt, order)
                        }
                    })
                    .collect()
            }
        };
        if derivs.iter().all(Option::is_none) {
            return vec![0.0; g];
        }
        let xs: Vec<f64> = (0..g).map(|j| j as f64 * p.length / g as f64).collect();
        kernel_terms(&self.solver, &derivs, &xs)
            .into_iter()
            .map(|terms| p.sigma * terms.iter().sum::<f64>())
            .collect()
    }

    fn external_force(&self, y: &[f64], ydot: &[f64], t: f64) -> Vec<f64> {
        let p = self.solver.params();
        let mut f = self.solver.cubic_force(y);
        if p.sigma == 0.0 {
            return f;
        }
        if !self.config.drive.is_zero() {
            for (fi, d) in f.iter_mut().zip(self.drive_samples(t, 0, y.len())) {
                *fi += p.sigma * d;
            }
        }
        for (fi, r) in f.iter_mut().zip(self.rr_force(y, ydot, t)) {
            *fi += r;
        }
        f
    }

    fn push_history(&mut self, state: &FieldState) {
        if self.history.back().is_some_and(|s| s.t == state.t) {
            return;
        }
        self.history.push_back(state.clone());
        while self.history.len() > self.config.history_len() {
            self.history.pop_front();
        }
    }

    pub fn step(&mut self, state: &FieldState, dt: f64) -> Result<FieldState> {
        self.solver.check(state, dt)?;
        if self.solver.params().sigma == 0.0 {
            return self.solver.step_conservative(state, dt);
        }
        if let Some(last) = self.history.back() {
            let spacing = state.t - last.t;
            if spacing != 0.0 && (spacing - dt).abs() > 1e-9 * dt {
                self.history.clear();
            }
        }
        self.push_history(state);
        let half = 0.5 * dt;
        let mut y = state.y.clone();
        let mut ydot = state.ydot.clone();
        let kick = self.external_force(&y, &ydot, state.t);
        for (v, f) in ydot.iter_mut().zip(kick) {
            *v += half * f;
        }
        self.solver.drift(&mut y, &mut ydot, dt);
        let t1 = state.t + dt;
        let probe = match self.config.reduction {
            Reduction::OrderReduced => {
                let mut guess = ydot.clone();
                let mut f = self.solver.cubic_force(&y);
                if !self.config.drive.is_zero() {
                    for (fi, d) in f.iter_mut().zip(self.drive_samples(t1, 0, y.len())) {
                        *fi += self.solver.params().sigma * d;
                    }
                }
                for (v, fi) in guess.iter_mut().zip(f) {
                    *v += half * fi;
                }
                guess
            }
            Reduction::Off => {
                self.push_history(&FieldState {
                    y: y.clone(),
                    ydot: ydot.clone(),
                    t: t1,
                    params: state.params,
                });
                ydot.clone()
            }
        };
        let kick = self.external_force(&y, &probe, t1);
        for (v, f) in ydot.iter_mut().zip(kick) {
            *v += half * f;
        }
        let next = FieldState {
            y,
            ydot,
            t: t1,
            params: state.params,
        };
        if self.config.reduction == Reduction::Off {
            self.history.pop_back();
            self.push_history(&next);
        }
        super::field::finite(next)
    }
}

/// One step of the driven equation with radiation reaction from a fresh
/// stepper; in the literal mode this has no history, so only the drive acts.
pub fn step_with_rr(state: &FieldState, dt: f64, config: &RRConfig) -> Result<FieldState> {
    RrStepper::for_state(state, config.clone())?.step(state, dt)
}
