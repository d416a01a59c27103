use nalgebra::Vector3;
use num_complex::Complex64;

use crate::modes::{require_nonzero, ModeIndex, StringParams};
use crate::{Error, Result};

/// Relative tolerance for on-shell predicates.
pub const ON_SHELL_TOL: f64 = 1e-9;

/// Offsets `|q^1 - k| < GEOMETRIC_GUARD / L` use the analytic limit.
const GEOMETRIC_GUARD: f64 = 1e-8;

pub(crate) fn on_shell(a: f64, b: f64) -> bool {
    (a - b).abs() < ON_SHELL_TOL * a.abs().max(b.abs())
}

/// Transverse polarization pair for direction `q`.
///
/// `e1` is along `z x q` (or `x` when `q` is along `z`) and `e2 = q_hat x e1`,
/// so `(e1, e2, q_hat)` is right-handed.
pub fn polarization_basis(q: &Vector3<f64>) -> Result<(Vector3<f64>, Vector3<f64>)> {
    let norm = q.norm();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::ZeroWavevector);
    }
    let qhat = q / norm;
    let zcross = Vector3::z().cross(&qhat);
    let e1 = if zcross.norm() < 1e-12 {
        Vector3::x()
    } else {
        zcross.normalize()
    };
    let e2 = qhat.cross(&e1);
    Ok((e1, e2))
}

/// A photon of wavevector `q` in transverse polarization `r` (1 or 2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonSpec {
    pub q: Vector3<f64>,
    pub polarization: u8,
    e1: Vector3<f64>,
    e2: Vector3<f64>,
}

impl PhotonSpec {
    pub fn new(q: Vector3<f64>, polarization: u8) -> Result<Self> {
        if !(1..=2).contains(&polarization) {
            return Err(Error::InvalidPolarization(polarization));
        }
        let (e1, e2) = polarization_basis(&q)?;
        Ok(PhotonSpec {
            q,
            polarization,
            e1,
            e2,
        })
    }

    /// Photon of frequency `omega` travelling along the unit direction
    /// given by polar angle `theta` from `x^1` and azimuth `phi` from `x^2`.
    pub fn from_angles(omega: f64, theta: f64, phi: f64, polarization: u8) -> Result<Self> {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self::new(Vector3::new(ct, st * cp, st * sp) * omega, polarization)
    }

    pub fn omega(&self) -> f64 {
        self.q.norm()
    }

    pub fn basis(&self) -> (Vector3<f64>, Vector3<f64>) {
        (self.e1, self.e2)
    }

    pub fn epsilon(&self) -> Vector3<f64> {
        if self.polarization == 1 {
            self.e1
        } else {
            self.e2
        }
    }

    /// Cartesian component of the polarization vector; `axis` is 1-based.
    pub fn epsilon_component(&self, axis: usize) -> f64 {
        self.epsilon()[axis - 1]
    }
}

/// `(e^{-i q1 L} - 1) / (k - q1)` evaluated directly, for `k` a string
/// wavenumber (so `e^{-i k L} = 1`). Loses precision near `q1 = k`.
pub fn geometric_factor_raw(q1: f64, k: f64, length: f64) -> Complex64 {
    (Complex64::new(0.0, -q1 * length).exp() - 1.0) / (k - q1)
}

/// `(e^{-i q1 L} - 1) / (k - q1)` for `k = 2 pi m / L`, with the removable
/// singularity at `q1 = k` replaced by its limit `iL`.
pub fn geometric_factor(q1: f64, k: f64, length: f64) -> Complex64 {
    let delta = q1 - k;
    if delta.abs() < GEOMETRIC_GUARD / length {
        return Complex64::new(0.0, length);
    }
    let half = 0.5 * delta * length;
    let numerator = Complex64::new(-2.0 * half.sin().powi(2), -(delta * length).sin());
    numerator / -delta
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitude {
    pub value: Complex64,
    pub on_shell: bool,
}

/// Reduced amplitude for `|m> (x) |0>_F -> |0> (x) |q, r>_F`.
pub fn amp_single_emission(m: ModeIndex, photon: &PhotonSpec, p: &StringParams) -> Result<Amplitude> {
    require_nonzero(m)?;
    let wq = photon.omega();
    let wm = p.phonon_energy(m);
    let scale = p.sigma * wq.sqrt() / (2.0 * (2.0 * std::f64::consts::PI * p.length * wm).sqrt());
    let geo = geometric_factor(photon.q.x, p.wavenumber(m), p.length);
    let value = Complex64::new(0.0, -scale) * photon.epsilon_component(2) * geo;
    Ok(Amplitude {
        value,
        on_shell: on_shell(wq, wm),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterAmplitude {
    pub value: Complex64,
    /// `omega_out = |omega_m|`.
    pub outgoing_on_shell: bool,
    /// `omega_in = |omega_n|`.
    pub incoming_on_shell: bool,
}

/// Reduced amplitude for `|m> (x) |p_in> -> |n> (x) |q_out>`.
pub fn amp_scatter(
    m: ModeIndex,
    n: ModeIndex,
    incoming: &PhotonSpec,
    outgoing: &PhotonSpec,
    p: &StringParams,
) -> Result<ScatterAmplitude> {
    require_nonzero(m)?;
    require_nonzero(n)?;
    let (wp, wq) = (incoming.omega(), outgoing.omega());
    let (wm, wn) = (p.phonon_energy(m), p.phonon_energy(n));
    let scale = -p.sigma * p.sigma * (wq * wp).sqrt()
        / (16.0 * std::f64::consts::PI * p.length * (wm * wn).sqrt());
    let out_geo = geometric_factor(outgoing.q.x, p.wavenumber(m), p.length);
    // (e^{i p1 L} - 1)/(k_n - p1) is the conjugate of the emission factor.
    let in_geo = geometric_factor(incoming.q.x, p.wavenumber(n), p.length).conj();
    let pol = incoming.epsilon_component(2) * outgoing.epsilon_component(2);
    Ok(ScatterAmplitude {
        value: out_geo * in_geo * (scale * pol),
        outgoing_on_shell: on_shell(wq, wm),
        incoming_on_shell: on_shell(wp, wn),
    })
}
