use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use super::amplitude::{amp_single_emission, PhotonSpec};
use crate::modes::{require_nonzero, ModeIndex, StringParams};
use crate::{Error, Result};

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending, by the
/// Golub–Welsch eigenvalue method.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = k as f64 / ((4 * k * k - 1) as f64).sqrt();
        jacobi[(k - 1, k)] = b;
        jacobi[(k, k - 1)] = b;
    }
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| (eig.eigenvalues[i], 2.0 * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    // Symmetrize to remove eigen-solver noise.
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = 0.5 * (pairs[j].0 - pairs[i].0);
        let w = 0.5 * (pairs[i].1 + pairs[j].1);
        pairs[i] = (-x, w);
        pairs[j] = (x, w);
    }
    if n % 2 == 1 {
        pairs[n / 2].0 = 0.0;
    }
    pairs.into_iter().unzip()
}

/// One direction and polarization of the emitted photon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularSample {
    /// Polar angle from the string axis `x^1`.
    pub theta: f64,
    /// Azimuth about `x^1`, measured from `x^2` toward `x^3`.
    pub phi: f64,
    pub polarization: u8,
    pub d_rate_d_omega: f64,
    /// Quadrature weight in solid angle.
    pub weight: f64,
}

/// Differential emission rate `dGamma/dOmega` for a single phonon in mode
/// `m`, sampled on a `resolution x resolution` product grid (Gauss–Legendre
/// in `cos theta`, uniform in `phi`) for both polarizations.
///
/// `dGamma/dOmega = (omega_m^2 / 2 pi) |A|^2` with `A` the reduced emission
/// amplitude on shell.
pub fn angular_distribution(m: ModeIndex, p: &StringParams, resolution: usize) -> Result<Vec<AngularSample>> {
    require_nonzero(m)?;
    if resolution == 0 {
        return Err(Error::InvalidParams("angular resolution must be at least 1".into()));
    }
    let wm = p.phonon_energy(m);
    let (nodes, weights) = gauss_legendre(resolution);
    let dphi = 2.0 * PI / resolution as f64;
    let rows: Result<Vec<Vec<AngularSample>>> = nodes
        .par_iter()
        .zip(weights.par_iter())
        .map(|(&c, &w)| {
            let theta = c.clamp(-1.0, 1.0).acos();
            let mut out = Vec::with_capacity(2 * resolution);
            for k in 0..resolution {
                let phi = k as f64 * dphi;
                for r in [1u8, 2] {
                    let photon = PhotonSpec::from_angles(wm, theta, phi, r)?;
                    let a = amp_single_emission(m, &photon, p)?.value;
                    out.push(AngularSample {
                        theta,
                        phi,
                        polarization: r,
                        d_rate_d_omega: wm * wm / (2.0 * PI) * a.norm_sqr(),
                        weight: w * dphi,
                    });
                }
            }
            Ok(out)
        })
        .collect();
    Ok(rows?.into_iter().flatten().collect())
}

/// Golden-rule rate for spontaneous emission from a single phonon in mode `m`.
pub fn emission_rate(m: ModeIndex, p: &StringParams, resolution: usize) -> Result<f64> {
    Ok(angular_distribution(m, p, resolution)?
        .iter()
        .map(|s| s.weight * s.d_rate_d_omega)
        .sum())
}
