#![allow(dead_code)]

use std::f64::consts::PI;

use nlstring::fock::{build_hamiltonian, diagonalize, FockBasis, FockState};
use nlstring::perturb::evolve_first_order_detuned;
use nlstring::{Complex64, StringParams};

/// Spontaneous emission rate of phonon `m` from an explicit photon mode sum
/// in a periodic box of side `box_side`.
///
/// With box normalization the matrix element into photon `(k, r)` is
/// `sigma sqrt(w_k / (2 B^3)) eps^2 / sqrt(2 L |w_m|) * integral_0^L e^{i(k_m - k1) x} dx`
/// and the rate is `2 pi sum |V|^2 delta(w_k - |w_m|)`, with the delta
/// replaced by a fourth-order Gaussian of width `eta`. The polarization sum
/// uses `sum_r (eps_r^2)^2 = 1 - (k2 / |k|)^2`.
pub fn box_emission_rate(m: i32, p: &StringParams, box_side: f64, eta: f64) -> f64 {
    let wm = p.phonon_energy(m);
    let km = p.wavenumber(m);
    let l = p.length;
    let dk = 2.0 * PI / box_side;
    let kmax = wm + 7.0 * eta;
    let nmax = (kmax / dk).ceil() as i64;
    let mut total = 0.0;
    for a in -nmax..=nmax {
        let k1 = a as f64 * dk;
        let delta = k1 - km;
        let overlap_sq = if delta.abs() < 1e-12 {
            l * l
        } else {
            4.0 * (0.5 * delta * l).sin().powi(2) / (delta * delta)
        };
        for b in -nmax..=nmax {
            let k2 = b as f64 * dk;
            for c in -nmax..=nmax {
                let k3 = c as f64 * dk;
                let w = (k1 * k1 + k2 * k2 + k3 * k3).sqrt();
                let x = (w - wm) / eta;
                if x.abs() > 7.0 || w == 0.0 {
                    continue;
                }
                let kernel = (3.0 - x * x) / 2.0 * (-0.5 * x * x).exp() / ((2.0 * PI).sqrt() * eta);
                let pol = 1.0 - (k2 / w).powi(2);
                let v_sq = p.sigma * p.sigma * w / (2.0 * box_side.powi(3)) / (2.0 * l * wm) * pol * overlap_sq;
                total += 2.0 * PI * v_sq * kernel;
            }
        }
    }
    total
}

/// First-order probability into `final_state`, averaged over a continuum of
/// artificial detunings in `[-window, window]` with unit density.
pub fn detuning_integrated_probability(
    initial: &FockState,
    final_state: &FockState,
    t: f64,
    basis: &FockBasis,
    p: &StringParams,
    window: f64,
    samples: usize,
) -> f64 {
    // Composite Simpson over the detuning.
    let n = samples + samples % 2;
    let h = 2.0 * window / n as f64;
    (0..=n)
        .map(|i| {
            let d = -window + i as f64 * h;
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let prob = evolve_first_order_detuned(initial, t, basis, p, d)
                .unwrap()
                .into_iter()
                .find(|r| &r.final_state == final_state)
                .map_or(0.0, |r| r.probability());
            w * prob
        })
        .sum::<f64>()
        * h
        / 3.0
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// `exp(i H1 t) exp(-i H t) psi0` on `basis`.
pub fn exact_interaction_picture(basis: &FockBasis, p: &StringParams, initial: &FockState, t: f64) -> Vec<Complex64> {
    let h = build_hamiltonian(basis, p).unwrap();
    let spectrum = diagonalize(&h).unwrap();
    let psi = spectrum.evolve(&basis.unit_vector(initial).unwrap(), t).unwrap();
    basis
        .states()
        .iter()
        .zip(psi)
        .map(|(s, a)| a * Complex64::from_polar(1.0, s.free_energy(p) * t))
        .collect()
}

/// Lowest-order slopes `dE/dgamma` of every eigenvalue from exact
/// diagonalization at `+-h`, grouped by the unperturbed energy.
///
/// Within a degenerate level the eigenvalues at `+h` ascend in the same
/// order as those at `-h` descend, so pairs are matched in reverse.
pub fn exact_slopes(basis: &FockBasis, p: &StringParams, h: f64) -> Vec<(f64, Vec<f64>)> {
    let plus = diagonalize(&build_hamiltonian(basis, &p.with_gamma(h)).unwrap()).unwrap().values;
    let minus = diagonalize(&build_hamiltonian(basis, &p.with_gamma(-h)).unwrap()).unwrap().values;
    let mut free: Vec<f64> = basis.states().iter().map(|s| s.free_energy(p)).collect();
    free.sort_by(f64::total_cmp);
    let mut out: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut start = 0;
    while start < free.len() {
        let e0 = free[start];
        let mut end = start;
        while end < free.len() && (free[end] - e0).abs() <= 1e-9 * e0.max(1.0) {
            end += 1;
        }
        let d = end - start;
        let slopes = (0..d)
            .map(|i| (plus[start + i] - minus[start + d - 1 - i]) / (2.0 * h))
            .collect();
        out.push((e0, slopes));
        start = end;
    }
    out
}
