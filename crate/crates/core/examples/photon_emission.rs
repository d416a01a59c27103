//! Spontaneous photon emission by a single string phonon: angular
//! distribution and total rate.

use std::f64::consts::PI;

use nlstring::photon::{amp_single_emission, angular_distribution, emission_rate, PhotonSpec};
use nlstring::StringParams;

fn main() -> nlstring::Result<()> {
    let p = StringParams::default().with_sigma(1.0);
    let m = 1;
    let w = p.phonon_energy(m);

    println!("{:>8} {:>14} {:>14}", "theta", "|A| pol 1", "|A| pol 2");
    for i in 0..=8 {
        let theta = PI * i as f64 / 8.0;
        let a1 = amp_single_emission(m, &PhotonSpec::from_angles(w, theta, 0.0, 1)?, &p)?;
        let a2 = amp_single_emission(m, &PhotonSpec::from_angles(w, theta, 0.0, 2)?, &p)?;
        println!("{theta:>8.4} {:>14.6e} {:>14.6e}", a1.value.norm(), a2.value.norm());
    }

    let samples = angular_distribution(m, &p, 32)?;
    let peak = samples.iter().max_by(|a, b| a.d_rate_d_omega.total_cmp(&b.d_rate_d_omega)).unwrap();
    println!(
        "\npeak dGamma/dOmega = {:.6e} at theta = {:.4}, phi = {:.4}, pol {}",
        peak.d_rate_d_omega, peak.theta, peak.phi, peak.polarization
    );
    for res in [16, 32, 64] {
        println!("total rate (resolution {res:>2}) = {:.12e}", emission_rate(m, &p, res)?);
    }
    Ok(())
}
