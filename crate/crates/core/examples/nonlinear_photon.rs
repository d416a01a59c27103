//! Photon emission that needs the quartic term: three phonons go to two
//! plus a photon, and four phonons go to one plus a photon.

use nlstring::photon::{amp_nonlinear_absorb4, amp_nonlinear_emission, CouplingComponent, PhotonSpec};
use nlstring::StringParams;

fn main() -> nlstring::Result<()> {
    let p = StringParams::default().with_gamma(0.2).with_sigma(1.0);

    let photon = PhotonSpec::from_angles(p.phonon_energy(1), 1.1, 0.7, 2)?;
    for component in [CouplingComponent::E3, CouplingComponent::E2] {
        let amp = amp_nonlinear_emission([2, 1, 1], [2, 1], &photon, component, &p)?;
        println!("|2,1,1> -> |2,1> + photon, {component:?}: {:.6e}", amp.value);
        for t in &amp.terms {
            println!(
                "  term {} gate={} string_on_shell={} photon_on_shell={} emitter={} contribution={:.4e}",
                t.index, t.gate_open, t.string_on_shell, t.photon_on_shell, t.emitting_mode, t.contribution
            );
        }
    }

    let photon = PhotonSpec::from_angles(p.phonon_energy(1), 0.6, 2.0, 2)?;
    let amp = amp_nonlinear_absorb4([1, 1, 1, 1], 3, &photon, CouplingComponent::E3, &p)?;
    println!("\n|1,1,1,1> -> |3> + photon: {:.6e}", amp.value);
    for t in &amp.terms {
        println!("  term {} gate={} consistent={}", t.index, t.gate_open, t.gate_consistent);
    }
    Ok(())
}
