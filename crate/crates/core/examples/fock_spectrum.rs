//! Lowest levels of the truncated quartic Hamiltonian and their first-order
//! shifts from degenerate perturbation theory.

use nlstring::fock::{build_hamiltonian, exact_eigs, FockBasis};
use nlstring::perturb::degenerate_first_order;
use nlstring::StringParams;

fn main() -> nlstring::Result<()> {
    let gamma = 1e-3;
    let p = StringParams::default().with_gamma(gamma);
    let basis = FockBasis::new(3, 3, Some(0))?;
    let h = build_hamiltonian(&basis, &p)?;
    println!("basis: cutoff 3, up to 3 phonons, zero momentum, {} states", basis.dim());

    let exact = exact_eigs(&h, 12)?;
    let mut predicted: Vec<f64> = degenerate_first_order(&basis, &p)
        .into_iter()
        .flat_map(|level| level.shifts.into_iter().map(move |s| level.energy + s))
        .collect();
    predicted.sort_by(f64::total_cmp);

    println!("{:>4} {:>18} {:>18} {:>10}", "i", "exact", "E0 + dE1", "diff");
    for (i, (e, q)) in exact.iter().zip(&predicted).enumerate() {
        println!("{i:>4} {:>18.12} {:>18.12} {:>10.2e}", e.value, q, e.value - q);
    }
    Ok(())
}
