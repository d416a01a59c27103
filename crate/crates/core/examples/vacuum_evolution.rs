//! First-order evolution of the string vacuum, checked against exact
//! propagation in the same truncated space.

use nlstring::fock::{build_hamiltonian, diagonalize, FockBasis, FockState};
use nlstring::perturb::{evolve_first_order, records_to_vector};
use nlstring::{Complex64, StringParams};

fn main() -> nlstring::Result<()> {
    let p = StringParams::default().with_gamma(1e-3);
    let basis = FockBasis::new(3, 4, Some(0))?;
    let vacuum = FockState::vacuum();
    let spectrum = diagonalize(&build_hamiltonian(&basis, &p)?)?;

    println!("{:>5} {:>14} {:>14}", "t", "1 - P(vacuum)", "max |da|");
    for t in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let records = evolve_first_order(&vacuum, t, &basis, &p)?;
        let first = records_to_vector(&records, &basis)?;
        let exact: Vec<Complex64> = spectrum
            .evolve(&basis.unit_vector(&vacuum)?, t)?
            .into_iter()
            .zip(basis.states())
            .map(|(a, s)| a * Complex64::from_polar(1.0, s.free_energy(&p) * t))
            .collect();
        let leaked: f64 = records
            .iter()
            .filter(|r| r.final_state != vacuum)
            .map(|r| r.probability())
            .sum();
        let err = first.iter().zip(&exact).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        println!("{t:>5} {leaked:>14.6e} {err:>14.3e}");
    }

    let records = evolve_first_order(&vacuum, 1.0, &basis, &p)?;
    println!("\nlargest first-order transitions at t = 1:");
    let mut top: Vec<_> = records.iter().filter(|r| r.final_state != vacuum).collect();
    top.sort_by(|a, b| b.probability().total_cmp(&a.probability()));
    for r in top.iter().take(5) {
        println!("  {} -> {}  P = {:.4e}", r.initial, r.final_state, r.probability());
    }
    Ok(())
}
