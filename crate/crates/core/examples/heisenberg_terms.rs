//! First-order Heisenberg solution for one mode: the eight trilinear terms
//! of a single (s, j) pair, and the resonant ones that had to be set aside.

use nlstring::perturb::{heisenberg_coefficient, heisenberg_terms, TermSelector};
use nlstring::StringParams;

fn main() -> nlstring::Result<()> {
    let p = StringParams::default().with_gamma(0.1);
    let (n, s, j) = (2, 1, 3);

    println!("terms for n={n}, s={s}, j={j}:");
    println!("{:>3} {:>12} {:>12} {:>8} {:>9}", "#", "frequency", "denominator", "secular", "momentum");
    for term in heisenberg_terms(n, s, j, &p)? {
        println!(
            "{:>3} {:>12.6} {:>12.4e} {:>8} {:>9}",
            term.index, term.frequency, term.denominator, term.secular, term.conserves_momentum
        );
    }

    let table = heisenberg_coefficient(n, TermSelector::Cutoff(3), 0.5, &p)?;
    println!(
        "\ncutoff 3 at t = 0.5: {} regular terms, {} secular",
        table.terms.len(),
        table.secular.len()
    );
    println!("E_n has {} operator products, F_n has {}", table.e_n.terms.len(), table.f_n.terms.len());
    Ok(())
}
