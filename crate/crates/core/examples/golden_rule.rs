//! One phonon decaying into three: the long-time rate allowed by momentum
//! and energy conservation for each final triple.

use nlstring::perturb::transition_rate_report;
use nlstring::StringParams;

fn main() -> nlstring::Result<()> {
    let p = StringParams::default().with_gamma(1e-2);
    println!("{:>3} {:>12} {:>14} {:>14}", "j", "(p,q,r)", "<pqr|H2|j>", "rate");
    for j in 3..=6 {
        for a in 1..=j {
            for b in a..=j {
                let c = j - a - b;
                if c < b {
                    continue;
                }
                let r = transition_rate_report(j, (a, b, c), &p)?;
                println!(
                    "{j:>3} {:>12} {:>14.6e} {:>14.6e}",
                    format!("({a},{b},{c})"),
                    r.matrix_element,
                    r.rate
                );
            }
        }
    }

    let forbidden = transition_rate_report(3, (-1, 2, 2), &p)?;
    println!("\nmixed signs (-1,2,2) from j=3: resonant = {}, rate = {}", forbidden.resonant, forbidden.rate);
    Ok(())
}
