//! Mode frequencies and quartic couplings for a short string.

use nlstring::modes::{coupling_l, coupling_m, omega};
use nlstring::StringParams;

fn main() -> nlstring::Result<()> {
    let p = StringParams::new(1.0, 1.0, 1.0, 0.0)?;

    println!("{:>3} {:>12} {:>12}", "n", "k_n", "omega_n");
    for n in -3..=3 {
        println!("{n:>3} {:>12.6} {:>12.6}", p.wavenumber(n), omega(n, &p));
    }

    println!("\n{:>12} {:>16} {:>16}", "(n,s,t)", "M_nst", "L_st (j=n+s+t)");
    for (n, s, t) in [(1, 1, 1), (1, 2, -1), (2, 2, -3), (1, -1, 3)] {
        let j = n + s + t;
        println!(
            "{:>12} {:>16.6} {:>16.6}",
            format!("({n},{s},{t})"),
            coupling_m(n, s, t, &p),
            coupling_l(s, t, j, &p)
        );
    }
    Ok(())
}
