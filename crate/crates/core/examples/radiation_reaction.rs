//! A charged string driven by a uniform harmonic field, with the
//! order-reduced radiation-reaction force.
//!
//! Higher kernel orders weight mode `k` by roughly `(kL)^(2m)`, so they are
//! only usable on coarse grids; the literal (non-reduced) form runs away.

use std::f64::consts::PI;

use nlstring::classical::{kernel_coefficient, FieldState, RRConfig, Reduction, RrStepper, UniformHarmonic};
use nlstring::StringParams;

fn main() -> nlstring::Result<()> {
    println!("kernel coefficients (m+1)/((2m)!(2m+1)(2m+3)):");
    for m in 0..4 {
        println!("  m={m}: {:.6e}", kernel_coefficient(m));
    }

    let p = StringParams::new(2.0 * PI, 1.0, 0.05, 0.05)?;
    let drive = UniformHarmonic {
        amplitude: 1.0,
        frequency: 3.0,
        phase: 0.0,
    };
    let initial = FieldState::from_fn(p, 16, |x| 0.1 * x.sin(), |_| 0.0)?;
    let mut low = RrStepper::for_state(&initial, RRConfig::new(0)?.with_drive(drive))?;
    let mut high = RrStepper::for_state(&initial, RRConfig::new(1)?.with_drive(drive))?;
    let (mut a, mut b) = (initial.clone(), initial.clone());
    let dt = 2e-3;
    println!("\n{:>6} {:>14} {:>14}", "t", "mean y (M=0)", "mean y (M=1)");
    for _ in 0..8 {
        for _ in 0..500 {
            a = low.step(&a, dt)?;
            b = high.step(&b, dt)?;
        }
        println!("{:>6.2} {:>14.8} {:>14.8}", a.t, a.mean_y(), b.mean_y());
    }

    let literal = RRConfig::new(0)?.with_drive(drive).with_reduction(Reduction::Off);
    let mut stepper = RrStepper::for_state(&initial, literal)?;
    let mut s = initial;
    for _ in 0..4000 {
        match stepper.step(&s, dt) {
            Ok(next) => s = next,
            Err(e) => {
                println!("\nliteral third-derivative form: {e}");
                break;
            }
        }
    }
    Ok(())
}
