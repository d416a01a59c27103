//! Conservative evolution of the nonlinear string: energy and momentum
//! bookkeeping and the amplitude-dependent frequency of a standing wave.

use std::f64::consts::PI;

use nlstring::classical::{FieldState, StringSolver};
use nlstring::StringParams;

fn first_mode(state: &FieldState) -> f64 {
    let g = state.grid_size();
    2.0 / g as f64 * (0..g).map(|j| state.y[j] * state.x(j).sin()).sum::<f64>()
}

fn main() -> nlstring::Result<()> {
    let p = StringParams::new(2.0 * PI, 1.0, 0.05, 0.0)?;
    let solver = StringSolver::new(p, 256)?;
    let mut s = FieldState::from_fn(p, 256, |x| 0.2 * x.sin() + 0.05 * (2.0 * x).cos(), |x| 0.2 * x.cos())?;
    let (e0, m0) = (solver.energy(&s), solver.momentum(&s));
    let dt = 1e-3 * p.length;
    println!("{:>8} {:>14} {:>12} {:>12}", "t", "energy", "dE/E", "dP/P");
    for _ in 0..10 {
        for _ in 0..1000 {
            s = solver.step_conservative(&s, dt)?;
        }
        let e = solver.energy(&s);
        let m = solver.momentum(&s);
        println!("{:>8.3} {e:>14.10} {:>12.2e} {:>12.2e}", s.t, (e - e0) / e0, (m - m0) / m0);
    }

    // A single mode behaves as a Duffing oscillator with cubic coefficient
    // gamma / 8, whose frequency is 1 + 3 gamma A^2 / 64 to leading order.
    println!("\nstanding wave y = A sin x, gamma = 0.1: frequency of the first mode");
    for amplitude in [0.1, 0.5, 1.0] {
        let p = StringParams::new(2.0 * PI, 1.0, 0.1, 0.0)?;
        let solver = StringSolver::new(p, 128)?;
        let mut s = FieldState::from_fn(p, 128, |x| amplitude * x.sin(), |_| 0.0)?;
        let mut prev = first_mode(&s);
        let mut crossings = Vec::new();
        while crossings.len() < 6 {
            let t0 = s.t;
            s = solver.step_conservative(&s, 2e-3)?;
            let a = first_mode(&s);
            if prev.signum() != a.signum() {
                crossings.push(t0 + 2e-3 * prev / (prev - a));
            }
            prev = a;
        }
        let omega = PI * (crossings.len() - 1) as f64 / (crossings[crossings.len() - 1] - crossings[0]);
        let duffing = 1.0 + 3.0 * 0.1 * amplitude * amplitude / 64.0;
        println!("  A = {amplitude:<4} omega = {omega:.8}  (Duffing {duffing:.8})");
    }
    Ok(())
}
