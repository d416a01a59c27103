use std::io::{BufRead, Write};

use super::field::{FieldState, StringSolver};
use crate::modes::StringParams;
use crate::table::Cell;
use crate::{Error, Result};

/// Writes `G`, `L`, `v`, `gamma`, `sigma`, `t` header lines followed by
/// `y,ydot` rows.
pub fn write_snapshot<W: Write>(state: &FieldState, mut w: W) -> Result<()> {
    let p = &state.params;
    writeln!(w, "G={}", state.grid_size())?;
    writeln!(w, "L={}", p.length)?;
    writeln!(w, "v={}", p.speed)?;
    writeln!(w, "gamma={}", p.gamma)?;
    writeln!(w, "sigma={}", p.sigma)?;
    writeln!(w, "t={}", state.t)?;
    writeln!(w, "y,ydot")?;
    for (y, v) in state.y.iter().zip(&state.ydot) {
        writeln!(w, "{y},{v}")?;
    }
    Ok(())
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        what: format!("snapshot line {line}"),
        message: message.into(),
    }
}

pub fn read_snapshot<R: BufRead>(r: R) -> Result<FieldState> {
    let mut header = std::collections::HashMap::new();
    let mut y = Vec::new();
    let mut ydot = Vec::new();
    let mut in_body = false;
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if !in_body {
            if line == "y,ydot" {
                in_body = true;
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| parse_err(i + 1, "expected key=value"))?;
            let v: f64 = v.trim().parse().map_err(|_| parse_err(i + 1, format!("bad number '{v}'")))?;
            header.insert(k.trim().to_owned(), v);
            continue;
        }
        let (a, b) = line.split_once(',').ok_or_else(|| parse_err(i + 1, "expected y,ydot"))?;
        y.push(a.trim().parse().map_err(|_| parse_err(i + 1, format!("bad number '{a}'")))?);
        ydot.push(b.trim().parse().map_err(|_| parse_err(i + 1, format!("bad number '{b}'")))?);
    }
    let get = |k: &str| {
        header.get(k).copied().ok_or_else(|| Error::Parse {
            what: "snapshot".into(),
            message: format!("missing header key {k}"),
        })
    };
    let g = get("G")? as usize;
    if g != y.len() {
        return Err(Error::Parse {
            what: "snapshot".into(),
            message: format!("header declares G={g} but {} rows follow", y.len()),
        });
    }
    let params = StringParams::new(get("L")?, get("v")?, get("gamma")?, get("sigma")?)?;
    FieldState::new(params, y, ydot, get("t")?)
}

/// Column names of a trajectory table with `modes` Fourier modes.
pub fn trajectory_columns(modes: usize) -> Vec<String> {
    let mut cols = vec!["t".to_owned(), "energy".to_owned(), "mean_y".to_owned()];
    cols.extend((1..=modes).map(|k| format!("mode_re_{k}")));
    cols.extend((1..=modes).map(|k| format!("mode_im_{k}")));
    cols
}

pub fn trajectory_row(solver: &StringSolver, state: &FieldState, modes: usize) -> Vec<Cell> {
    let coeffs = solver.modes(state, modes);
    let mut row: Vec<Cell> = vec![state.t.into(), solver.energy(state).into(), state.mean_y().into()];
    row.extend(coeffs.iter().map(|c| Cell::from(c.re)));
    row.extend(coeffs.iter().map(|c| Cell::from(c.im)));
    row
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapshot_round_trip() {
        let p = StringParams::new(1.5, 0.8, 0.01, 0.2).unwrap();
        let mut s = FieldState::from_fn(p, 16, |x| (3.0 * x).sin() * 0.1, |x| x.cos() / 3.0).unwrap();
        s.t = 0.125;
        let mut buf = Vec::new();
        write_snapshot(&s, &mut buf).unwrap();
        let back = read_snapshot(&buf[..]).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn snapshot_rejects_truncated_body() {
        let text = "G=8\nL=1\nv=1\ngamma=0\nsigma=0\nt=0\ny,ydot\n0,0\n";
        assert!(read_snapshot(text.as_bytes()).is_err());
    }
}
