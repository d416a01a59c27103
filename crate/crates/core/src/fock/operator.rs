use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

/// Relative tolerance for the Hermitian check, scaled by the largest entry.
pub const HERMITIAN_TOL: f64 = 1e-13;

/// Coordinate-format sparse matrix over an enumerated basis.
///
/// Entries are kept sorted by `(row, col)` with duplicates summed.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    entries: Vec<(usize, usize, Complex64)>,
    hermitian: bool,
}

impl SparseOperator {
    /// Builds an operator, summing duplicate coordinates. When `hermitian`
    /// is set the entries are checked against their adjoint.
    pub fn new(
        dim: usize,
        entries: impl IntoIterator<Item = (usize, usize, Complex64)>,
        hermitian: bool,
    ) -> Result<Self> {
        let mut acc: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
        for (r, c, v) in entries {
            if r >= dim || c >= dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: r.max(c) + 1,
                });
            }
            *acc.entry((r, c)).or_insert(Complex64::new(0.0, 0.0)) += v;
        }
        let op = SparseOperator {
            dim,
            entries: acc
                .into_iter()
                .filter(|(_, v)| *v != Complex64::new(0.0, 0.0))
                .map(|((r, c), v)| (r, c, v))
                .collect(),
            hermitian,
        };
        if hermitian {
            let deviation = op.hermitian_deviation();
            if deviation > HERMITIAN_TOL * op.max_abs().max(1.0) {
                return Err(Error::NotHermitian { deviation });
            }
        }
        Ok(op)
    }

    pub fn zero(dim: usize) -> Self {
        SparseOperator {
            dim,
            entries: Vec::new(),
            hermitian: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, usize, Complex64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        match self
            .entries
            .binary_search_by(|&(r, c, _)| (r, c).cmp(&(row, col)))
        {
            Ok(i) => self.entries[i].2,
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.2.norm()).fold(0.0, f64::max)
    }

    /// `max |A - A^dagger|` over stored entries (and their mirror positions).
    pub fn hermitian_deviation(&self) -> f64 {
        self.entries
            .iter()
            .map(|&(r, c, v)| (v - self.get(c, r).conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|e| e.2.im == 0.0)
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        let mut d = vec![Complex64::new(0.0, 0.0); self.dim];
        for &(r, c, v) in &self.entries {
            if r == c {
                d[r] = v;
            }
        }
        d
    }

    pub fn matvec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        let mut y = vec![Complex64::new(0.0, 0.0); self.dim];
        for &(r, c, v) in &self.entries {
            y[r] += v * x[c];
        }
        Ok(y)
    }

    /// `A + scale * B`; the Hermitian flag survives only if both carry it
    /// and `scale` is real.
    pub fn add_scaled(&self, other: &SparseOperator, scale: f64) -> Result<SparseOperator> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let entries = self
            .entries
            .iter()
            .copied()
            .chain(other.entries.iter().map(|&(r, c, v)| (r, c, v * scale)));
        SparseOperator::new(self.dim, entries, self.hermitian && other.hermitian)
    }

    pub fn scaled(&self, scale: f64) -> SparseOperator {
        SparseOperator {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .filter(|_| scale != 0.0)
                .map(|&(r, c, v)| (r, c, v * scale))
                .collect(),
            hermitian: self.hermitian,
        }
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::from_element(self.dim, self.dim, Complex64::new(0.0, 0.0));
        for &(r, c, v) in &self.entries {
            m[(r, c)] += v;
        }
        m
    }

    /// Writes `row,col,re,im` lines preceded by a header naming the
    /// dimension and Hermitian flag.
    pub fn write_coo<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# dim={} hermitian={}", self.dim, self.hermitian)?;
        writeln!(w, "row,col,re,im")?;
        for &(r, c, v) in &self.entries {
            writeln!(w, "{r},{c},{},{}", v.re, v.im)?;
        }
        Ok(())
    }

    pub fn read_coo<R: BufRead>(r: R) -> Result<SparseOperator> {
        let parse_err = |message: String| Error::Parse {
            what: "coordinate-format operator".into(),
            message,
        };
        let mut dim = None;
        let mut hermitian = false;
        let mut entries = Vec::new();
        for line in r.lines() {
            let line = line?;
            let line = line.trim();
            if let Some(header) = line.strip_prefix('#') {
                for kv in header.split_whitespace() {
                    match kv.split_once('=') {
                        Some(("dim", v)) => {
                            dim = Some(v.parse().map_err(|e| parse_err(format!("dim: {e}")))?)
                        }
                        Some(("hermitian", v)) => {
                            hermitian = v.parse().map_err(|e| parse_err(format!("hermitian: {e}")))?
                        }
                        _ => {}
                    }
                }
                continue;
            }
            if line.is_empty() || line.starts_with("row") {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 4 {
                return Err(parse_err(format!("expected 4 fields in `{line}`")));
            }
            let r: usize = fields[0].parse().map_err(|e| parse_err(format!("{e}")))?;
            let c: usize = fields[1].parse().map_err(|e| parse_err(format!("{e}")))?;
            let re: f64 = fields[2].parse().map_err(|e| parse_err(format!("{e}")))?;
            let im: f64 = fields[3].parse().map_err(|e| parse_err(format!("{e}")))?;
            entries.push((r, c, Complex64::new(re, im)));
        }
        let dim = dim.ok_or_else(|| parse_err("missing `# dim=` header".into()))?;
        SparseOperator::new(dim, entries, hermitian)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn duplicates_are_summed() {
        let op = SparseOperator::new(2, [(0, 1, c(1.0, 0.0)), (0, 1, c(0.5, 0.0))], false).unwrap();
        assert_eq!(op.get(0, 1), c(1.5, 0.0));
        assert_eq!(op.nnz(), 1);
    }

    #[test]
    fn non_hermitian_rejected() {
        let err = SparseOperator::new(2, [(0, 1, c(1.0, 0.0))], true).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { .. }));
        let ok = SparseOperator::new(2, [(0, 1, c(1.0, 2.0)), (1, 0, c(1.0, -2.0))], true);
        assert!(ok.is_ok());
    }

    #[test]
    fn coo_round_trip() {
        let op = SparseOperator::new(
            3,
            [(0, 0, c(0.1, 0.0)), (1, 2, c(1.0 / 3.0, -2.5e-17)), (2, 1, c(1.0 / 3.0, 2.5e-17))],
            true,
        )
        .unwrap();
        let mut buf = Vec::new();
        op.write_coo(&mut buf).unwrap();
        let back = SparseOperator::read_coo(buf.as_slice()).unwrap();
        assert_eq!(back, op);
    }

    #[test]
    fn matvec_checks_dimension() {
        let op = SparseOperator::zero(3);
        assert!(op.matvec(&[c(1.0, 0.0)]).is_err());
    }
}
