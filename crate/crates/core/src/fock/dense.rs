//! Dense exact diagonalization and propagation, the reference against which
//! the perturbative results are checked.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::SparseOperator;
use crate::{Error, Result};

/// Largest dimension accepted by the dense routines.
pub const DEFAULT_DENSE_CAP: usize = 4000;

/// Full eigendecomposition of a Hermitian operator, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: DMatrix<Complex64>,
}

#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    pub vector: DVector<Complex64>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `exp(-i H t) psi` through the stored eigenbasis.
    pub fn evolve(&self, psi: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
        if psi.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: psi.len(),
            });
        }
        let psi = DVector::from_column_slice(psi);
        let mut coeffs = self.vectors.ad_mul(&psi);
        for (c, &e) in coeffs.iter_mut().zip(&self.values) {
            *c *= Complex64::from_polar(1.0, -e * t);
        }
        Ok((&self.vectors * coeffs).as_slice().to_vec())
    }

    pub fn pair(&self, i: usize) -> EigenPair {
        EigenPair {
            value: self.values[i],
            vector: self.vectors.column(i).into_owned(),
        }
    }
}

/// Diagonalizes `h` with the default dense cap.
pub fn diagonalize(h: &SparseOperator) -> Result<Spectrum> {
    diagonalize_with_cap(h, DEFAULT_DENSE_CAP)
}

pub fn diagonalize_with_cap(h: &SparseOperator, cap: usize) -> Result<Spectrum> {
    if h.dim() > cap {
        return Err(Error::DimensionOverCap { dim: h.dim(), cap });
    }
    let deviation = h.hermitian_deviation();
    if !h.is_hermitian() || deviation > super::operator::HERMITIAN_TOL * h.max_abs().max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    let n = h.dim();
    let (values, vectors) = if h.entries().iter().all(|&(r, c, _)| r == c) {
        (
            h.diagonal().iter().map(|v| v.re).collect::<Vec<f64>>(),
            DMatrix::<Complex64>::identity(n, n),
        )
    } else if h.is_real() {
        let mut m = DMatrix::<f64>::zeros(n, n);
        for &(r, c, v) in h.entries() {
            m[(r, c)] += v.re;
        }
        let eig = SymmetricEigen::new(m);
        (
            eig.eigenvalues.as_slice().to_vec(),
            eig.eigenvectors.map(|x| Complex64::new(x, 0.0)),
        )
    } else {
        let eig = SymmetricEigen::new(h.to_dense());
        (eig.eigenvalues.as_slice().to_vec(), eig.eigenvectors)
    };

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let sorted_values = order.iter().map(|&i| values[i]).collect();
    let sorted_vectors = DMatrix::from_fn(n, n, |r, c| vectors[(r, order[c])]);
    Ok(Spectrum {
        values: sorted_values,
        vectors: sorted_vectors,
    })
}

/// The `k` lowest eigenpairs of `h`, ascending.
pub fn exact_eigs(h: &SparseOperator, k: usize) -> Result<Vec<EigenPair>> {
    let spectrum = diagonalize(h)?;
    Ok((0..k.min(spectrum.dim())).map(|i| spectrum.pair(i)).collect())
}

/// `exp(-i H t) initial` by full eigendecomposition.
pub fn evolve_exact(h: &SparseOperator, initial: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
    diagonalize(h)?.evolve(initial, t)
}

pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{build_basis, build_h1, build_hamiltonian};
    use crate::StringParams;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn free_spectrum_small_basis() {
        let b = build_basis(1, 1, None).unwrap();
        let h1 = build_h1(&b, &StringParams::default());
        let eigs = exact_eigs(&h1, 3).unwrap();
        let values: Vec<f64> = eigs.iter().map(|e| e.value).collect();
        assert_relative_eq!(values[0], 0.0, epsilon = 1e-14);
        assert_relative_eq!(values[1], 1.0, epsilon = 1e-14);
        assert_relative_eq!(values[2], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn linear_string_spectrum_equals_h1() {
        let b = build_basis(2, 3, None).unwrap();
        let p = StringParams::default();
        let full = diagonalize(&build_hamiltonian(&b, &p).unwrap()).unwrap();
        let free = diagonalize(&build_h1(&b, &p)).unwrap();
        assert_eq!(full.values, free.values);
    }

    #[test]
    fn residuals_are_small() {
        let b = build_basis(2, 3, Some(0)).unwrap();
        let h = build_hamiltonian(&b, &StringParams::default().with_gamma(0.5)).unwrap();
        let spectrum = diagonalize(&h).unwrap();
        let scale = h.max_abs();
        for i in 0..spectrum.dim() {
            let pair = spectrum.pair(i);
            let hx = h.matvec(pair.vector.as_slice()).unwrap();
            let res: f64 = hx
                .iter()
                .zip(pair.vector.iter())
                .map(|(a, b)| (a - b * pair.value).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(res < 1e-10 * scale, "residual {res}");
        }
    }

    #[test]
    fn diagonal_evolution_is_a_phase() {
        let h = SparseOperator::new(2, [(0, 0, c(1.5, 0.0)), (1, 1, c(-0.25, 0.0))], true).unwrap();
        let psi = [c(0.6, 0.0), c(0.0, 0.8)];
        assert_eq!(evolve_exact(&h, &psi, 0.0).unwrap().len(), 2);
        let out = evolve_exact(&h, &psi, 2.0).unwrap();
        let expect0 = psi[0] * Complex64::from_polar(1.0, -3.0);
        let expect1 = psi[1] * Complex64::from_polar(1.0, 0.5);
        assert!((out[0] - expect0).norm() < 1e-14);
        assert!((out[1] - expect1).norm() < 1e-14);
    }

    #[test]
    fn evolution_is_unitary_and_identity_at_zero() {
        let b = build_basis(2, 4, Some(0)).unwrap();
        let h = build_hamiltonian(&b, &StringParams::default().with_gamma(0.8)).unwrap();
        let psi: Vec<Complex64> = (0..b.dim()).map(|i| c((i as f64).sin(), (i as f64 * 0.3).cos())).collect();
        let n0 = norm(&psi);
        let spectrum = diagonalize(&h).unwrap();
        let same = spectrum.evolve(&psi, 0.0).unwrap();
        for (a, b) in same.iter().zip(&psi) {
            assert!((a - b).norm() < 1e-12);
        }
        for t in [0.1, 1.0, 13.7] {
            let out = spectrum.evolve(&psi, t).unwrap();
            assert!((norm(&out) - n0).abs() < 1e-12 * n0);
        }
    }

    #[test]
    fn caps_and_hermiticity_enforced() {
        let h = SparseOperator::zero(10);
        assert!(matches!(diagonalize_with_cap(&h, 5), Err(Error::DimensionOverCap { .. })));
        let nh = SparseOperator::new(2, [(0, 1, c(1.0, 0.0))], false).unwrap();
        assert!(matches!(diagonalize(&nh), Err(Error::NotHermitian { .. })));
    }
}
