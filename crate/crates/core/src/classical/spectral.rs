use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Cached FFT plans for a periodic grid of `g` points and its 2x padded
/// companion used for dealiased products.
#[derive(Clone)]
pub struct Spectral {
    g: usize,
    length: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    forward2: Arc<dyn Fft<f64>>,
    inverse2: Arc<dyn Fft<f64>>,
    k: Vec<f64>,
}

impl std::fmt::Debug for Spectral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral")
            .field("g", &self.g)
            .field("length", &self.length)
            .finish()
    }
}

impl Spectral {
    pub fn new(g: usize, length: f64) -> Self {
        let mut planner = FftPlanner::new();
        let k = (0..g)
            .map(|i| {
                let n = if i <= g / 2 { i as f64 } else { i as f64 - g as f64 };
                2.0 * PI * n / length
            })
            .collect();
        Spectral {
            g,
            length,
            forward: planner.plan_fft_forward(g),
            inverse: planner.plan_fft_inverse(g),
            forward2: planner.plan_fft_forward(2 * g),
            inverse2: planner.plan_fft_inverse(2 * g),
            k,
        }
    }

    pub fn size(&self) -> usize {
        self.g
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Angular wavenumbers in FFT order; index `g/2` is the Nyquist mode.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.k
    }

    /// Fourier coefficients `c_k = (1/G) sum_j f_j e^{-i k x_j}`.
    pub fn forward(&self, f: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.forward.process(&mut buf);
        let scale = 1.0 / self.g as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
        buf
    }

    /// Real samples from coefficients produced by [`Spectral::forward`].
    pub fn inverse(&self, hat: &[Complex64]) -> Vec<f64> {
        let mut buf = hat.to_vec();
        self.inverse.process(&mut buf);
        buf.iter().map(|c| c.re).collect()
    }

    /// Multiplies by `(i k)^order`, zeroing the Nyquist mode.
    pub fn differentiate(&self, hat: &[Complex64], order: u32) -> Vec<Complex64> {
        let mut out: Vec<Complex64> = hat
            .iter()
            .zip(&self.k)
            .map(|(c, &k)| c * Complex64::new(0.0, k).powu(order))
            .collect();
        out[self.g / 2] = Complex64::new(0.0, 0.0);
        out
    }

    pub fn derivative(&self, f: &[f64], order: u32) -> Vec<f64> {
        self.inverse(&self.differentiate(&self.forward(f), order))
    }

    /// Samples on the 2x grid of the band-limited interpolant of `hat`
    /// (Nyquist mode dropped).
    pub fn padded_samples(&self, hat: &[Complex64]) -> Vec<f64> {
        let g = self.g;
        let mut buf = vec![Complex64::new(0.0, 0.0); 2 * g];
        buf[..g / 2].copy_from_slice(&hat[..g / 2]);
        buf[g / 2 + 1 + g..].copy_from_slice(&hat[g / 2 + 1..g]);
        self.inverse2.process(&mut buf);
        buf.iter().map(|c| c.re).collect()
    }

    /// Coefficients of samples on the 2x grid, truncated back to `g` modes
    /// with the Nyquist mode zeroed.
    pub fn truncate_padded(&self, samples: &[f64]) -> Vec<Complex64> {
        let g = self.g;
        let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.forward2.process(&mut buf);
        let scale = 1.0 / (2 * g) as f64;
        let mut out = vec![Complex64::new(0.0, 0.0); g];
        for i in 0..g / 2 {
            out[i] = buf[i] * scale;
        }
        for i in g / 2 + 1..g {
            out[i] = buf[i + g] * scale;
        }
        out
    }

    /// Mean over the period of a function sampled on the 2x grid.
    pub fn padded_mean(samples: &[f64]) -> f64 {
        samples.iter().sum::<f64>() / samples.len() as f64
    }
}
