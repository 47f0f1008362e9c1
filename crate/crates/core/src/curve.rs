//! Periodic interface curves sampled on the uniform angular grid.
//!
//! An interface is the graph `y = rho(x)` of a positive `2 pi`-periodic
//! function, stored by its samples at `x_j = 2 pi j / m`. Derivatives are
//! taken spectrally (exact for trigonometric polynomials resolved by the
//! grid), which is what the strip solvers and curvature evaluations
//! consume.

use crate::error::{Error, Result};
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

/// Smallest admissible number of angular samples.
pub const MIN_SAMPLES: usize = 8;

/// A positive periodic graph curve given by samples at `x_j = 2 pi j/m`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    samples: Vec<f64>,
}

impl BoundaryCurve {
    /// Validates and wraps samples: `m` even and at least [`MIN_SAMPLES`],
    /// every height positive and finite.
    pub fn from_samples(samples: Vec<f64>) -> Result<Self> {
        let m = samples.len();
        if m < MIN_SAMPLES || !m.is_multiple_of(2) {
            return Err(Error::InvalidParameter {
                name: "samples",
                reason: format!("need an even count of at least {MIN_SAMPLES}, got {m}"),
            });
        }
        if let Some(bad) = samples.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::InvalidParameter {
                name: "samples",
                reason: format!("heights must be positive and finite, got {bad}"),
            });
        }
        Ok(Self { samples })
    }

    /// Samples `f` at the `m` grid angles.
    pub fn from_fn(m: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let samples = (0..m)
            .map(|j| f(2.0 * std::f64::consts::PI * j as f64 / m as f64))
            .collect();
        Self::from_samples(samples)
    }

    /// The constant curve at a fixed height.
    pub fn constant(m: usize, height: f64) -> Result<Self> {
        Self::from_samples(vec![height; m])
    }

    /// A copy with every height shifted by `amount`.
    pub fn translated(&self, amount: f64) -> Result<Self> {
        Self::from_samples(self.samples.iter().map(|v| v + amount).collect())
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Grid angles `x_j = 2 pi j / m`.
    pub fn grid_x(&self) -> Vec<f64> {
        let m = self.len();
        (0..m)
            .map(|j| 2.0 * std::f64::consts::PI * j as f64 / m as f64)
            .collect()
    }

    pub fn min(&self) -> f64 {
        self.samples.iter().fold(f64::INFINITY, |m, &v| m.min(v))
    }

    pub fn max(&self) -> f64 {
        self.samples
            .iter()
            .fold(f64::NEG_INFINITY, |m, &v| m.max(v))
    }

    fn spectral(&self, factor: impl Fn(i64, bool) -> Complex<f64>) -> Vec<f64> {
        let m = self.samples.len();
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(m);
        let ifft = planner.plan_fft_inverse(m);
        let mut buf: Vec<Complex<f64>> =
            self.samples.iter().map(|&v| Complex::new(v, 0.0)).collect();
        fft.process(&mut buf);
        for (j, c) in buf.iter_mut().enumerate() {
            let khat = if j <= m / 2 {
                j as i64
            } else {
                j as i64 - m as i64
            };
            *c *= factor(khat, j == m / 2);
        }
        ifft.process(&mut buf);
        buf.into_iter().map(|c| c.re / m as f64).collect()
    }

    /// Spectral first derivative at the grid angles. The unmatched Nyquist
    /// mode carries no usable phase information and is dropped, the
    /// standard convention for differentiating real samples.
    pub fn derivative(&self) -> Vec<f64> {
        self.spectral(|khat, nyquist| {
            if nyquist {
                Complex::new(0.0, 0.0)
            } else {
                Complex::new(0.0, khat as f64)
            }
        })
    }

    /// Spectral second derivative at the grid angles (the Nyquist mode
    /// keeps its full `-(m/2)^2` factor, which is phase-free).
    pub fn second_derivative(&self) -> Vec<f64> {
        self.spectral(|khat, _| Complex::new(-((khat * khat) as f64), 0.0))
    }

    /// Signed curvature of the graph, `kappa = -rho'' (1 + rho'^2)^(-3/2)`,
    /// positive where the graph bulges upward.
    pub fn curvature(&self) -> Vec<f64> {
        let d1 = self.derivative();
        let d2 = self.second_derivative();
        d1.iter()
            .zip(&d2)
            .map(|(p, pp)| -pp * (1.0 + p * p).powf(-1.5))
            .collect()
    }
}
