//! Scalar functions on the unit interval.
//!
//! Mode solutions and forcings are functions of the scaled vertical
//! coordinate `y' in [0,1]`. They are represented as closures so both
//! pointwise evaluation (for boundary identities and finite-difference
//! residuals) and uniform-grid sampling (for oracle comparisons) stay cheap.

/// A real-valued function on `[0, 1]`.
pub struct Profile {
    f: Box<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl Profile {
    /// Wraps a closure as a profile.
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { f: Box::new(f) }
    }

    /// The identically-zero profile.
    pub fn zero() -> Self {
        Self::new(|_| 0.0)
    }

    /// Evaluates the profile at `y`.
    pub fn eval(&self, y: f64) -> f64 {
        (self.f)(y)
    }

    /// Samples the profile on the uniform grid `y_l = l/n`, `l = 0..=n`.
    pub fn sample(&self, n: usize) -> Vec<f64> {
        let h = 1.0 / n as f64;
        (0..=n).map(|l| self.eval(l as f64 * h)).collect()
    }

    /// Centered second-order finite-difference first derivative at `y`.
    pub fn fd_derivative(&self, y: f64, h: f64) -> f64 {
        (self.eval(y + h) - self.eval(y - h)) / (2.0 * h)
    }

    /// Centered second-order finite-difference second derivative at `y`.
    pub fn fd_second_derivative(&self, y: f64, h: f64) -> f64 {
        (self.eval(y - h) - 2.0 * self.eval(y) + self.eval(y + h)) / (h * h)
    }
}

impl std::fmt::Debug for Profile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Profile(f(0)={:e}, f(1)={:e})",
            self.eval(0.0),
            self.eval(1.0)
        )
    }
}
