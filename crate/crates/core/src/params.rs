//! Physical model parameters.

use crate::error::{Error, Result};

/// The three physical constants of the model.
///
/// `sigma_bar` is the external nutrient supply on the upper interface,
/// `sigma_tilde` the proliferation threshold separating growth from
/// shrinkage, and `mu` the aggressiveness constant coupling pressure to
/// nutrient excess. The model requires `sigma_bar > sigma_tilde > 0` and
/// `mu > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub sigma_bar: f64,
    pub sigma_tilde: f64,
    pub mu: f64,
}

impl ModelParams {
    /// Validates and constructs a parameter set.
    pub fn new(sigma_bar: f64, sigma_tilde: f64, mu: f64) -> Result<Self> {
        if !sigma_bar.is_finite() || !sigma_tilde.is_finite() || !mu.is_finite() {
            return Err(Error::InvalidParameter {
                name: "params",
                reason: "all parameters must be finite".into(),
            });
        }
        if sigma_tilde <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "sigma_tilde",
                reason: format!("must be positive, got {sigma_tilde}"),
            });
        }
        if sigma_bar <= sigma_tilde {
            return Err(Error::InvalidParameter {
                name: "sigma_bar",
                reason: format!("must exceed sigma_tilde ({sigma_tilde}), got {sigma_bar}"),
            });
        }
        if mu <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "mu",
                reason: format!("must be positive, got {mu}"),
            });
        }
        Ok(Self {
            sigma_bar,
            sigma_tilde,
            mu,
        })
    }

    /// The threshold-to-supply ratio `sigma_tilde / sigma_bar`, always in
    /// `(0, 1)` for a valid parameter set.
    pub fn ratio(&self) -> f64 {
        self.sigma_tilde / self.sigma_bar
    }
}
