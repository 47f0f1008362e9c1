//! Error type shared by all numerical modules.

use thiserror::Error;

/// Crate-wide error enumeration.
#[derive(Debug, Error)]
pub enum Error {
    /// A model or grid parameter violates its documented domain.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// An evaluation point lies outside the domain of the requested profile.
    #[error("argument out of domain: {0}")]
    Domain(String),

    /// An operation was called with a mode index it is not defined for.
    #[error("operation misuse: {0}")]
    Misuse(String),

    /// Mode coefficients violate the compatibility relation `a*d = b*c`
    /// or the nontriviality requirements.
    #[error("invalid mode coefficients: {0}")]
    InvalidMode(String),

    /// A pure-Neumann system received incompatible data; the reported defect
    /// is the discrete compatibility functional of the right-hand side.
    #[error("pure-Neumann system unsolvable: compatibility defect {defect:e}")]
    Unsolvable { defect: f64 },

    /// The solvability functional exceeded the configured compatibility
    /// threshold, so the pressure problem has no solution to project onto.
    #[error("compatibility threshold exceeded: |phi| = {phi:e} > {threshold:e}")]
    Incompatible { phi: f64, threshold: f64 },

    /// A direct linear solve broke down (singular pivot or residual blow-up).
    #[error("linear solve breakdown: {0}")]
    SolveBreakdown(String),

    /// Configuration file or key-value parsing failure.
    #[error("config error: {0}")]
    Config(String),

    /// Underlying I/O failure while reading or writing artifacts.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
