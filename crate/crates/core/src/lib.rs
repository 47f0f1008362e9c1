//! Numerical core for a two-interface free-boundary strip model.
//!
//! The model describes a layer of tissue between two periodic interfaces
//! `y = rho1(x)` and `y = rho2(x)` over the circle `S^1 = R/2piZ`. A nutrient
//! concentration satisfies a linear reaction-diffusion balance in the layer,
//! a pressure field obeys a Darcy-type law, and the interfaces carry
//! surface-tension (Laplace-Young) conditions. The crate computes:
//!
//! * flat equilibria: the layer thickness `delta`, the pressure offset `c`,
//!   and the vertical nutrient/pressure profiles ([`stationary`]);
//! * closed-form Fourier-mode solutions of the linearized stationary problem
//!   together with the surface-tension coefficient curves `gamma1(k)`,
//!   `gamma2(k)` ([`modes`]);
//! * an independent second-order finite-difference two-point BVP solver used
//!   as the ground truth for every closed form ([`bvp`]);
//! * 2D elliptic solvers on the reference strip `S^1 x (0,1)` for the
//!   transformed operator, the solvability functional `Phi` and its
//!   directional derivative, ellipticity bounds, and the interface residual
//!   map ([`strip`]);
//! * a quasi-static time integrator for the linearized interface evolution
//!   ([`evolution`]);
//! * a deterministic self-check suite ([`verify`]) plus config/CSV/JSON
//!   plumbing ([`config`], [`format`]).

pub mod bvp;
pub mod config;
pub mod curve;
pub mod error;
pub mod evolution;
pub mod format;
pub mod grid;
pub mod hyp;
pub mod modes;
pub mod params;
pub mod profile;
pub mod stationary;
pub mod strip;
pub mod verify;

pub use error::{Error, Result};
pub use params::ModelParams;
pub use stationary::FlatStationary;
