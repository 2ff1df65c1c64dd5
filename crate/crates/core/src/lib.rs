//! Smoothed Concomitant Lasso.
//!
//! Joint estimation of sparse regression coefficients and the noise level by
//! minimizing
//!
//! ```text
//! ‖y − Xβ‖² / (2nσ) + σ/2 + λ‖β‖₁    subject to σ ≥ σ0 > 0
//! ```
//!
//! with cyclic coordinate descent. Convergence is certified by a duality gap,
//! and the same certificates feed safe screening rules that discard features
//! proven inactive at the optimum.
//!
//! ```
//! use sclasso::{data, problem, solver, SolverConfig};
//!
//! let syn = data::generate(&data::SyntheticSpec {
//!     n: 30, p: 60, rho: 0.3, snr: 5.0, s: 0.9, sigma_star: 1.0, seed: 7,
//! }).unwrap();
//! let ds = &syn.dataset;
//! let sigma0 = problem::default_sigma0(ds);
//! let lambda = 0.3 * problem::lambda_max(ds, sigma0);
//! let fit = solver::fit(ds, &SolverConfig::new(lambda, sigma0).unwrap(), None).unwrap();
//! assert!(fit.converged && fit.gap <= 1e-6);
//! ```

pub mod cli;
pub mod data;
pub mod dataset;
pub mod error;
pub mod estimators;
pub mod linalg;
pub mod problem;
pub mod screening;
pub mod solver;

pub use dataset::Dataset;
pub use error::{Error, Result};
pub use estimators::{Method, NoiseEstimate};
pub use problem::{PrimalState, Screening, SolverConfig};
pub use solver::{fit, fit_path, FitResult, PathResult, PathSpec};
