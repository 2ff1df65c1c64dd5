//! Objectives, dual points, duality gaps and optimality checks.
//!
//! The Smoothed Concomitant Lasso minimizes, over `β ∈ R^p` and `σ ≥ σ0`,
//!
//! ```text
//! P(β, σ) = ‖y − Xβ‖² / (2nσ) + σ/2 + λ‖β‖₁
//! ```
//!
//! and its dual maximizes, over `Δ = {θ : ‖X^Tθ‖∞ ≤ 1, λ√n‖θ‖ ≤ 1}`,
//!
//! ```text
//! D(θ) = λ⟨y, θ⟩ + σ0 (1/2 − λ²n‖θ‖²/2).
//! ```
//!
//! The plain Lasso counterparts used by the baselines live here too.

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::linalg;

/// Slack allowed on dual-feasibility constraints.
pub const FEASIBILITY_TOL: f64 = 1e-10;

/// Default factor applied to `‖y‖/√n` to obtain the noise floor.
pub const DEFAULT_SIGMA0_FACTOR: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Screening {
    None,
    GapSafe,
    BoundSafe,
    GapSafePlusPlus,
}

impl Screening {
    pub const ALL: [Screening; 4] = [
        Screening::None,
        Screening::GapSafe,
        Screening::BoundSafe,
        Screening::GapSafePlusPlus,
    ];

    /// Short name used on the command line.
    pub fn as_str(self) -> &'static str {
        match self {
            Screening::None => "none",
            Screening::GapSafe => "gap",
            Screening::BoundSafe => "bound",
            Screening::GapSafePlusPlus => "gap++",
        }
    }
}

impl std::str::FromStr for Screening {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Screening::None),
            "gap" => Ok(Screening::GapSafe),
            "bound" => Ok(Screening::BoundSafe),
            "gap++" => Ok(Screening::GapSafePlusPlus),
            other => Err(Error::InvalidConfig(format!(
                "unknown screening mode '{other}' (expected none, gap, bound or gap++)"
            ))),
        }
    }
}

impl std::fmt::Display for Screening {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Parameters of a single Smoothed Concomitant Lasso fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub lambda: f64,
    /// Noise floor, strictly positive.
    pub sigma0: f64,
    /// Duality-gap tolerance.
    pub eps: f64,
    /// Sweep budget.
    pub max_sweeps: usize,
    /// Gap evaluation (and screening) every this many sweeps.
    pub gap_check_every: usize,
    pub screening: Screening,
}

impl SolverConfig {
    pub const DEFAULT_EPS: f64 = 1e-6;
    pub const DEFAULT_MAX_SWEEPS: usize = 5000;
    pub const DEFAULT_GAP_CHECK_EVERY: usize = 10;

    pub fn new(lambda: f64, sigma0: f64) -> Result<Self> {
        let cfg = Self {
            lambda,
            sigma0,
            eps: Self::DEFAULT_EPS,
            max_sweeps: Self::DEFAULT_MAX_SWEEPS,
            gap_check_every: Self::DEFAULT_GAP_CHECK_EVERY,
            screening: Screening::GapSafe,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn with_max_sweeps(mut self, k: usize) -> Self {
        self.max_sweeps = k;
        self
    }

    pub fn with_gap_check_every(mut self, f: usize) -> Self {
        self.gap_check_every = f;
        self
    }

    pub fn with_screening(mut self, screening: Screening) -> Self {
        self.screening = screening;
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.lambda) {
            return Err(Error::InvalidConfig(format!("lambda must be > 0, got {}", self.lambda)));
        }
        if !positive(self.sigma0) {
            return Err(Error::InvalidConfig(format!("sigma0 must be > 0, got {}", self.sigma0)));
        }
        if !positive(self.eps) {
            return Err(Error::InvalidConfig(format!("eps must be > 0, got {}", self.eps)));
        }
        if self.max_sweeps == 0 {
            return Err(Error::InvalidConfig("max_sweeps must be >= 1".into()));
        }
        if self.gap_check_every == 0 {
            return Err(Error::InvalidConfig("gap_check_every must be >= 1".into()));
        }
        Ok(())
    }
}

/// `‖y‖/√n × 10⁻²`
pub fn default_sigma0(ds: &Dataset) -> f64 {
    ds.y_norm() / (ds.n() as f64).sqrt() * DEFAULT_SIGMA0_FACTOR
}

/// Iterate of the coordinate descent.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimalState {
    pub beta: Vec<f64>,
    pub sigma: f64,
    /// `y − Xβ`, maintained incrementally by the solver.
    pub residual: Vec<f64>,
    /// Coordinates still being updated, ascending.
    pub active: Vec<usize>,
}

impl PrimalState {
    /// `β = 0`, `σ = σ0 ∨ ‖y‖/√n`, every nonzero column active.
    pub fn zeros(ds: &Dataset, sigma0: f64) -> Self {
        Self {
            beta: vec![0.0; ds.p()],
            sigma: sigma0.max(ds.y_norm() / (ds.n() as f64).sqrt()),
            residual: ds.y().to_vec(),
            active: ds.nonzero_columns(),
        }
    }

    /// Starts from `beta` with the matching optimal `σ`.
    pub fn from_beta(ds: &Dataset, beta: Vec<f64>, sigma0: f64) -> Self {
        assert_eq!(beta.len(), ds.p());
        let residual = ds.residual(&beta);
        let sigma = sigma0.max(linalg::norm(&residual) / (ds.n() as f64).sqrt());
        Self {
            beta,
            sigma,
            residual,
            active: ds.nonzero_columns(),
        }
    }

    pub fn support(&self) -> Vec<usize> {
        support(&self.beta)
    }
}

/// Coefficients treated as nonzero.
pub const SUPPORT_THRESHOLD: f64 = 1e-12;

pub fn support(beta: &[f64]) -> Vec<usize> {
    beta.iter()
        .enumerate()
        .filter(|(_, b)| b.abs() > SUPPORT_THRESHOLD)
        .map(|(j, _)| j)
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualPoint {
    pub theta: Vec<f64>,
    pub feasible: bool,
}

impl DualPoint {
    /// Wraps `theta`, checking both constraints of `Δ` explicitly.
    pub fn new(ds: &Dataset, theta: Vec<f64>, lambda: f64) -> Self {
        let xt_inf = linalg::norm_inf(&ds.xt_dot(&theta));
        let scaled_norm = lambda * (ds.n() as f64).sqrt() * linalg::norm(&theta);
        let feasible =
            xt_inf <= 1.0 + FEASIBILITY_TOL && scaled_norm <= 1.0 + FEASIBILITY_TOL;
        Self { theta, feasible }
    }
}

#[inline]
pub fn soft_threshold(x: f64, tau: f64) -> f64 {
    debug_assert!(tau >= 0.0);
    if x > tau {
        x - tau
    } else if x < -tau {
        x + tau
    } else {
        0.0
    }
}

/// Primal value from precomputed pieces; shared by the solver.
#[inline]
pub(crate) fn primal_value(r_norm_sq: f64, l1: f64, sigma: f64, lambda: f64, n: usize) -> f64 {
    r_norm_sq / (2.0 * n as f64 * sigma) + sigma / 2.0 + lambda * l1
}

/// Dual value from `⟨y, θ⟩` and `‖θ‖²`.
#[inline]
pub(crate) fn dual_value(y_dot_theta: f64, theta_norm_sq: f64, lambda: f64, sigma0: f64, n: usize) -> f64 {
    lambda * y_dot_theta + sigma0 * (0.5 - lambda * lambda * n as f64 * theta_norm_sq / 2.0)
}

pub fn primal_objective(
    ds: &Dataset,
    beta: &[f64],
    sigma: f64,
    lambda: f64,
    sigma0: f64,
) -> Result<f64> {
    if sigma < sigma0 {
        return Err(Error::BelowNoiseFloor { sigma, sigma0 });
    }
    let r = ds.residual(beta);
    Ok(primal_value(
        linalg::norm_sq(&r),
        linalg::norm_l1(beta),
        sigma,
        lambda,
        ds.n(),
    ))
}

/// Feasibility of `theta` is the caller's business.
pub fn dual_objective(ds: &Dataset, theta: &[f64], lambda: f64, sigma0: f64) -> f64 {
    dual_value(
        linalg::dot(ds.y(), theta),
        linalg::norm_sq(theta),
        lambda,
        sigma0,
        ds.n(),
    )
}

/// Rescaling factor `λnσ0 ∨ ‖X_U^T r‖∞ ∨ λ√n‖r‖` for a residual, where `U`
/// is `cols` (all columns when `None`). Also returns `X_j^T r` for every
/// column (zeros outside `U` are not filled in).
pub(crate) fn residual_scaling(
    ds: &Dataset,
    r: &[f64],
    lambda: f64,
    sigma0: f64,
    cols: Option<&[usize]>,
) -> (f64, Vec<f64>) {
    let n = ds.n() as f64;
    let mut xt_r = vec![0.0; ds.p()];
    let mut inf = 0.0f64;
    let mut visit = |j: usize| {
        let v = linalg::dot(ds.column(j), r);
        xt_r[j] = v;
        inf = inf.max(v.abs());
    };
    match cols {
        Some(cols) => cols.iter().for_each(|&j| visit(j)),
        None => (0..ds.p()).for_each(&mut visit),
    }
    let scale = (lambda * n * sigma0)
        .max(inf)
        .max(lambda * n.sqrt() * linalg::norm(r));
    (scale, xt_r)
}

/// Dual feasible point obtained by rescaling the residual:
/// `θ = r / (λnσ0 ∨ ‖X^T r‖∞ ∨ λ√n‖r‖)` with `r = y − Xβ`.
pub fn dual_feasible_point(ds: &Dataset, beta: &[f64], lambda: f64, sigma0: f64) -> DualPoint {
    let r = ds.residual(beta);
    let (scale, _) = residual_scaling(ds, &r, lambda, sigma0, None);
    let theta: Vec<f64> = r.iter().map(|v| v / scale).collect();
    DualPoint::new(ds, theta, lambda)
}

/// `σ0 ∨ ‖y − Xβ‖/√n`
pub fn sigma_hat(ds: &Dataset, beta: &[f64], sigma0: f64) -> f64 {
    sigma0.max(linalg::norm(&ds.residual(beta)) / (ds.n() as f64).sqrt())
}

/// `P(β, σ) − D(θ)` for the state's `β` and `σ`.
pub fn duality_gap(ds: &Dataset, st: &PrimalState, dp: &DualPoint, cfg: &SolverConfig) -> Result<f64> {
    if !dp.feasible {
        return Err(Error::InfeasibleDualPoint);
    }
    let primal = primal_objective(ds, &st.beta, st.sigma, cfg.lambda, cfg.sigma0)?;
    Ok(primal - dual_objective(ds, &dp.theta, cfg.lambda, cfg.sigma0))
}

/// Smallest `λ` for which `β = 0` is optimal:
/// `‖X^T y‖∞ / (n (σ0 ∨ ‖y‖/√n))`.
pub fn lambda_max(ds: &Dataset, sigma0: f64) -> f64 {
    let n = ds.n() as f64;
    let xty = linalg::norm_inf(&ds.xt_dot(ds.y()));
    xty / (n * sigma0.max(ds.y_norm() / n.sqrt()))
}

/// Largest violation of `X^T(y − Xβ) ∈ nλσ ∂‖β‖₁`, using the state's `β`
/// and `σ` (the residual is recomputed).
pub fn kkt_violation(ds: &Dataset, st: &PrimalState, lambda: f64) -> f64 {
    let r = ds.residual(&st.beta);
    let level = ds.n() as f64 * lambda * st.sigma;
    subgradient_violation(ds, &st.beta, &r, level)
}

pub(crate) fn subgradient_violation(ds: &Dataset, beta: &[f64], r: &[f64], level: f64) -> f64 {
    ds.columns()
        .zip(beta)
        .map(|(col, &b)| {
            let g = linalg::dot(col, r);
            if b != 0.0 {
                (g - level * b.signum()).abs()
            } else {
                (g.abs() - level).max(0.0)
            }
        })
        .fold(0.0, f64::max)
}

/// `‖X^T y‖∞ / n`, the Lasso's critical parameter.
pub fn lasso_lambda_max(ds: &Dataset) -> f64 {
    linalg::norm_inf(&ds.xt_dot(ds.y())) / ds.n() as f64
}

/// `‖y − Xβ‖²/(2n) + λ‖β‖₁`
pub fn lasso_primal(ds: &Dataset, beta: &[f64], lambda: f64) -> f64 {
    let r = ds.residual(beta);
    linalg::norm_sq(&r) / (2.0 * ds.n() as f64) + lambda * linalg::norm_l1(beta)
}

/// `‖y‖²/(2n) − ‖y − λnθ‖²/(2n)`
pub fn lasso_dual(ds: &Dataset, theta: &[f64], lambda: f64) -> f64 {
    let n = ds.n() as f64;
    let dist_sq: f64 = ds
        .y()
        .iter()
        .zip(theta)
        .map(|(y, t)| (y - lambda * n * t).powi(2))
        .sum();
    (ds.y_norm().powi(2) - dist_sq) / (2.0 * n)
}

/// `θ = r / (λn ∨ ‖X^T r‖∞)`; feasible for the Lasso dual by construction.
pub fn lasso_dual_point(ds: &Dataset, beta: &[f64], lambda: f64) -> DualPoint {
    let r = ds.residual(beta);
    let scale = (lambda * ds.n() as f64).max(linalg::norm_inf(&ds.xt_dot(&r)));
    let theta: Vec<f64> = r.iter().map(|v| v / scale).collect();
    let feasible = linalg::norm_inf(&ds.xt_dot(&theta)) <= 1.0 + FEASIBILITY_TOL;
    DualPoint { theta, feasible }
}

pub fn lasso_gap(ds: &Dataset, beta: &[f64], lambda: f64) -> f64 {
    let dp = lasso_dual_point(ds, beta, lambda);
    lasso_primal(ds, beta, lambda) - lasso_dual(ds, &dp.theta, lambda)
}
