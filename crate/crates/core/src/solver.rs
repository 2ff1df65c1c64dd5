//! Coordinate descent engines.
//!
//! [`fit`] solves one Smoothed Concomitant Lasso problem with cyclic
//! coordinate descent, certifying convergence with a duality gap evaluated
//! every `gap_check_every` sweeps. The same checkpoints drive the safe
//! screening rules. [`fit_path`] runs it along a decreasing grid of `λ`
//! with warm starts, optionally presolving each problem on the previous
//! active set. [`lasso_fit`] is the plain Lasso counterpart used by the
//! baseline estimators.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::linalg;
use crate::problem::{self, PrimalState, Screening, SolverConfig};
use crate::screening::{self, BoundPair};

/// Outcome of a single-`λ` solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub lambda: f64,
    pub beta: Vec<f64>,
    pub sigma: f64,
    /// Duality gap at the returned point.
    pub gap: f64,
    pub sweeps: usize,
    pub gap_checks: usize,
    /// `(sweep, fraction of features discarded)` at every gap check.
    pub screened_fraction_trace: Vec<(usize, f64)>,
    /// `(sweep, gap)` at every gap check.
    pub gap_trace: Vec<(usize, f64)>,
    pub converged: bool,
    /// Features never discarded, ascending.
    pub active: Vec<usize>,
}

impl FitResult {
    pub fn support(&self) -> Vec<usize> {
        problem::support(&self.beta)
    }

    /// Features removed by screening (zero-norm columns included).
    pub fn discarded(&self) -> Vec<usize> {
        let mut keep = vec![false; self.beta.len()];
        for &j in &self.active {
            keep[j] = true;
        }
        (0..self.beta.len()).filter(|&j| !keep[j]).collect()
    }
}

/// One cyclic pass over `st.active` in ascending order followed by the
/// closed-form `σ` update.
pub fn cd_sweep(ds: &Dataset, st: &mut PrimalState, lambda: f64, sigma0: f64) {
    let n = ds.n() as f64;
    let level = n * st.sigma * lambda;
    let PrimalState {
        beta,
        residual,
        active,
        sigma,
    } = st;
    for &j in active.iter() {
        let norm_sq = ds.col_norm_sq(j);
        if norm_sq == 0.0 {
            continue;
        }
        let col = ds.column(j);
        let old = beta[j];
        let new = problem::soft_threshold(old + linalg::dot(col, residual) / norm_sq, level / norm_sq);
        if new != old {
            linalg::axpy(old - new, col, residual);
            beta[j] = new;
        }
    }
    *sigma = sigma0.max(linalg::norm(residual) / n.sqrt());
}

/// Which screening test the engine applies at each checkpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rule {
    None,
    Sphere,
    Bounds,
}

impl From<Screening> for Rule {
    fn from(s: Screening) -> Self {
        match s {
            Screening::None => Rule::None,
            Screening::GapSafe | Screening::GapSafePlusPlus => Rule::Sphere,
            Screening::BoundSafe => Rule::Bounds,
        }
    }
}

/// Runs coordinate descent from `st`. When `universe` is given, the design
/// is restricted to those columns: `st.active` must lie inside it and the
/// dual rescaling only looks at them.
fn run_cd(
    ds: &Dataset,
    cfg: &SolverConfig,
    eps: f64,
    max_sweeps: usize,
    rule: Rule,
    mut st: PrimalState,
    universe: Option<&[usize]>,
) -> FitResult {
    let n = ds.n();
    let p = ds.p() as f64;
    let lambda = cfg.lambda;
    let sigma0 = cfg.sigma0;
    let cosines = (rule == Rule::Bounds).then(|| screening::column_cosines(ds));

    let mut gap = f64::INFINITY;
    let mut converged = false;
    let mut sweeps = 0;
    let mut gap_checks = 0;
    let mut gap_trace = Vec::new();
    let mut screened_fraction_trace = Vec::new();

    for k in 0..max_sweeps {
        if k % cfg.gap_check_every == 0 {
            let cert = certify(ds, &mut st, lambda, sigma0, universe);
            gap = cert.gap;
            gap_checks += 1;
            gap_trace.push((k, gap));
            if gap <= eps {
                converged = true;
                break;
            }
            let radius = screening::gap_safe_radius(gap, lambda, sigma0, n);
            let bp = BoundPair::new(cert.dual, cert.primal, ds.y_norm(), n, sigma0);
            let discard = |j: usize| match rule {
                Rule::None => false,
                Rule::Sphere => {
                    screening::sphere_discards(cert.xt_r[j] / cert.scale, radius, ds.col_norm(j))
                }
                Rule::Bounds => {
                    let cos = cosines.as_ref().expect("cosines computed for bound rule");
                    screening::bound_discards(cos[j], &bp, lambda, n, ds.col_norm(j))
                }
            };
            if rule != Rule::None {
                let PrimalState {
                    beta,
                    residual,
                    active,
                    ..
                } = &mut st;
                active.retain(|&j| {
                    if !discard(j) {
                        return true;
                    }
                    if beta[j] != 0.0 {
                        linalg::axpy(beta[j], ds.column(j), residual);
                        beta[j] = 0.0;
                    }
                    false
                });
            }
            screened_fraction_trace.push((k, 1.0 - st.active.len() as f64 / p));
        }
        cd_sweep(ds, &mut st, lambda, sigma0);
        sweeps += 1;
    }

    if !converged {
        let cert = certify(ds, &mut st, lambda, sigma0, universe);
        gap = cert.gap;
        gap_checks += 1;
        gap_trace.push((sweeps, gap));
        converged = gap <= eps;
    }

    FitResult {
        lambda,
        beta: st.beta,
        sigma: st.sigma,
        gap,
        sweeps,
        gap_checks,
        screened_fraction_trace,
        gap_trace,
        converged,
        active: st.active,
    }
}

struct Certificate {
    gap: f64,
    primal: f64,
    dual: f64,
    /// `θ = r / scale`
    scale: f64,
    xt_r: Vec<f64>,
}

/// Refreshes the residual and evaluates the gap at the rescaled residual.
fn certify(
    ds: &Dataset,
    st: &mut PrimalState,
    lambda: f64,
    sigma0: f64,
    universe: Option<&[usize]>,
) -> Certificate {
    st.residual = ds.residual(&st.beta);
    let r = &st.residual;
    let (scale, xt_r) = problem::residual_scaling(ds, r, lambda, sigma0, universe);
    let r_norm_sq = linalg::norm_sq(r);
    let primal = problem::primal_value(r_norm_sq, linalg::norm_l1(&st.beta), st.sigma, lambda, ds.n());
    let dual = problem::dual_value(
        linalg::dot(ds.y(), r) / scale,
        r_norm_sq / (scale * scale),
        lambda,
        sigma0,
        ds.n(),
    );
    Certificate {
        gap: primal - dual,
        primal,
        dual,
        scale,
        xt_r,
    }
}

fn check_init(ds: &Dataset, cfg: &SolverConfig, init: &PrimalState) -> Result<()> {
    if init.beta.len() != ds.p() {
        return Err(Error::InvalidConfig(format!(
            "initial beta has length {}, expected {}",
            init.beta.len(),
            ds.p()
        )));
    }
    if init.sigma < cfg.sigma0 {
        return Err(Error::BelowNoiseFloor {
            sigma: init.sigma,
            sigma0: cfg.sigma0,
        });
    }
    Ok(())
}

/// Solves the Smoothed Concomitant Lasso at `cfg.lambda`.
///
/// Starts from `init` when given (its residual is recomputed and every
/// nonzero column is made active again), otherwise from `β = 0`,
/// `σ = σ0 ∨ ‖y‖/√n`. Running out of sweeps is not an error: the result
/// then has `converged == false` and carries the last gap.
///
/// `GapSafePlusPlus` behaves like `GapSafe` here; the presolve step only
/// exists along a path.
pub fn fit(ds: &Dataset, cfg: &SolverConfig, init: Option<PrimalState>) -> Result<FitResult> {
    cfg.validate()?;
    let st = match init {
        Some(mut st) => {
            check_init(ds, cfg, &st)?;
            st.residual = ds.residual(&st.beta);
            st.active = ds.nonzero_columns();
            st
        }
        None => PrimalState::zeros(ds, cfg.sigma0),
    };
    Ok(run_cd(ds, cfg, cfg.eps, cfg.max_sweeps, cfg.screening.into(), st, None))
}

/// Grid of regularization parameters for a path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSpec {
    pub n_lambdas: usize,
    /// The grid spans `δ` decades below `λ_max`.
    pub delta: f64,
    /// Explicit grid, strictly decreasing; overrides the geometric one.
    pub lambdas: Option<Vec<f64>>,
    /// Presolve sweep budget (defaults to the solver budget).
    pub presolve_sweeps: Option<usize>,
    /// Presolve gap tolerance (defaults to the solver tolerance).
    pub presolve_eps: Option<f64>,
}

impl Default for PathSpec {
    fn default() -> Self {
        Self::new(100, 2.0)
    }
}

impl PathSpec {
    pub fn new(n_lambdas: usize, delta: f64) -> Self {
        Self {
            n_lambdas,
            delta,
            lambdas: None,
            presolve_sweeps: None,
            presolve_eps: None,
        }
    }

    pub fn with_lambdas(lambdas: Vec<f64>) -> Self {
        Self {
            n_lambdas: lambdas.len(),
            lambdas: Some(lambdas),
            ..Self::default()
        }
    }

    /// `λ_t = λ_max · 10^{−δ(t−1)/(T−1)}` for `t = 1..T`, or the explicit grid.
    pub fn grid(&self, lambda_max: f64) -> Result<Vec<f64>> {
        if let Some(lambdas) = &self.lambdas {
            if lambdas.is_empty() {
                return Err(Error::InvalidConfig("empty lambda grid".into()));
            }
            if lambdas.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
                return Err(Error::InvalidConfig("grid values must be positive".into()));
            }
            if lambdas.windows(2).any(|w| w[1] >= w[0]) {
                return Err(Error::InvalidConfig("grid must be strictly decreasing".into()));
            }
            return Ok(lambdas.clone());
        }
        if self.n_lambdas == 0 {
            return Err(Error::InvalidConfig("path needs at least one lambda".into()));
        }
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return Err(Error::InvalidConfig(format!("delta must be > 0, got {}", self.delta)));
        }
        if !(lambda_max.is_finite() && lambda_max > 0.0) {
            return Err(Error::DegenerateDesign(format!(
                "lambda_max = {lambda_max}; X^T y vanishes"
            )));
        }
        if self.n_lambdas == 1 {
            return Ok(vec![lambda_max]);
        }
        let last = (self.n_lambdas - 1) as f64;
        Ok((0..self.n_lambdas)
            .map(|t| lambda_max * 10f64.powf(-self.delta * t as f64 / last))
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WarmStart {
    Cold,
    PreviousBeta,
    ActiveSetPresolve,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathResult {
    pub lambdas: Vec<f64>,
    pub fits: Vec<FitResult>,
    pub warm_starts: Vec<WarmStart>,
    /// Sweeps spent in the restricted presolve, per `λ`.
    pub presolve_sweeps: Vec<usize>,
    pub wall_time: Duration,
}

/// Solves along the grid built from `spec` (starting at `λ_max` for
/// `cfg.sigma0`; `cfg.lambda` is ignored), warm-starting each problem from
/// the previous solution.
///
/// In `GapSafePlusPlus` mode each problem after the first is presolved on
/// the previous active set, with the design restricted to it, before the
/// full safe solve. That restricted problem is not safe with respect to the
/// full one; only the full solve's certificate is reported.
pub fn fit_path(ds: &Dataset, cfg: &SolverConfig, spec: &PathSpec) -> Result<PathResult> {
    cfg.validate()?;
    let start = Instant::now();
    let lambdas = spec.grid(problem::lambda_max(ds, cfg.sigma0))?;
    let presolve_eps = spec.presolve_eps.unwrap_or(cfg.eps);
    let presolve_budget = spec.presolve_sweeps.unwrap_or(cfg.max_sweeps);
    let plus_plus = cfg.screening == Screening::GapSafePlusPlus;

    let mut fits: Vec<FitResult> = Vec::with_capacity(lambdas.len());
    let mut warm_starts = Vec::with_capacity(lambdas.len());
    let mut presolve_sweeps = Vec::with_capacity(lambdas.len());

    for &lambda in &lambdas {
        let cfg_t = cfg.with_lambda(lambda);
        let (mut st, mut tag) = match fits.last() {
            None => (PrimalState::zeros(ds, cfg.sigma0), WarmStart::Cold),
            Some(prev) => {
                let mut st = PrimalState::from_beta(ds, prev.beta.clone(), cfg.sigma0);
                st.sigma = prev.sigma.max(cfg.sigma0);
                (st, WarmStart::PreviousBeta)
            }
        };
        let mut spent = 0;
        if let (true, Some(prev)) = (plus_plus, fits.last()) {
            if presolve_budget > 0 {
                let mut universe = prev.active.clone();
                universe.extend(problem::support(&st.beta));
                universe.sort_unstable();
                universe.dedup();
                universe.retain(|&j| ds.col_norm_sq(j) > 0.0);
                st.active = universe.clone();
                let pre = run_cd(
                    ds,
                    &cfg_t,
                    presolve_eps,
                    presolve_budget,
                    Rule::Sphere,
                    st,
                    Some(&universe),
                );
                spent = pre.sweeps;
                st = PrimalState::from_beta(ds, pre.beta, cfg.sigma0);
                st.sigma = pre.sigma.max(cfg.sigma0);
                tag = WarmStart::ActiveSetPresolve;
            }
        }
        st.active = ds.nonzero_columns();
        let res = run_cd(ds, &cfg_t, cfg.eps, cfg.max_sweeps, cfg.screening.into(), st, None);
        fits.push(res);
        warm_starts.push(tag);
        presolve_sweeps.push(spent);
    }

    Ok(PathResult {
        lambdas,
        fits,
        warm_starts,
        presolve_sweeps,
        wall_time: start.elapsed(),
    })
}

/// Gap evaluation cadence of [`lasso_fit`].
const LASSO_GAP_EVERY: usize = 10;

/// Default tolerance for baseline Lasso fits.
pub const LASSO_DEFAULT_EPS: f64 = 1e-4;

/// Plain cyclic coordinate descent for the Lasso
/// `‖y − Xβ‖²/(2n) + λ‖β‖₁`, stopped on the duality gap. At least one
/// sweep is always made, so a warm start is never returned untouched.
///
/// The returned `sigma` is the naive `‖y − Xβ‖/√n`.
pub fn lasso_fit(
    ds: &Dataset,
    lambda: f64,
    eps: f64,
    max_sweeps: usize,
    init: Option<&[f64]>,
) -> Result<FitResult> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidConfig(format!("lambda must be > 0, got {lambda}")));
    }
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::InvalidConfig(format!("eps must be > 0, got {eps}")));
    }
    if max_sweeps == 0 {
        return Err(Error::InvalidConfig("max_sweeps must be >= 1".into()));
    }
    let n = ds.n() as f64;
    let mut beta = match init {
        Some(b) if b.len() != ds.p() => {
            return Err(Error::InvalidConfig("initial beta has wrong length".into()))
        }
        Some(b) => b.to_vec(),
        None => vec![0.0; ds.p()],
    };
    let active = ds.nonzero_columns();
    let level = n * lambda;
    let mut r = ds.residual(&beta);

    let mut gap = f64::INFINITY;
    let mut converged = false;
    let mut sweeps = 0;
    let mut gap_trace = Vec::new();

    let evaluate = |beta: &[f64], r: &[f64]| -> f64 {
        let scale = level.max(linalg::norm_inf(&ds.xt_dot(r)));
        let r_norm_sq = linalg::norm_sq(r);
        let primal = r_norm_sq / (2.0 * n) + lambda * linalg::norm_l1(beta);
        // ‖y − λnθ‖² with θ = r/scale
        let t = lambda * n / scale;
        let dist_sq: f64 = ds.y().iter().zip(r).map(|(y, ri)| (y - t * ri).powi(2)).sum();
        let dual = (ds.y_norm().powi(2) - dist_sq) / (2.0 * n);
        primal - dual
    };

    // the gap is checked after sweeps 1, 1 + f, 1 + 2f, ...
    while sweeps < max_sweeps {
        for &j in &active {
            let norm_sq = ds.col_norm_sq(j);
            let col = ds.column(j);
            let old = beta[j];
            let new = problem::soft_threshold(old + linalg::dot(col, &r) / norm_sq, level / norm_sq);
            if new != old {
                linalg::axpy(old - new, col, &mut r);
                beta[j] = new;
            }
        }
        sweeps += 1;
        if (sweeps - 1) % LASSO_GAP_EVERY == 0 {
            r = ds.residual(&beta);
            gap = evaluate(&beta, &r);
            gap_trace.push((sweeps, gap));
            if gap <= eps {
                converged = true;
                break;
            }
        }
    }
    if !converged {
        r = ds.residual(&beta);
        gap = evaluate(&beta, &r);
        gap_trace.push((sweeps, gap));
        converged = gap <= eps;
    }

    Ok(FitResult {
        lambda,
        sigma: linalg::norm(&r) / n.sqrt(),
        beta,
        gap,
        sweeps,
        gap_checks: gap_trace.len(),
        screened_fraction_trace: Vec::new(),
        gap_trace,
        converged,
        active,
    })
}

/// Lasso solutions along a decreasing grid, warm-started.
pub fn lasso_path(ds: &Dataset, lambdas: &[f64], eps: f64, max_sweeps: usize) -> Result<Vec<FitResult>> {
    let mut out: Vec<FitResult> = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let init = out.last().map(|f| f.beta.as_slice());
        let res = lasso_fit(ds, lambda, eps, max_sweeps, init)?;
        out.push(res);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn sweep_single_coordinate() {
        let ds = Dataset::from_rows(&[vec![1.0], vec![0.0]], vec![2.0, 0.0]).unwrap();
        // n σ λ = 0.5 with n = 2, σ = 1, λ = 0.25
        let mut st = PrimalState {
            beta: vec![0.0],
            sigma: 1.0,
            residual: vec![2.0, 0.0],
            active: vec![0],
        };
        cd_sweep(&ds, &mut st, 0.25, 0.01);
        assert_abs_diff_eq!(st.beta[0], 1.5);
        assert_abs_diff_eq!(st.residual[0], 0.5);
        assert_abs_diff_eq!(st.residual[1], 0.0);
        assert_abs_diff_eq!(st.sigma, 0.5 / 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn sweep_threshold_dominates() {
        let ds = Dataset::from_rows(&[vec![1.0], vec![1.0]], vec![0.3, 0.1]).unwrap();
        let mut st = PrimalState::zeros(&ds, 0.01);
        // |X^T r| / ‖X‖² = 0.2, threshold n σ λ / ‖X‖² = σ λ
        let lambda = 0.2 / st.sigma + 1e-9;
        cd_sweep(&ds, &mut st, lambda, 0.01);
        assert_eq!(st.beta[0], 0.0);
    }

    #[test]
    fn path_grid_shape() {
        let spec = PathSpec::new(5, 2.0);
        let g = spec.grid(3.0).unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(g[0], 3.0);
        assert_abs_diff_eq!(g[4], 0.03, epsilon = 1e-15);
        assert!(g.windows(2).all(|w| w[1] < w[0]));
        assert_eq!(PathSpec::new(1, 2.0).grid(3.0).unwrap(), vec![3.0]);
        assert!(PathSpec::new(0, 2.0).grid(3.0).is_err());
        assert!(PathSpec::new(3, 2.0).grid(0.0).is_err());
        assert!(PathSpec::with_lambdas(vec![1.0, 1.0]).grid(3.0).is_err());
    }

    #[test]
    fn fit_rejects_bad_init() {
        let ds = Dataset::from_rows(&[vec![1.0], vec![0.5]], vec![1.0, 0.0]).unwrap();
        let cfg = SolverConfig::new(0.1, 0.5).unwrap();
        let mut st = PrimalState::zeros(&ds, 0.5);
        st.sigma = 0.1;
        assert!(matches!(fit(&ds, &cfg, Some(st)), Err(Error::BelowNoiseFloor { .. })));
    }

    #[test]
    fn zero_columns_stay_zero() {
        let ds = Dataset::from_rows(
            &[vec![1.0, 0.0, 0.3], vec![0.5, 0.0, -1.0], vec![-0.2, 0.0, 0.4]],
            vec![1.0, -0.5, 0.2],
        )
        .unwrap();
        let s0 = problem::default_sigma0(&ds);
        let lmax = problem::lambda_max(&ds, s0);
        for screening in Screening::ALL {
            let cfg = SolverConfig::new(lmax / 20.0, s0)
                .unwrap()
                .with_eps(1e-10)
                .with_screening(screening);
            let res = fit(&ds, &cfg, None).unwrap();
            assert!(res.converged);
            assert_eq!(res.beta[1], 0.0);
            assert!(!res.active.contains(&1));
        }
    }
}
