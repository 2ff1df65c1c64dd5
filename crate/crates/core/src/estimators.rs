//! Noise-level estimators used as baselines and for model selection.
//!
//! Every estimator returns a [`NoiseEstimate`]. Estimators that divide by
//! `(n − |S|)^{1/2}` check the degrees of freedom first and fail with
//! [`Error::DegreesOfFreedom`] instead of returning garbage.

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::data::stream_rng;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::linalg;
use crate::problem::{self, Screening, SolverConfig};
use crate::solver::{self, PathSpec, LASSO_DEFAULT_EPS};

/// Random stream for fold labels.
const FOLD_STREAM: u64 = 4;
/// Random stream for the refitted cross-validation halves.
const HALVES_STREAM: u64 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    /// Least squares on the true support.
    #[serde(rename = "OR")]
    Oracle,
    #[serde(rename = "SC_CV")]
    ScCv,
    #[serde(rename = "SC_LS")]
    ScLs,
    #[serde(rename = "L_CV")]
    LassoCv,
    #[serde(rename = "L_LS")]
    LassoLs,
    /// Lasso at the universal parameter.
    #[serde(rename = "L_U")]
    LassoUniversal,
    /// Refitted cross-validation.
    #[serde(rename = "RCV")]
    Rcv,
    /// Moment estimator.
    #[serde(rename = "D2")]
    Dicker,
    /// Scaled Lasso (alternating solver).
    #[serde(rename = "SZ")]
    Sz,
}

impl Method {
    pub const ALL: [Method; 9] = [
        Method::Oracle,
        Method::ScCv,
        Method::ScLs,
        Method::LassoCv,
        Method::LassoLs,
        Method::LassoUniversal,
        Method::Rcv,
        Method::Dicker,
        Method::Sz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Oracle => "OR",
            Method::ScCv => "SC_CV",
            Method::ScLs => "SC_LS",
            Method::LassoCv => "L_CV",
            Method::LassoLs => "L_LS",
            Method::LassoUniversal => "L_U",
            Method::Rcv => "RCV",
            Method::Dicker => "D2",
            Method::Sz => "SZ",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown method '{s}'")))
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseEstimate {
    pub method: Method,
    pub sigma: f64,
    pub support_size: usize,
    pub lambda_selected: Option<f64>,
    /// The estimate was negative under the square root and clamped to zero.
    pub clamped: bool,
}

impl NoiseEstimate {
    fn new(method: Method, sigma: f64, support_size: usize) -> Self {
        Self {
            method,
            sigma,
            support_size,
            lambda_selected: None,
            clamped: false,
        }
    }
}

/// `norm / (n − k)^{1/2}` after checking `n > k`.
fn dof_normalized(norm: f64, n: usize, k: usize) -> Result<f64> {
    if n <= k {
        return Err(Error::DegreesOfFreedom { n, support: k });
    }
    Ok(norm / ((n - k) as f64).sqrt())
}

/// `‖y − P_S y‖` where `P_S` projects onto the span of the columns in `set`.
///
/// Uses a thin SVD of `X_S`, dropping singular values below
/// `max(n, |S|)·ε·σ_max`, so rank-deficient sets get Moore–Penrose semantics.
pub fn projection_residual_norm(ds: &Dataset, set: &[usize]) -> f64 {
    if set.is_empty() {
        return ds.y_norm();
    }
    let n = ds.n();
    let xs = DMatrix::from_fn(n, set.len(), |i, k| ds.value(i, set[k]));
    let svd = xs.svd(true, false);
    let u = svd.u.as_ref().expect("left singular vectors requested");
    let smax = svd.singular_values.max();
    let cutoff = n.max(set.len()) as f64 * f64::EPSILON * smax;
    let y = DVector::from_column_slice(ds.y());
    let mut resid = y.clone();
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s > cutoff {
            let uk = u.column(k);
            let c = uk.dot(&y);
            resid.axpy(-c, &uk, 1.0);
        }
    }
    resid.norm()
}

/// `‖y − P_{S*} y‖ / (n − |S*|)^{1/2}` on the true support.
pub fn oracle_sigma(ds: &Dataset, true_support: &[usize]) -> Result<NoiseEstimate> {
    let sigma = dof_normalized(
        projection_residual_norm(ds, true_support),
        ds.n(),
        true_support.len(),
    )?;
    Ok(NoiseEstimate::new(Method::Oracle, sigma, true_support.len()))
}

/// Least-squares refit on an estimated support, tagged with `method`.
pub fn ls_refit_sigma(ds: &Dataset, support: &[usize], method: Method) -> Result<NoiseEstimate> {
    let sigma = dof_normalized(projection_residual_norm(ds, support), ds.n(), support.len())?;
    Ok(NoiseEstimate::new(method, sigma, support.len()))
}

/// Model whose regularization parameter is cross-validated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CvMethod {
    Lasso,
    SmoothedConcomitant,
    /// Alternating scaled-Lasso solver on the concomitant grid.
    ScaledLasso,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvConfig {
    pub folds: usize,
    pub grid: PathSpec,
    /// Seeds the fold partition.
    pub seed: u64,
    /// Gap tolerance of every fit.
    pub eps: f64,
    pub max_sweeps: usize,
}

impl Default for CvConfig {
    fn default() -> Self {
        Self {
            folds: 5,
            grid: PathSpec::default(),
            seed: 0,
            eps: LASSO_DEFAULT_EPS,
            max_sweeps: SolverConfig::DEFAULT_MAX_SWEEPS,
        }
    }
}

/// Result of a cross-validated selection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvSelection {
    pub method: CvMethod,
    pub lambdas: Vec<f64>,
    /// Mean held-out squared prediction error per grid point.
    pub scores: Vec<f64>,
    pub best: usize,
    pub lambda_cv: f64,
    /// Fold index of every row.
    pub fold_of: Vec<usize>,
    /// `fold_betas[k][t]`: coefficients fitted without fold `k` at `lambdas[t]`.
    pub fold_betas: Vec<Vec<Vec<f64>>>,
    /// Full-data fit at `lambda_cv`.
    pub beta: Vec<f64>,
    /// Noise level attached to the full-data fit (scaled Lasso only).
    pub fit_sigma: Option<f64>,
    /// Noise floor used for the concomitant grid.
    pub sigma0: Option<f64>,
    pub estimate: NoiseEstimate,
}

impl CvSelection {
    pub fn support(&self) -> Vec<usize> {
        problem::support(&self.beta)
    }
}

/// Balanced fold labels from a seeded permutation of the rows.
pub fn fold_assignment(n: usize, folds: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut stream_rng(seed, FOLD_STREAM));
    let mut fold_of = vec![0; n];
    for (pos, &i) in order.iter().enumerate() {
        fold_of[i] = pos % folds;
    }
    fold_of
}

/// Mean of `(y_i − x_i^T β)²` over `rows`.
pub fn heldout_mse(ds: &Dataset, rows: &[usize], beta: &[f64]) -> f64 {
    let mut total = 0.0;
    for &i in rows {
        let mut pred = 0.0;
        for (j, &b) in beta.iter().enumerate() {
            if b != 0.0 {
                pred += ds.value(i, j) * b;
            }
        }
        total += (ds.y()[i] - pred).powi(2);
    }
    total / rows.len() as f64
}

fn solve_path(
    ds: &Dataset,
    lambdas: &[f64],
    method: CvMethod,
    sigma0: f64,
    cfg: &CvConfig,
) -> Result<Vec<(Vec<f64>, f64)>> {
    match method {
        CvMethod::Lasso => Ok(solver::lasso_path(ds, lambdas, cfg.eps, cfg.max_sweeps)?
            .into_iter()
            .map(|f| (f.beta, f.sigma))
            .collect()),
        CvMethod::SmoothedConcomitant => {
            let scfg = SolverConfig::new(lambdas[0], sigma0)?
                .with_eps(cfg.eps)
                .with_max_sweeps(cfg.max_sweeps)
                .with_screening(Screening::GapSafePlusPlus);
            let path = solver::fit_path(ds, &scfg, &PathSpec::with_lambdas(lambdas.to_vec()))?;
            Ok(path.fits.into_iter().map(|f| (f.beta, f.sigma)).collect())
        }
        CvMethod::ScaledLasso => {
            let opts = ScaledLassoOptions {
                lasso_eps: cfg.eps,
                lasso_max_sweeps: cfg.max_sweeps,
                ..ScaledLassoOptions::default()
            };
            let mut out: Vec<(Vec<f64>, f64)> = Vec::with_capacity(lambdas.len());
            for &lambda in lambdas {
                let init = out.last().map(|(b, s)| (b.as_slice(), *s));
                let fit = scaled_lasso_from(ds, lambda, &opts, init)?;
                out.push((fit.beta, fit.sigma));
            }
            Ok(out)
        }
    }
}

/// K-fold selection of `λ` by mean held-out squared prediction error.
///
/// The grid is built once on the full data: from `‖X^T y‖∞/n` for the Lasso
/// and from the concomitant critical parameter (with the default noise
/// floor) otherwise. Ties go to the largest `λ`. The attached estimate is
/// `‖y − Xβ̂‖/(n − |Ŝ|)^{1/2}` for the full-data fit, except for the scaled
/// Lasso, whose own noise level is reported.
pub fn cv_select(ds: &Dataset, cfg: &CvConfig, method: CvMethod) -> Result<CvSelection> {
    let n = ds.n();
    if cfg.folds < 2 {
        return Err(Error::InvalidConfig("cross-validation needs at least 2 folds".into()));
    }
    if n < cfg.folds {
        return Err(Error::InvalidConfig(format!(
            "{n} rows cannot be split into {} folds",
            cfg.folds
        )));
    }
    let sigma0 = problem::default_sigma0(ds);
    let lambda_max = match method {
        CvMethod::Lasso => problem::lasso_lambda_max(ds),
        _ => problem::lambda_max(ds, sigma0),
    };
    let lambdas = cfg.grid.grid(lambda_max)?;
    let fold_of = fold_assignment(n, cfg.folds, cfg.seed);

    let mut scores = vec![0.0; lambdas.len()];
    let mut fold_betas = Vec::with_capacity(cfg.folds);
    for k in 0..cfg.folds {
        let train: Vec<usize> = (0..n).filter(|&i| fold_of[i] != k).collect();
        let test: Vec<usize> = (0..n).filter(|&i| fold_of[i] == k).collect();
        let train_ds = ds.select_rows(&train)?;
        let fits = solve_path(&train_ds, &lambdas, method, sigma0, cfg)?;
        let betas: Vec<Vec<f64>> = fits.into_iter().map(|(b, _)| b).collect();
        for (score, beta) in scores.iter_mut().zip(&betas) {
            *score += heldout_mse(ds, &test, beta) / cfg.folds as f64;
        }
        fold_betas.push(betas);
    }

    let best = select_best(&scores);
    let lambda_cv = lambdas[best];
    let (beta, fit_sigma) = solve_path(ds, &lambdas[..=best], method, sigma0, cfg)?
        .pop()
        .expect("non-empty path");
    let supp = problem::support(&beta);

    let (tag, sigma) = match method {
        CvMethod::Lasso => (
            Method::LassoCv,
            dof_normalized(linalg::norm(&ds.residual(&beta)), n, supp.len())?,
        ),
        CvMethod::SmoothedConcomitant => (
            Method::ScCv,
            dof_normalized(linalg::norm(&ds.residual(&beta)), n, supp.len())?,
        ),
        CvMethod::ScaledLasso => (Method::Sz, fit_sigma),
    };
    let mut estimate = NoiseEstimate::new(tag, sigma, supp.len());
    estimate.lambda_selected = Some(lambda_cv);

    Ok(CvSelection {
        method,
        lambdas,
        scores,
        best,
        lambda_cv,
        fold_of,
        fold_betas,
        beta,
        fit_sigma: (method == CvMethod::ScaledLasso).then_some(fit_sigma),
        sigma0: (method != CvMethod::Lasso).then_some(sigma0),
        estimate,
    })
}

/// First index of the minimum; the grid decreases so ties favour larger `λ`.
fn select_best(scores: &[f64]) -> usize {
    let mut best = 0;
    for (t, &s) in scores.iter().enumerate() {
        if s < scores[best] {
            best = t;
        }
    }
    best
}

/// Least-squares refit on the support chosen by cross-validation.
pub fn cv_ls_sigma(ds: &Dataset, sel: &CvSelection) -> Result<NoiseEstimate> {
    let method = match sel.method {
        CvMethod::Lasso => Method::LassoLs,
        _ => Method::ScLs,
    };
    let mut est = ls_refit_sigma(ds, &sel.support(), method)?;
    est.lambda_selected = Some(sel.lambda_cv);
    Ok(est)
}

/// `((σ̂₁² + σ̂₂²)/2)^{1/2}` where `σ̂₁` refits the second half on the
/// support selected on the first half and `σ̂₂` the reverse.
pub fn rcv_from_split(
    first: &Dataset,
    second: &Dataset,
    support_first: &[usize],
    support_second: &[usize],
) -> Result<f64> {
    let s1 = dof_normalized(
        projection_residual_norm(second, support_first),
        second.n(),
        support_first.len(),
    )?;
    let s2 = dof_normalized(
        projection_residual_norm(first, support_second),
        first.n(),
        support_second.len(),
    )?;
    Ok(((s1 * s1 + s2 * s2) / 2.0).sqrt())
}

/// Random halves of the rows (first half has `⌊n/2⌋` rows).
pub fn random_halves(n: usize, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut stream_rng(seed, HALVES_STREAM));
    let second = order.split_off(n / 2);
    (order, second)
}

/// Refitted cross-validation: Lasso supports are selected by `cfg` on
/// each random half. `support_size` reports the union of both supports.
pub fn rcv_sigma(ds: &Dataset, cfg: &CvConfig, seed: u64) -> Result<NoiseEstimate> {
    if ds.n() < 2 * cfg.folds {
        return Err(Error::InvalidConfig(format!(
            "refitted cross-validation needs n >= 2 * folds, got n = {}",
            ds.n()
        )));
    }
    let (a, b) = random_halves(ds.n(), seed);
    let first = ds.select_rows(&a)?;
    let second = ds.select_rows(&b)?;
    let s1 = cv_select(&first, cfg, CvMethod::Lasso)?.support();
    let s2 = cv_select(&second, cfg, CvMethod::Lasso)?.support();
    let sigma = rcv_from_split(&first, &second, &s1, &s2)?;
    let mut union = s1.clone();
    union.extend(&s2);
    union.sort_unstable();
    union.dedup();
    Ok(NoiseEstimate::new(Method::Rcv, sigma, union.len()))
}

/// Moment estimator built from `m̂₁ = tr(Σ̂)/p` and
/// `m̂₂ = tr(Σ̂²)/p − tr(Σ̂)²/(pn)` with `Σ̂ = X^T X / n`.
///
/// A negative value under the square root is clamped to zero and flagged.
pub fn dicker_sigma(ds: &Dataset) -> Result<NoiseEstimate> {
    let (n, p) = (ds.n() as f64, ds.p() as f64);
    let trace = ds.col_norms_sq().iter().sum::<f64>() / n;
    // tr(Σ̂²) = ‖X^T X‖_F² / n² = ‖X X^T‖_F² / n²; use the smaller Gram.
    let frob_sq = if ds.p() <= ds.n() {
        let mut acc = 0.0;
        for a in 0..ds.p() {
            acc += ds.col_norm_sq(a).powi(2);
            for b in 0..a {
                acc += 2.0 * linalg::dot(ds.column(a), ds.column(b)).powi(2);
            }
        }
        acc
    } else {
        let mut gram = vec![0.0; ds.n() * ds.n()];
        for col in ds.columns() {
            for i in 0..ds.n() {
                let ci = col[i];
                if ci != 0.0 {
                    linalg::axpy(ci, col, &mut gram[i * ds.n()..(i + 1) * ds.n()]);
                }
            }
        }
        linalg::norm_sq(&gram)
    };
    let trace_sq = frob_sq / (n * n);
    let m1 = trace / p;
    let m2 = trace_sq / p - trace * trace / (p * n);
    if m2.abs() <= 1e-12 * m1 * m1 || m2 == 0.0 {
        return Err(Error::DegenerateDesign(format!(
            "second spectral moment vanishes (m2 = {m2:e})"
        )));
    }
    let (sigma, clamped) = dicker_from_moments(
        m1,
        m2,
        ds.n(),
        ds.p(),
        ds.y_norm().powi(2),
        linalg::norm_sq(&ds.xt_dot(ds.y())),
    );
    let mut est = NoiseEstimate::new(Method::Dicker, sigma, 0);
    est.clamped = clamped;
    Ok(est)
}

/// The moment formula given `m̂₁`, `m̂₂`, `‖y‖²` and `‖X^T y‖²`.
/// Returns the estimate and whether the radicand was clamped at zero.
pub fn dicker_from_moments(
    m1: f64,
    m2: f64,
    n: usize,
    p: usize,
    y_norm_sq: f64,
    xty_norm_sq: f64,
) -> (f64, bool) {
    let (n, p) = (n as f64, p as f64);
    let radicand = (1.0 + p * m1 * m1 / ((n + 1.0) * m2)) * y_norm_sq / n
        - m1 * xty_norm_sq / (n * (n + 1.0) * m2);
    (radicand.max(0.0).sqrt(), radicand < 0.0)
}

/// `√(2 ln p / n)`
pub fn universal_lambda(n: usize, p: usize) -> f64 {
    (2.0 * (p as f64).ln() / n as f64).sqrt()
}

/// Lasso at the universal parameter, then `‖y − Xβ̂‖/(n − |Ŝ|)^{1/2}`.
pub fn universal_lasso_sigma(ds: &Dataset) -> Result<NoiseEstimate> {
    if ds.p() < 2 {
        return Err(Error::InvalidConfig("universal parameter needs p >= 2".into()));
    }
    let lambda = universal_lambda(ds.n(), ds.p());
    let fit = solver::lasso_fit(
        ds,
        lambda,
        LASSO_DEFAULT_EPS,
        SolverConfig::DEFAULT_MAX_SWEEPS,
        None,
    )?;
    let supp = fit.support();
    let sigma = dof_normalized(linalg::norm(&ds.residual(&fit.beta)), ds.n(), supp.len())?;
    let mut est = NoiseEstimate::new(Method::LassoUniversal, sigma, supp.len());
    est.lambda_selected = Some(lambda);
    Ok(est)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledLassoOptions {
    /// Stop once consecutive noise levels differ by at most this.
    pub tol_sigma: f64,
    pub max_iters: usize,
    pub lasso_eps: f64,
    pub lasso_max_sweeps: usize,
}

impl Default for ScaledLassoOptions {
    fn default() -> Self {
        Self {
            tol_sigma: 1e-4,
            max_iters: 100,
            lasso_eps: LASSO_DEFAULT_EPS,
            lasso_max_sweeps: SolverConfig::DEFAULT_MAX_SWEEPS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaledLassoFit {
    pub beta: Vec<f64>,
    pub sigma: f64,
    pub iters: usize,
    /// The noise level stabilized within `tol_sigma`.
    pub converged: bool,
    /// The residual vanished; `sigma` is zero.
    pub interpolated: bool,
}

/// Alternates a Lasso at `λσ` with `σ ← ‖y − Xβ‖/√n`, from `σ = ‖y‖/√n`.
pub fn scaled_lasso(ds: &Dataset, lambda: f64, tol_sigma: f64, max_iters: usize) -> Result<ScaledLassoFit> {
    let opts = ScaledLassoOptions {
        tol_sigma,
        max_iters,
        ..ScaledLassoOptions::default()
    };
    scaled_lasso_from(ds, lambda, &opts, None)
}

/// [`scaled_lasso`] with explicit options and an optional `(β, σ)` start.
pub fn scaled_lasso_from(
    ds: &Dataset,
    lambda: f64,
    opts: &ScaledLassoOptions,
    init: Option<(&[f64], f64)>,
) -> Result<ScaledLassoFit> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidConfig(format!("lambda must be > 0, got {lambda}")));
    }
    if opts.max_iters == 0 {
        return Err(Error::InvalidConfig("max_iters must be >= 1".into()));
    }
    let sqrt_n = (ds.n() as f64).sqrt();
    let (mut beta, mut sigma) = match init {
        Some((b, s)) if s > 0.0 => (b.to_vec(), s),
        _ => (vec![0.0; ds.p()], ds.y_norm() / sqrt_n),
    };
    let mut iters = 0;
    let mut converged = false;
    let mut interpolated = false;
    while iters < opts.max_iters {
        iters += 1;
        let fit = solver::lasso_fit(ds, lambda * sigma, opts.lasso_eps, opts.lasso_max_sweeps, Some(&beta))?;
        beta = fit.beta;
        let next = linalg::norm(&ds.residual(&beta)) / sqrt_n;
        if next == 0.0 {
            sigma = 0.0;
            interpolated = true;
            break;
        }
        let step = (next - sigma).abs();
        sigma = next;
        if step <= opts.tol_sigma {
            converged = true;
            break;
        }
    }
    Ok(ScaledLassoFit {
        beta,
        sigma,
        iters,
        converged,
        interpolated,
    })
}

/// Scaled Lasso with `λ` cross-validated on the concomitant grid.
pub fn sz_sigma(ds: &Dataset, cfg: &CvConfig) -> Result<NoiseEstimate> {
    Ok(cv_select(ds, cfg, CvMethod::ScaledLasso)?.estimate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn empty_set_projection() {
        let ds = Dataset::from_rows(&[vec![1.0], vec![2.0]], vec![3.0, 4.0]).unwrap();
        assert_eq!(projection_residual_norm(&ds, &[]), 5.0);
    }

    #[test]
    fn projection_in_span() {
        let ds = Dataset::from_rows(
            &[vec![1.0, 0.0, 2.0], vec![0.0, 1.0, 1.0], vec![1.0, 1.0, 0.0]],
            vec![1.0, 1.0, 2.0],
        )
        .unwrap();
        assert!(projection_residual_norm(&ds, &[0, 1]) <= 1e-10);
        // duplicated direction is rank deficient but still spans y
        assert!(projection_residual_norm(&ds, &[0, 0, 1]) <= 1e-10);
    }

    #[test]
    fn oracle_shapes() {
        let ds = Dataset::from_rows(
            &[vec![1.0], vec![0.0], vec![0.0], vec![0.0]],
            vec![1.0, 1.0, -1.0, 1.0],
        )
        .unwrap();
        let est = oracle_sigma(&ds, &[]).unwrap();
        assert_abs_diff_eq!(est.sigma, 1.0, epsilon = 1e-15);
        assert_eq!(est.method, Method::Oracle);
        let est = oracle_sigma(&ds, &[0]).unwrap();
        assert_abs_diff_eq!(est.sigma, 1.0, epsilon = 1e-12);
        assert!(matches!(
            oracle_sigma(&ds, &[0, 0, 0, 0]),
            Err(Error::DegreesOfFreedom { .. })
        ));
    }

    #[test]
    fn dicker_scales_with_response() {
        let rows = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0], vec![0.0, 0.0]];
        let a = dicker_sigma(&Dataset::from_rows(&rows, vec![1.0, 2.0, 3.0, 4.0]).unwrap()).unwrap();
        let b = dicker_sigma(&Dataset::from_rows(&rows, vec![2.0, 4.0, 6.0, 8.0]).unwrap()).unwrap();
        assert_abs_diff_eq!(2.0 * a.sigma, b.sigma, epsilon = 1e-12);
    }

    #[test]
    fn dicker_zero_response() {
        assert_eq!(dicker_from_moments(0.5, 0.1875, 4, 2, 0.0, 0.0), (0.0, false));
    }

    #[test]
    fn dicker_identity_is_degenerate() {
        let n = 4;
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        let ds = Dataset::from_rows(&rows, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!(matches!(dicker_sigma(&ds), Err(Error::DegenerateDesign(_))));
    }

    #[test]
    fn universal_lambda_value() {
        assert_abs_diff_eq!(universal_lambda(4, 2), 0.5887050112577373, epsilon = 1e-12);
    }

    #[test]
    fn fold_labels_are_balanced() {
        let labels = fold_assignment(23, 5, 9);
        for k in 0..5 {
            let c = labels.iter().filter(|&&f| f == k).count();
            assert!(c == 4 || c == 5);
        }
        assert_eq!(labels, fold_assignment(23, 5, 9));
    }

    #[test]
    fn ties_pick_first() {
        assert_eq!(select_best(&[1.0, 1.0, 0.5, 0.5]), 2);
        assert_eq!(select_best(&[2.0, 2.0]), 0);
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
            let js = serde_json::to_string(&m).unwrap();
            assert_eq!(js, format!("\"{}\"", m.name()));
        }
    }
}
