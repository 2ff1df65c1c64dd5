//! Independent reference computations for the integration tests.
//!
//! Nothing here calls into the solver: objectives are re-evaluated with
//! row-major loops, tiny problems are solved by grid search plus pattern
//! search, and least squares goes through the normal equations.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use sclasso::Dataset;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gaussian design and response with a few active columns.
pub fn random_dataset(n: usize, p: usize, seed: u64) -> Dataset {
    let mut g = rng(seed);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..p).map(|_| g.sample(StandardNormal)).collect())
        .collect();
    let k = p.min(3);
    let y: Vec<f64> = rows
        .iter()
        .map(|row| {
            let signal: f64 = row[..k].iter().enumerate().map(|(j, v)| v * (1.5 - 0.5 * j as f64)).sum();
            signal + 0.5 * g.sample::<f64, _>(StandardNormal)
        })
        .collect();
    Dataset::from_rows(&rows, y).unwrap()
}

pub fn rows(ds: &Dataset) -> Vec<Vec<f64>> {
    (0..ds.n()).map(|i| (0..ds.p()).map(|j| ds.value(i, j)).collect()).collect()
}

pub fn residual(rows: &[Vec<f64>], y: &[f64], beta: &[f64]) -> Vec<f64> {
    rows.iter()
        .zip(y)
        .map(|(row, yi)| yi - row.iter().zip(beta).map(|(a, b)| a * b).sum::<f64>())
        .collect()
}

fn sq(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum()
}

fn l1(v: &[f64]) -> f64 {
    v.iter().map(|a| a.abs()).sum()
}

pub fn ref_primal(ds: &Dataset, beta: &[f64], sigma: f64, lambda: f64) -> f64 {
    let r = residual(&rows(ds), ds.y(), beta);
    let n = ds.n() as f64;
    sq(&r) / (2.0 * n * sigma) + sigma / 2.0 + lambda * l1(beta)
}

pub fn ref_dual(ds: &Dataset, theta: &[f64], lambda: f64, sigma0: f64) -> f64 {
    let n = ds.n() as f64;
    let y_theta: f64 = ds.y().iter().zip(theta).map(|(a, b)| a * b).sum();
    lambda * y_theta + sigma0 * (0.5 - lambda * lambda * n * sq(theta) / 2.0)
}

/// `X^T v` by rows.
pub fn xt(ds: &Dataset, v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; ds.p()];
    for (i, row) in rows(ds).iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            out[j] += x * v[i];
        }
    }
    out
}

pub fn ref_dual_point(ds: &Dataset, beta: &[f64], lambda: f64, sigma0: f64) -> Vec<f64> {
    let r = residual(&rows(ds), ds.y(), beta);
    let n = ds.n() as f64;
    let xtr = xt(ds, &r).iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let scale = (lambda * n * sigma0).max(xtr).max(lambda * n.sqrt() * sq(&r).sqrt());
    r.iter().map(|v| v / scale).collect()
}

pub fn ref_gap(ds: &Dataset, beta: &[f64], lambda: f64, sigma0: f64) -> f64 {
    let r = residual(&rows(ds), ds.y(), beta);
    let sigma = sigma0.max(sq(&r).sqrt() / (ds.n() as f64).sqrt());
    let theta = ref_dual_point(ds, beta, lambda, sigma0);
    ref_primal(ds, beta, sigma, lambda) - ref_dual(ds, &theta, lambda, sigma0)
}

/// Objective with `σ` minimized in closed form.
pub fn reduced_objective(ds: &Dataset, rows: &[Vec<f64>], beta: &[f64], lambda: f64, sigma0: f64) -> f64 {
    let n = ds.n() as f64;
    let rho = sq(&residual(rows, ds.y(), beta)).sqrt();
    let smooth = if rho / n.sqrt() >= sigma0 {
        rho / n.sqrt()
    } else {
        rho * rho / (2.0 * n * sigma0) + sigma0 / 2.0
    };
    smooth + lambda * l1(beta)
}

pub fn lasso_objective(ds: &Dataset, rows: &[Vec<f64>], beta: &[f64], lambda: f64) -> f64 {
    sq(&residual(rows, ds.y(), beta)) / (2.0 * ds.n() as f64) + lambda * l1(beta)
}

/// Minimizes `f` over `[-bound, bound]^p` (p ≤ 3) with a dense grid followed
/// by pattern search over all `3^p − 1` sign directions plus moves that
/// zero one coordinate.
pub fn grid_then_pattern(p: usize, bound: f64, f: impl Fn(&[f64]) -> f64) -> (Vec<f64>, f64) {
    assert!(p <= 3);
    let m = match p {
        1 => 4001,
        2 => 401,
        _ => 61,
    };
    let h = 2.0 * bound / (m - 1) as f64;
    let mut best = vec![0.0; p];
    let mut best_val = f(&best);
    let mut idx = vec![0usize; p];
    loop {
        let b: Vec<f64> = idx.iter().map(|&k| -bound + k as f64 * h).collect();
        let v = f(&b);
        if v < best_val {
            best_val = v;
            best = b;
        }
        let mut d = 0;
        loop {
            if d == p {
                break;
            }
            idx[d] += 1;
            if idx[d] < m {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
        if d == p {
            break;
        }
    }

    let dirs: Vec<Vec<f64>> = (0..3usize.pow(p as u32))
        .filter(|&code| code != (3usize.pow(p as u32) - 1) / 2)
        .map(|mut code| {
            (0..p)
                .map(|_| {
                    let c = code % 3;
                    code /= 3;
                    c as f64 - 1.0
                })
                .collect()
        })
        .collect();
    let mut step = h;
    while step > 1e-13 {
        let mut improved = false;
        for j in 0..p {
            if best[j] != 0.0 {
                let mut cand = best.clone();
                cand[j] = 0.0;
                let v = f(&cand);
                if v < best_val {
                    best_val = v;
                    best = cand;
                    improved = true;
                }
            }
        }
        for d in &dirs {
            let cand: Vec<f64> = best.iter().zip(d).map(|(b, di)| b + step * di).collect();
            let v = f(&cand);
            if v < best_val {
                best_val = v;
                best = cand;
                improved = true;
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    (best, best_val)
}

/// Minimizer of the concomitant objective for a tiny problem.
pub fn tiny_oracle(ds: &Dataset, lambda: f64, sigma0: f64) -> (Vec<f64>, f64) {
    let rows = rows(ds);
    let at_zero = reduced_objective(ds, &rows, &vec![0.0; ds.p()], lambda, sigma0);
    let bound = at_zero / lambda;
    grid_then_pattern(ds.p(), bound, |b| reduced_objective(ds, &rows, b, lambda, sigma0))
}

pub fn tiny_lasso_oracle(ds: &Dataset, lambda: f64) -> (Vec<f64>, f64) {
    let rows = rows(ds);
    let bound = lasso_objective(ds, &rows, &vec![0.0; ds.p()], lambda) / lambda;
    grid_then_pattern(ds.p(), bound, |b| lasso_objective(ds, &rows, b, lambda))
}

/// Solves the normal equations `(A^T A) c = A^T y` by Gaussian elimination
/// with partial pivoting and returns `‖y − A c‖`.
pub fn normal_equations_residual(ds: &Dataset, set: &[usize]) -> f64 {
    let k = set.len();
    let all = rows(ds);
    let mut m = vec![vec![0.0; k + 1]; k];
    for row in &all {
        for a in 0..k {
            for b in 0..k {
                m[a][b] += row[set[a]] * row[set[b]];
            }
        }
    }
    for (i, row) in all.iter().enumerate() {
        for a in 0..k {
            m[a][k] += row[set[a]] * ds.y()[i];
        }
    }
    for col in 0..k {
        let piv = (col..k)
            .max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap())
            .unwrap();
        m.swap(col, piv);
        for r in 0..k {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in col..=k {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
    }
    let coef: Vec<f64> = (0..k).map(|a| m[a][k] / m[a][a]).collect();
    let mut beta = vec![0.0; ds.p()];
    for (a, &j) in set.iter().enumerate() {
        beta[j] = coef[a];
    }
    sq(&residual(&all, ds.y(), &beta)).sqrt()
}

/// Largest `|θ^T x|` over the unit-circle arc `γ_ ≤ θ^T y' ≤ γ̄` in the
/// plane of `y' = e1` and `x = (c, √(1 − c²))`, on `points` angles per side.
pub fn slab_max_by_arc(c: f64, gamma_lo: f64, gamma_hi: f64, points: usize) -> f64 {
    let s = (1.0 - c * c).max(0.0).sqrt();
    let (a0, a1) = (gamma_hi.acos(), gamma_lo.acos());
    let step = (a1 - a0) / (points - 1) as f64;
    let (cs, ss) = (step.cos(), step.sin());
    let (mut cos_t, mut sin_t) = (a0.cos(), a0.sin());
    let mut best: f64 = 0.0;
    for k in 0..points {
        if k % 4096 == 0 {
            let t = a0 + k as f64 * step;
            cos_t = t.cos();
            sin_t = t.sin();
        }
        // both signs of the component orthogonal to y'
        best = best.max((c * cos_t + s * sin_t).abs()).max((c * cos_t - s * sin_t).abs());
        let next_cos = cos_t * cs - sin_t * ss;
        sin_t = sin_t * cs + cos_t * ss;
        cos_t = next_cos;
    }
    best
}

/// Proximal gradient (FISTA) for the Lasso, run to stationarity.
pub fn fista_lasso(ds: &Dataset, lambda: f64, iters: usize) -> Vec<f64> {
    let rows = rows(ds);
    let n = ds.n() as f64;
    // power iteration for ‖X‖²
    let mut v = vec![1.0; ds.p()];
    let mut l = 0.0;
    for _ in 0..200 {
        let xv: Vec<f64> = rows.iter().map(|r| r.iter().zip(&v).map(|(a, b)| a * b).sum()).collect();
        let w = xt(ds, &xv);
        l = sq(&w).sqrt();
        v = w.iter().map(|a| a / l).collect();
    }
    let step = n / l;
    let p = ds.p();
    let (mut b, mut z) = (vec![0.0; p], vec![0.0; p]);
    let mut t = 1.0f64;
    for _ in 0..iters {
        let r = residual(&rows, ds.y(), &z);
        let g = xt(ds, &r);
        let next: Vec<f64> = (0..p)
            .map(|j| {
                let u = z[j] + step * g[j] / n;
                u.signum() * (u.abs() - step * lambda).max(0.0)
            })
            .collect();
        let t_next = (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0;
        z = (0..p).map(|j| next[j] + (t - 1.0) / t_next * (next[j] - b[j])).collect();
        b = next;
        t = t_next;
    }
    b
}
