//! Safe feature elimination.
//!
//! Both rules certify `β̂_j = 0` by bounding `|X_j^T θ̂|` strictly below one
//! over a region known to contain the dual optimum `θ̂`:
//!
//! * the gap sphere, a ball around any feasible `θ` whose radius follows
//!   from strong concavity of the dual;
//! * the bound rule, which uses lower/upper bounds on the optimal value to
//!   confine `θ̂` to a slab of the scaled unit ball and maximizes over it in
//!   closed form within the plane spanned by `X_j` and `y`.

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::linalg;

/// Ball `B(center, radius)` containing the dual optimum.
#[derive(Debug, Clone, PartialEq)]
pub struct SafeSphere {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl SafeSphere {
    /// Sphere certified by a duality gap at a feasible `center`.
    pub fn from_gap(center: Vec<f64>, gap: f64, lambda: f64, sigma0: f64, n: usize) -> Self {
        let radius = gap_safe_radius(gap, lambda, sigma0, n);
        Self { center, radius }
    }
}

/// `√(2·gap / (λ²σ0 n))`; tiny negative gaps from roundoff count as zero.
pub fn gap_safe_radius(gap: f64, lambda: f64, sigma0: f64, n: usize) -> f64 {
    (2.0 * gap.max(0.0) / (lambda * lambda * sigma0 * n as f64)).sqrt()
}

/// Slack subtracted from the threshold of both tests so that features whose
/// certificate sits on the boundary up to roundoff are kept.
pub const ROUNDOFF_MARGIN: f64 = 1e-10;

/// Sphere test for one column.
#[inline]
pub(crate) fn sphere_discards(xt_theta: f64, radius: f64, col_norm: f64) -> bool {
    xt_theta.abs() + radius * col_norm < 1.0 - ROUNDOFF_MARGIN
}

/// `{ j : |X_j^T θ| + r‖X_j‖ < 1 }` (less [`ROUNDOFF_MARGIN`]), plus every
/// zero-norm column.
pub fn gap_safe_screen(ds: &Dataset, sphere: &SafeSphere) -> Vec<usize> {
    (0..ds.p())
        .filter(|&j| {
            ds.col_norm_sq(j) == 0.0
                || sphere_discards(
                    linalg::dot(ds.column(j), &sphere.center),
                    sphere.radius,
                    ds.col_norm(j),
                )
        })
        .collect()
}

/// Bounds `eta_lo ≤ optimal value ≤ eta_hi` and the derived slab limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundPair {
    pub eta_lo: f64,
    pub eta_hi: f64,
    pub gamma_lo: f64,
    pub gamma_hi: f64,
}

impl BoundPair {
    /// `γ_ = (η_ − σ0/2)√n/‖y‖` and `γ̄ = η̄√n/‖y‖`, clamped so that
    /// `0 ≤ γ_ ≤ γ̄ ≤ 1`. Clamping only enlarges the slab, except for the
    /// lower clamp at 0 which holds anyway at the optimum (`⟨y, θ̂⟩ ≥ 0`).
    pub fn new(eta_lo: f64, eta_hi: f64, y_norm: f64, n: usize, sigma0: f64) -> Self {
        let scale = (n as f64).sqrt() / y_norm;
        let gamma_hi = (eta_hi * scale).clamp(0.0, 1.0);
        let gamma_lo = ((eta_lo - sigma0 / 2.0) * scale).max(0.0).min(gamma_hi);
        Self {
            eta_lo,
            eta_hi,
            gamma_lo,
            gamma_hi,
        }
    }
}

/// `max { |θ^T x| : ‖θ‖ ≤ 1, γ_ ≤ θ^T y' ≤ γ̄ }` for unit vectors `x`, `y'`
/// with `c = x^T y'`.
pub fn max_inner_over_slab(c: f64, gamma_lo: f64, gamma_hi: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&c) {
        return Err(Error::OutOfRange(format!("cosine {c} outside [-1, 1]")));
    }
    if !(0.0 <= gamma_lo && gamma_lo <= gamma_hi && gamma_hi <= 1.0) {
        return Err(Error::OutOfRange(format!(
            "need 0 <= gamma_lo <= gamma_hi <= 1, got {gamma_lo}, {gamma_hi}"
        )));
    }
    Ok(slab_max_unchecked(c, gamma_lo, gamma_hi))
}

#[inline]
fn slab_max_unchecked(c: f64, gamma_lo: f64, gamma_hi: f64) -> f64 {
    let a = c.abs();
    let across = |g: f64| g * a + (1.0 - g * g).max(0.0).sqrt() * (1.0 - a * a).max(0.0).sqrt();
    if a > gamma_hi {
        across(gamma_hi)
    } else if a < gamma_lo {
        across(gamma_lo)
    } else {
        1.0
    }
}

/// Bound test for one column; `cos_xy = X_j^T y / (‖X_j‖‖y‖)`.
#[inline]
pub(crate) fn bound_discards(cos_xy: f64, bp: &BoundPair, lambda: f64, n: usize, col_norm: f64) -> bool {
    let c = cos_xy.clamp(-1.0, 1.0);
    slab_max_unchecked(c, bp.gamma_lo, bp.gamma_hi)
        < (1.0 - ROUNDOFF_MARGIN) * lambda * (n as f64).sqrt() / col_norm
}

/// Cosines between every column and `y` (zero for null columns).
pub(crate) fn column_cosines(ds: &Dataset) -> Vec<f64> {
    ds.columns()
        .enumerate()
        .map(|(j, col)| {
            let nj = ds.col_norm(j);
            if nj == 0.0 {
                0.0
            } else {
                linalg::dot(col, ds.y()) / (nj * ds.y_norm())
            }
        })
        .collect()
}

/// Columns certified inactive by the bound rule, plus zero-norm columns.
pub fn bound_safe_screen(ds: &Dataset, bp: &BoundPair, lambda: f64) -> Vec<usize> {
    column_cosines(ds)
        .into_iter()
        .enumerate()
        .filter(|&(j, c)| {
            ds.col_norm_sq(j) == 0.0 || bound_discards(c, bp, lambda, ds.n(), ds.col_norm(j))
        })
        .map(|(j, _)| j)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn radius_values() {
        assert_eq!(gap_safe_radius(0.0, 1.0, 0.5, 8), 0.0);
        assert_eq!(gap_safe_radius(-1e-14, 1.0, 0.5, 8), 0.0);
        let (lambda, sigma0, n) = (0.3, 0.7, 5);
        let gap = lambda * lambda * sigma0 * n as f64 / 2.0;
        assert_abs_diff_eq!(gap_safe_radius(gap, lambda, sigma0, n), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(gap_safe_radius(1.0, 1.0, 0.5, 8), 0.7071067812, epsilon = 1e-10);
    }

    #[test]
    fn slab_max_branches() {
        assert_abs_diff_eq!(max_inner_over_slab(1.0, 0.2, 0.6).unwrap(), 0.6);
        assert_abs_diff_eq!(max_inner_over_slab(0.0, 0.6, 0.8).unwrap(), 0.8, epsilon = 1e-15);
        assert_eq!(max_inner_over_slab(0.5, 0.2, 0.9).unwrap(), 1.0);
        assert_eq!(max_inner_over_slab(-0.5, 0.2, 0.9).unwrap(), 1.0);
    }

    #[test]
    fn slab_max_rejects_bad_arguments() {
        assert!(max_inner_over_slab(1.5, 0.0, 1.0).is_err());
        assert!(max_inner_over_slab(0.5, 0.6, 0.5).is_err());
        assert!(max_inner_over_slab(0.5, -0.1, 0.5).is_err());
        assert!(max_inner_over_slab(0.5, 0.1, 1.1).is_err());
    }

    #[test]
    fn slab_max_continuous_at_branch_edges() {
        for &(lo, hi) in &[(0.2, 0.6), (0.0, 0.3), (0.5, 0.95)] {
            for edge in [lo, hi] {
                let a = max_inner_over_slab(edge - 1e-9, lo, hi).unwrap();
                let b = max_inner_over_slab(edge + 1e-9, lo, hi).unwrap();
                assert!((a - b).abs() <= 1e-6, "jump at {edge}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn bound_pair_clamps() {
        let bp = BoundPair::new(0.01, 50.0, 1.0, 4, 0.1);
        assert_eq!(bp.gamma_hi, 1.0);
        assert_eq!(bp.gamma_lo, 0.0);
        let bp = BoundPair::new(0.3, 0.2, 2.0, 4, 0.0);
        assert!(bp.gamma_lo <= bp.gamma_hi);
    }

    #[test]
    fn loose_bounds_reduce_to_norm_test() {
        // γ_ = 0, γ̄ = 1: the middle branch applies and only columns with
        // ‖X_j‖ < λ√n are discarded.
        let ds = Dataset::from_rows(
            &[vec![0.1, 2.0, 0.0], vec![0.2, -1.0, 0.0], vec![0.0, 0.5, 0.0]],
            vec![1.0, 0.5, -0.3],
        )
        .unwrap();
        let bp = BoundPair::new(-1.0, f64::INFINITY, ds.y_norm(), ds.n(), 0.1);
        let lambda = 0.2; // λ√n ≈ 0.346
        let kept = bound_safe_screen(&ds, &bp, lambda);
        let expected: Vec<usize> = (0..3)
            .filter(|&j| ds.col_norm(j) < lambda * (3f64).sqrt())
            .collect();
        assert_eq!(kept, expected);
        assert_eq!(kept, vec![0, 2]);
    }

    #[test]
    fn sphere_never_screens_with_large_radius() {
        let ds = Dataset::from_rows(&[vec![1.0, 0.5], vec![0.0, 1.0]], vec![1.0, 1.0]).unwrap();
        let theta = vec![0.1, -0.2];
        let min_norm = (0..2).map(|j| ds.col_norm(j)).fold(f64::INFINITY, f64::min);
        let sphere = SafeSphere {
            center: theta,
            radius: 2.0 / min_norm,
        };
        assert!(gap_safe_screen(&ds, &sphere).is_empty());
    }

    #[test]
    fn zero_columns_always_screened() {
        let ds = Dataset::from_rows(&[vec![0.0, 1.0], vec![0.0, 1.0]], vec![1.0, 2.0]).unwrap();
        let sphere = SafeSphere {
            center: vec![0.0, 0.0],
            radius: 100.0,
        };
        assert_eq!(gap_safe_screen(&ds, &sphere), vec![0]);
    }
}
