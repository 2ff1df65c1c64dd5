//! Immutable regression dataset with cached column norms.

use crate::error::{Error, Result};
use crate::linalg;

/// A dense design `X` (n × p, column-major) and response `y`.
///
/// Column squared norms and `‖y‖` are computed once at construction. The
/// dataset never changes afterwards and can be shared read-only between
/// threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    n: usize,
    p: usize,
    x: Vec<f64>,
    y: Vec<f64>,
    col_norms_sq: Vec<f64>,
    col_norms: Vec<f64>,
    y_norm: f64,
}

impl Dataset {
    /// Builds a dataset from a column-major buffer of length `n * p`.
    pub fn from_columns(n: usize, p: usize, x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if n == 0 || p == 0 {
            return Err(Error::InvalidDataset(format!(
                "need n >= 1 and p >= 1, got n = {n}, p = {p}"
            )));
        }
        if x.len() != n * p {
            return Err(Error::InvalidDataset(format!(
                "design buffer has {} entries, expected n * p = {}",
                x.len(),
                n * p
            )));
        }
        if y.len() != n {
            return Err(Error::InvalidDataset(format!(
                "response has length {}, expected {n}",
                y.len()
            )));
        }
        if x.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset("non-finite entry".into()));
        }
        let y_norm = linalg::norm(&y);
        if y_norm <= 0.0 {
            return Err(Error::InvalidDataset("response y must be nonzero".into()));
        }
        let col_norms_sq: Vec<f64> = x.chunks_exact(n).map(linalg::norm_sq).collect();
        let col_norms = col_norms_sq.iter().map(|v| v.sqrt()).collect();
        Ok(Self {
            n,
            p,
            x,
            y,
            col_norms_sq,
            col_norms,
            y_norm,
        })
    }

    /// Builds a dataset from rows of `X`.
    pub fn from_rows(rows: &[Vec<f64>], y: Vec<f64>) -> Result<Self> {
        let n = rows.len();
        let p = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != p) {
            return Err(Error::InvalidDataset("ragged design rows".into()));
        }
        let mut x = vec![0.0; n * p];
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                x[j * n + i] = *v;
            }
        }
        Self::from_columns(n, p, x, y)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn y_norm(&self) -> f64 {
        self.y_norm
    }

    /// Column-major design buffer.
    pub fn x(&self) -> &[f64] {
        &self.x
    }

    #[inline]
    pub fn column(&self, j: usize) -> &[f64] {
        &self.x[j * self.n..(j + 1) * self.n]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[f64]> {
        self.x.chunks_exact(self.n)
    }

    #[inline]
    pub fn col_norm_sq(&self, j: usize) -> f64 {
        self.col_norms_sq[j]
    }

    #[inline]
    pub fn col_norm(&self, j: usize) -> f64 {
        self.col_norms[j]
    }

    pub fn col_norms_sq(&self) -> &[f64] {
        &self.col_norms_sq
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.x[j * self.n + i]
    }

    /// Indices of columns with nonzero norm.
    pub fn nonzero_columns(&self) -> Vec<usize> {
        (0..self.p).filter(|&j| self.col_norms_sq[j] > 0.0).collect()
    }

    /// `X β`
    pub fn predict(&self, beta: &[f64]) -> Vec<f64> {
        assert_eq!(beta.len(), self.p);
        let mut out = vec![0.0; self.n];
        for (j, &b) in beta.iter().enumerate() {
            if b != 0.0 {
                linalg::axpy(b, self.column(j), &mut out);
            }
        }
        out
    }

    /// `y − X β`, computed from scratch.
    pub fn residual(&self, beta: &[f64]) -> Vec<f64> {
        let mut r = self.y.clone();
        for (j, &b) in beta.iter().enumerate() {
            if b != 0.0 {
                linalg::axpy(-b, self.column(j), &mut r);
            }
        }
        r
    }

    /// `X^T v`
    pub fn xt_dot(&self, v: &[f64]) -> Vec<f64> {
        self.columns().map(|c| linalg::dot(c, v)).collect()
    }

    /// New dataset keeping only the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Result<Self> {
        let m = rows.len();
        let mut x = Vec::with_capacity(m * self.p);
        for col in self.columns() {
            x.extend(rows.iter().map(|&i| col[i]));
        }
        let y = rows.iter().map(|&i| self.y[i]).collect();
        Self::from_columns(m, self.p, x, y)
    }
}
