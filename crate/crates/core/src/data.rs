//! Synthetic benchmark data and file formats.
//!
//! Synthetic designs have i.i.d. Gaussian rows with Toeplitz covariance
//! `Σ_ij = ρ^|i−j|`, sampled through the AR(1) recursion
//! `x_1 = z_1`, `x_j = ρ x_{j−1} + √(1−ρ²) z_j`, which realizes `Σ` exactly.
//!
//! Randomness comes from ChaCha8 with one stream per component, so the
//! design, the coefficients, the zero mask and the noise can each be
//! reproduced independently from the seed:
//!
//! | stream | component            |
//! |--------|----------------------|
//! | 0      | design rows          |
//! | 1      | Laplace coefficients |
//! | 2      | zero mask            |
//! | 3      | noise                |
//!
//! CSV files hold `y` in the first column and the `p` design columns after
//! it, with an optional header row.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};

pub const STREAM_DESIGN: u64 = 0;
pub const STREAM_COEFFICIENTS: u64 = 1;
pub const STREAM_MASK: u64 = 2;
pub const STREAM_NOISE: u64 = 3;

/// Generator for stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Child seed for replication `index`, independent of scheduling.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finalizer over the pair
    let mut z = seed
        .wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n: usize,
    pub p: usize,
    /// Correlation between neighbouring features, in `[0, 1)`.
    pub rho: f64,
    pub snr: f64,
    /// Fraction of coefficients set to zero, in `[0, 1]`.
    pub s: f64,
    pub sigma_star: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    /// The benchmark setting n = 100, p = 500, ρ = 0.6, snr = 5, s = 0.9.
    pub fn benchmark(seed: u64) -> Self {
        Self {
            n: 100,
            p: 500,
            rho: 0.6,
            snr: 5.0,
            s: 0.9,
            sigma_star: 1.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.p == 0 {
            return Err(Error::InvalidConfig("n and p must be >= 1".into()));
        }
        if !(0.0..1.0).contains(&self.rho) {
            return Err(Error::InvalidConfig(format!("rho must lie in [0, 1), got {}", self.rho)));
        }
        if !(self.snr.is_finite() && self.snr > 0.0) {
            return Err(Error::InvalidConfig(format!("snr must be > 0, got {}", self.snr)));
        }
        if !(0.0..=1.0).contains(&self.s) {
            return Err(Error::InvalidConfig(format!("s must lie in [0, 1], got {}", self.s)));
        }
        if !(self.sigma_star.is_finite() && self.sigma_star > 0.0) {
            return Err(Error::InvalidConfig("sigma_star must be > 0".into()));
        }
        Ok(())
    }

    /// `⌊s·p⌋`
    pub fn n_zeros(&self) -> usize {
        // the nudge keeps products like 0.29 * 100 from rounding down
        ((self.s * self.p as f64) + 1e-9).floor() as usize
    }
}

#[derive(Debug, Clone)]
pub struct Synthetic {
    pub dataset: Dataset,
    pub beta_star: Vec<f64>,
    /// Indices of nonzero true coefficients, ascending.
    pub support: Vec<usize>,
}

/// `β^T Σ β` for `Σ_ij = ρ^|i−j|`, in O(p) with two recursions.
pub fn ar1_quadratic_form(beta: &[f64], rho: f64) -> f64 {
    let p = beta.len();
    let mut fwd = vec![0.0; p];
    let mut acc = 0.0;
    for j in 0..p {
        acc = beta[j] + rho * acc;
        fwd[j] = acc;
    }
    let mut total = 0.0;
    let mut bwd = 0.0;
    for j in (0..p).rev() {
        bwd = beta[j] + rho * bwd;
        // (Σβ)_j = fwd_j + bwd_j − β_j
        total += beta[j] * (fwd[j] + bwd - beta[j]);
    }
    total
}

/// Draws `y = Xβ* + σ*ε` with `β* = αβ` scaled to the requested snr.
pub fn generate(spec: &SyntheticSpec) -> Result<Synthetic> {
    spec.validate()?;
    let (n, p) = (spec.n, spec.p);

    let mut rng = stream_rng(spec.seed, STREAM_DESIGN);
    let innov = (1.0 - spec.rho * spec.rho).sqrt();
    let mut x = vec![0.0; n * p];
    for i in 0..n {
        let mut prev = 0.0;
        for j in 0..p {
            let z: f64 = rng.sample(StandardNormal);
            let v = if j == 0 { z } else { spec.rho * prev + innov * z };
            x[j * n + i] = v;
            prev = v;
        }
    }

    let mut rng = stream_rng(spec.seed, STREAM_COEFFICIENTS);
    let mut beta: Vec<f64> = (0..p)
        .map(|_| {
            let e: f64 = rng.sample(Exp1);
            if rng.gen::<bool>() {
                e
            } else {
                -e
            }
        })
        .collect();

    let mut rng = stream_rng(spec.seed, STREAM_MASK);
    for j in index::sample(&mut rng, p, spec.n_zeros().min(p)) {
        beta[j] = 0.0;
    }

    let quad = ar1_quadratic_form(&beta, spec.rho);
    if !(quad > 0.0) {
        return Err(Error::InvalidConfig(
            "all coefficients are zero; snr scaling is undefined (s must be < 1)".into(),
        ));
    }
    let alpha = (spec.snr * spec.sigma_star * spec.sigma_star / quad).sqrt();
    let beta_star: Vec<f64> = beta.iter().map(|b| alpha * b).collect();
    let support: Vec<usize> = (0..p).filter(|&j| beta_star[j] != 0.0).collect();

    let mut rng = stream_rng(spec.seed, STREAM_NOISE);
    let mut y = vec![0.0; n];
    for (i, yi) in y.iter_mut().enumerate() {
        let eps: f64 = rng.sample(StandardNormal);
        *yi = spec.sigma_star * eps;
        for &j in &support {
            *yi += x[j * n + i] * beta_star[j];
        }
    }

    let dataset = Dataset::from_columns(n, p, x, y)?;
    Ok(Synthetic {
        dataset,
        beta_star,
        support,
    })
}

/// Reads a dataset from CSV (see the module docs for the layout).
pub fn load_csv(path: impl AsRef<Path>) -> Result<Dataset> {
    parse_csv(BufReader::new(File::open(path)?))
}

pub fn parse_csv<R: Read>(reader: R) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width: Option<usize> = None;
    for (idx, record) in rdr.records().enumerate() {
        let row = idx + 1;
        let record = record.map_err(|e| Error::Parse {
            row,
            col: None,
            msg: e.to_string(),
        })?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: Vec<std::result::Result<f64, _>> =
            record.iter().map(str::parse::<f64>).collect();
        if idx == 0 && parsed.iter().any(|v| v.is_err()) {
            // header row
            width = Some(record.len());
            continue;
        }
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(Error::Parse {
                row,
                col: None,
                msg: format!("expected {expected} fields, found {}", record.len()),
            });
        }
        let mut values = Vec::with_capacity(expected);
        for (col, v) in parsed.into_iter().enumerate() {
            match v {
                Ok(v) if v.is_finite() => values.push(v),
                _ => {
                    return Err(Error::Parse {
                        row,
                        col: Some(col + 1),
                        msg: format!("not a finite number: '{}'", &record[col]),
                    })
                }
            }
        }
        rows.push(values);
    }

    if rows.is_empty() {
        return Err(Error::Parse {
            row: 0,
            col: None,
            msg: "no data rows".into(),
        });
    }
    let width = rows[0].len();
    if width < 2 {
        return Err(Error::Parse {
            row: 1,
            col: None,
            msg: "need a response column and at least one feature column".into(),
        });
    }
    let (n, p) = (rows.len(), width - 1);
    let y: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let mut x = vec![0.0; n * p];
    for (i, r) in rows.iter().enumerate() {
        for j in 0..p {
            x[j * n + i] = r[j + 1];
        }
    }
    Dataset::from_columns(n, p, x, y)
}

/// Writes `y, x_1, …, x_p` per row with 17 significant digits.
pub fn save_csv(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_csv(ds, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn write_csv<W: Write>(ds: &Dataset, w: &mut W) -> Result<()> {
    let mut line = String::new();
    for i in 0..ds.n() {
        line.clear();
        line.push_str(&format!("{:.16e}", ds.y()[i]));
        for j in 0..ds.p() {
            line.push_str(&format!(",{:.16e}", ds.value(i, j)));
        }
        line.push('\n');
        w.write_all(line.as_bytes())?;
    }
    Ok(())
}

/// Writes one JSON object per line.
pub fn save_results_json<T: Serialize>(records: &[T], path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_json_lines(records, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn write_json_lines<T: Serialize, W: Write>(records: &[T], w: &mut W) -> Result<()> {
    for rec in records {
        serde_json::to_writer(&mut *w, rec)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// Reads JSON lines back as untyped values, skipping blank lines.
pub fn read_json_lines(path: impl AsRef<Path>) -> Result<Vec<serde_json::Value>> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if !line.trim().is_empty() {
            out.push(serde_json::from_str(&line)?);
        }
    }
    Ok(out)
}
