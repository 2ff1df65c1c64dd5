//! Command-line front end.
//!
//! Every subcommand writes JSON lines: a metadata line holding the resolved
//! configuration, seed, grid and library version, then one record per run.
//! Exit codes: 0 on success, 1 on input errors, 2 on numerical degeneracy
//! (an error record is still written).

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::data::{self, SyntheticSpec};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::estimators::{self, CvConfig, CvMethod, Method};
use crate::problem::{self, Screening, SolverConfig};
use crate::solver::{self, PathSpec};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// How the SZ parameter is tuned, recorded in sigma-bench metadata.
const SZ_NOTE: &str =
    "scaled Lasso with lambda chosen by cross-validation on the smoothed concomitant grid";

#[derive(Debug, Parser)]
#[command(name = "sclasso", version, about = "Smoothed Concomitant Lasso solver and benchmarks")]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic dataset (CSV) and its ground truth (JSON).
    Gen(GenArgs),
    /// Solve at a single regularization parameter.
    Solve(SolveArgs),
    /// Solve along a geometric grid of regularization parameters.
    Path(PathArgs),
    /// Cross-validate the regularization parameter and estimate the noise level.
    Cv(CvArgs),
    /// Compare noise-level estimators over synthetic replications.
    SigmaBench(SigmaBenchArgs),
    /// Time full regularization paths under each screening mode.
    ScreenBench(ScreenBenchArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SyntheticArgs {
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value_t = 500)]
    pub p: usize,
    #[arg(long, default_value_t = 0.6)]
    pub rho: f64,
    #[arg(long, default_value_t = 5.0)]
    pub snr: f64,
    /// Fraction of zero coefficients.
    #[arg(long, default_value_t = 0.9)]
    pub s: f64,
    #[arg(long = "sigma-star", default_value_t = 1.0)]
    pub sigma_star: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl SyntheticArgs {
    fn spec(&self, seed: u64) -> SyntheticSpec {
        SyntheticSpec {
            n: self.n,
            p: self.p,
            rho: self.rho,
            snr: self.snr,
            s: self.s,
            sigma_star: self.sigma_star,
            seed,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GenArgs {
    #[command(flatten)]
    pub synthetic: SyntheticArgs,
    /// Output directory; receives data.csv and truth.json.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SolveArgs {
    /// CSV file with y in the first column.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Noise floor; defaults to ‖y‖/√n · 1e-2.
    #[arg(long)]
    pub sigma0: Option<f64>,
    #[arg(long, default_value_t = SolverConfig::DEFAULT_EPS)]
    pub eps: f64,
    #[arg(long = "max-sweeps", default_value_t = SolverConfig::DEFAULT_MAX_SWEEPS)]
    pub max_sweeps: usize,
    /// none, gap, bound or gap++.
    #[arg(long, default_value = "gap")]
    pub screening: String,
    /// Output file (JSON lines); stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PathArgs {
    #[command(flatten)]
    pub solve: SolveArgs,
    /// Number of grid points.
    #[arg(long = "T", default_value_t = 100)]
    pub n_lambdas: usize,
    /// Decades spanned below the critical parameter.
    #[arg(long, default_value_t = 2.0)]
    pub delta: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CvArgs {
    #[arg(long)]
    pub data: PathBuf,
    /// sc or lasso.
    #[arg(long, default_value = "sc")]
    pub method: String,
    #[arg(long, default_value_t = 5)]
    pub folds: usize,
    #[arg(long = "T", default_value_t = 100)]
    pub n_lambdas: usize,
    #[arg(long, default_value_t = 2.0)]
    pub delta: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SigmaBenchArgs {
    #[command(flatten)]
    pub synthetic: SyntheticArgs,
    #[arg(long, default_value_t = 50)]
    pub reps: usize,
    /// Comma-separated subset of OR,SC_CV,SC_LS,L_CV,L_LS,L_U,RCV,D2,SZ.
    #[arg(long, value_delimiter = ',', default_value = "OR,SC_CV,SC_LS,L_CV,L_LS,L_U,RCV,D2,SZ")]
    pub methods: Vec<String>,
    #[arg(long, default_value_t = 5)]
    pub folds: usize,
    #[arg(long = "T", default_value_t = 100)]
    pub n_lambdas: usize,
    #[arg(long, default_value_t = 2.0)]
    pub delta: f64,
    /// Worker threads; defaults to the number of processors.
    #[arg(long)]
    #[serde(skip)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ScreenBenchArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long = "eps-list", value_delimiter = ',', default_value = "1e-4,1e-6,1e-8")]
    pub eps_list: Vec<f64>,
    /// Comma-separated subset of none,gap,bound,gap++.
    #[arg(long, value_delimiter = ',', default_value = "none,gap,bound,gap++")]
    pub modes: Vec<String>,
    #[arg(long)]
    pub sigma0: Option<f64>,
    #[arg(long = "T", default_value_t = 100)]
    pub n_lambdas: usize,
    #[arg(long, default_value_t = 2.0)]
    pub delta: f64,
    #[arg(long = "max-sweeps", default_value_t = SolverConfig::DEFAULT_MAX_SWEEPS)]
    pub max_sweeps: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// One result line. Fields that do not apply are `null`; `extra` carries
/// subcommand-specific detail.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub method: String,
    pub n: usize,
    pub p: usize,
    pub rho: Option<f64>,
    pub snr: Option<f64>,
    pub s: Option<f64>,
    pub seed: Option<u64>,
    pub sigma_hat: Option<f64>,
    pub sigma_star: Option<f64>,
    pub support_size: Option<usize>,
    pub lambda: Option<f64>,
    pub wall_time_ms: f64,
    pub converged: Option<bool>,
    pub gap: Option<f64>,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

impl RunRecord {
    fn for_dataset(method: impl Into<String>, ds: &Dataset) -> Self {
        Self {
            method: method.into(),
            n: ds.n(),
            p: ds.p(),
            rho: None,
            snr: None,
            s: None,
            seed: None,
            sigma_hat: None,
            sigma_star: None,
            support_size: None,
            lambda: None,
            wall_time_ms: 0.0,
            converged: None,
            gap: None,
            extra: Map::new(),
        }
    }

    fn for_synthetic(method: Method, spec: &SyntheticSpec) -> Self {
        Self {
            method: method.name().to_string(),
            n: spec.n,
            p: spec.p,
            rho: Some(spec.rho),
            snr: Some(spec.snr),
            s: Some(spec.s),
            seed: Some(spec.seed),
            sigma_hat: None,
            sigma_star: Some(spec.sigma_star),
            support_size: None,
            lambda: None,
            wall_time_ms: 0.0,
            converged: None,
            gap: None,
            extra: Map::new(),
        }
    }
}

fn metadata(command: &str, config: &impl Serialize, seed: Option<u64>, grid: Option<&[f64]>) -> Value {
    json!({
        "metadata": {
            "command": command,
            "version": VERSION,
            "config": config,
            "seed": seed,
            "grid": grid,
        }
    })
}

fn error_record(err: &Error) -> Value {
    let kind = match err {
        Error::DegreesOfFreedom { .. } => "degrees_of_freedom",
        Error::DegenerateDesign(_) => "degenerate_design",
        _ => "input",
    };
    json!({ "error": { "kind": kind, "message": err.to_string() } })
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn open_out(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            Box::new(BufWriter::new(File::create(path)?))
        }
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn write_lines(out: Option<&Path>, lines: &[Value]) -> Result<()> {
    let mut w = open_out(out)?;
    for line in lines {
        serde_json::to_writer(&mut w, line)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

fn to_value(record: &impl Serialize) -> Value {
    serde_json::to_value(record).expect("records serialize")
}

/// Output of a subcommand: lines to write, and the error that stopped it.
struct Outcome {
    out: Option<PathBuf>,
    lines: Vec<Value>,
    error: Option<Error>,
}

fn parse_screening(s: &str) -> Result<Screening> {
    s.parse()
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("--{name} must be > 0, got {v}")))
    }
}

fn solver_config(ds: &Dataset, args: &SolveArgs, lambda: f64) -> Result<SolverConfig> {
    let sigma0 = match args.sigma0 {
        Some(s) => {
            check_positive("sigma0", s)?;
            s
        }
        None => problem::default_sigma0(ds),
    };
    let cfg = SolverConfig::new(lambda, sigma0)?
        .with_eps(args.eps)
        .with_max_sweeps(args.max_sweeps)
        .with_screening(parse_screening(&args.screening)?);
    cfg.validate()?;
    Ok(cfg)
}

fn fit_record(method: &str, ds: &Dataset, fit: &solver::FitResult, wall_ms: f64) -> RunRecord {
    let mut rec = RunRecord::for_dataset(method, ds);
    rec.sigma_hat = Some(fit.sigma);
    rec.support_size = Some(fit.support().len());
    rec.lambda = Some(fit.lambda);
    rec.wall_time_ms = wall_ms;
    rec.converged = Some(fit.converged);
    rec.gap = Some(fit.gap);
    rec.extra.insert("sweeps".into(), json!(fit.sweeps));
    rec
}

fn run_gen(args: &GenArgs) -> Result<Outcome> {
    let spec = args.synthetic.spec(args.synthetic.seed);
    spec.validate()?;
    let syn = data::generate(&spec)?;
    fs::create_dir_all(&args.out)?;
    data::save_csv(&syn.dataset, args.out.join("data.csv"))?;
    let truth = json!({
        "metadata": metadata("gen", args, Some(spec.seed), None)["metadata"],
        "spec": spec,
        "beta_star": syn.beta_star,
        "support": syn.support,
        "sigma_star": spec.sigma_star,
    });
    let mut w = BufWriter::new(File::create(args.out.join("truth.json"))?);
    serde_json::to_writer_pretty(&mut w, &truth)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(Outcome {
        out: None,
        lines: Vec::new(),
        error: None,
    })
}

fn run_solve(args: &SolveArgs) -> Result<Outcome> {
    let lambda = args
        .lambda
        .ok_or_else(|| Error::InvalidConfig("--lambda is required".into()))?;
    check_positive("lambda", lambda)?;
    let ds = data::load_csv(&args.data)?;
    let cfg = solver_config(&ds, args, lambda)?;
    let mut lines = vec![metadata("solve", &json!({ "args": args, "solver": cfg }), None, Some(&[lambda]))];
    let start = Instant::now();
    let fit = solver::fit(&ds, &cfg, None)?;
    let mut rec = fit_record("SC", &ds, &fit, ms(start));
    rec.extra.insert("beta".into(), json!(fit.beta));
    lines.push(to_value(&rec));
    Ok(Outcome {
        out: args.out.clone(),
        lines,
        error: None,
    })
}

fn run_path(args: &PathArgs) -> Result<Outcome> {
    let ds = data::load_csv(&args.solve.data)?;
    let cfg = solver_config(&ds, &args.solve, 1.0)?;
    let spec = PathSpec::new(args.n_lambdas, args.delta);
    let grid = spec.grid(problem::lambda_max(&ds, cfg.sigma0))?;
    let mut lines = vec![metadata(
        "path",
        &json!({ "args": args, "solver": cfg }),
        None,
        Some(&grid),
    )];
    let path = solver::fit_path(&ds, &cfg, &spec)?;
    let per_lambda_ms = path.wall_time.as_secs_f64() * 1e3 / path.fits.len() as f64;
    for (fit, warm) in path.fits.iter().zip(&path.warm_starts) {
        let mut rec = fit_record("SC", &ds, fit, per_lambda_ms);
        rec.extra.insert("warm_start".into(), json!(warm));
        lines.push(to_value(&rec));
    }
    Ok(Outcome {
        out: args.solve.out.clone(),
        lines,
        error: None,
    })
}

fn run_cv(args: &CvArgs) -> Result<Outcome> {
    let method = match args.method.to_ascii_lowercase().as_str() {
        "sc" => CvMethod::SmoothedConcomitant,
        "lasso" => CvMethod::Lasso,
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown cv method '{other}' (expected sc or lasso)"
            )))
        }
    };
    let ds = data::load_csv(&args.data)?;
    let cfg = CvConfig {
        folds: args.folds,
        grid: PathSpec::new(args.n_lambdas, args.delta),
        seed: args.seed,
        ..CvConfig::default()
    };
    let mut outcome = Outcome {
        out: args.out.clone(),
        lines: vec![metadata("cv", &json!({ "args": args, "cv": cfg }), Some(args.seed), None)],
        error: None,
    };
    let start = Instant::now();
    let sel = match estimators::cv_select(&ds, &cfg, method) {
        Ok(sel) => sel,
        Err(e) => {
            outcome.error = Some(e);
            return Ok(outcome);
        }
    };
    outcome.lines[0]["metadata"]["grid"] = json!(sel.lambdas);
    let cv_ms = ms(start);
    let mut rec = RunRecord::for_dataset(sel.estimate.method.name(), &ds);
    rec.seed = Some(args.seed);
    rec.sigma_hat = Some(sel.estimate.sigma);
    rec.support_size = Some(sel.estimate.support_size);
    rec.lambda = Some(sel.lambda_cv);
    rec.wall_time_ms = cv_ms;
    rec.extra.insert("scores".into(), json!(sel.scores));
    outcome.lines.push(to_value(&rec));

    let start = Instant::now();
    match estimators::cv_ls_sigma(&ds, &sel) {
        Ok(est) => {
            let mut rec = RunRecord::for_dataset(est.method.name(), &ds);
            rec.seed = Some(args.seed);
            rec.sigma_hat = Some(est.sigma);
            rec.support_size = Some(est.support_size);
            rec.lambda = Some(sel.lambda_cv);
            rec.wall_time_ms = cv_ms + ms(start);
            outcome.lines.push(to_value(&rec));
        }
        Err(e) => outcome.error = Some(e),
    }
    Ok(outcome)
}

/// Estimates for one synthetic replication, one entry per requested method
/// in request order. Failures are returned in place of the record.
pub fn run_replication(
    spec: &SyntheticSpec,
    methods: &[Method],
    cv: &CvConfig,
) -> Result<Vec<std::result::Result<RunRecord, (Method, Error)>>> {
    let syn = data::generate(spec)?;
    let ds = &syn.dataset;
    let cv = CvConfig {
        seed: spec.seed,
        ..cv.clone()
    };
    let mut sc_sel: Option<(std::result::Result<estimators::CvSelection, Error>, f64)> = None;
    let mut lasso_sel: Option<(std::result::Result<estimators::CvSelection, Error>, f64)> = None;
    let mut out = Vec::with_capacity(methods.len());

    for &method in methods {
        let start = Instant::now();
        let mut carried_ms = 0.0;
        let result: Result<estimators::NoiseEstimate> = match method {
            Method::Oracle => estimators::oracle_sigma(ds, &syn.support),
            Method::ScCv | Method::ScLs | Method::LassoCv | Method::LassoLs => {
                let (slot, kind) = if matches!(method, Method::ScCv | Method::ScLs) {
                    (&mut sc_sel, CvMethod::SmoothedConcomitant)
                } else {
                    (&mut lasso_sel, CvMethod::Lasso)
                };
                match slot {
                    // reuse the selection and charge its cost to this method too
                    Some((_, sel_ms)) => carried_ms = *sel_ms,
                    None => {
                        let t = Instant::now();
                        let sel = estimators::cv_select(ds, &cv, kind);
                        *slot = Some((sel, ms(t)));
                    }
                }
                let (sel, _) = slot.as_ref().expect("filled above");
                match sel {
                    Err(e) => Err(clone_error(e)),
                    Ok(sel) if matches!(method, Method::ScCv | Method::LassoCv) => Ok(sel.estimate.clone()),
                    Ok(sel) => estimators::cv_ls_sigma(ds, sel),
                }
            }
            Method::LassoUniversal => estimators::universal_lasso_sigma(ds),
            Method::Rcv => estimators::rcv_sigma(ds, &cv, spec.seed),
            Method::Dicker => estimators::dicker_sigma(ds),
            Method::Sz => estimators::sz_sigma(ds, &cv),
        };
        let wall = ms(start) + carried_ms;
        out.push(match result {
            Ok(est) => {
                let mut rec = RunRecord::for_synthetic(method, spec);
                rec.sigma_hat = Some(est.sigma);
                rec.support_size = Some(est.support_size);
                rec.lambda = est.lambda_selected;
                rec.wall_time_ms = wall;
                if est.clamped {
                    rec.extra.insert("clamped".into(), json!(true));
                }
                Ok(rec)
            }
            Err(e) => Err((method, e)),
        });
    }
    Ok(out)
}

fn clone_error(e: &Error) -> Error {
    match e {
        Error::DegreesOfFreedom { n, support } => Error::DegreesOfFreedom {
            n: *n,
            support: *support,
        },
        Error::DegenerateDesign(m) => Error::DegenerateDesign(m.clone()),
        other => Error::InvalidConfig(other.to_string()),
    }
}

fn run_sigma_bench(args: &SigmaBenchArgs) -> Result<Outcome> {
    let methods = args
        .methods
        .iter()
        .map(|m| m.trim().parse::<Method>())
        .collect::<Result<Vec<_>>>()?;
    if methods.is_empty() {
        return Err(Error::InvalidConfig("--methods is empty".into()));
    }
    if args.reps == 0 {
        return Err(Error::InvalidConfig("--reps must be >= 1".into()));
    }
    args.synthetic.spec(args.synthetic.seed).validate()?;
    let cv = CvConfig {
        folds: args.folds,
        grid: PathSpec::new(args.n_lambdas, args.delta),
        ..CvConfig::default()
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = args.jobs {
        if jobs == 0 {
            return Err(Error::InvalidConfig("--jobs must be >= 1".into()));
        }
        builder = builder.num_threads(jobs);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;

    let per_rep: Vec<_> = pool.install(|| {
        (0..args.reps)
            .into_par_iter()
            .map(|rep| {
                let spec = args.synthetic.spec(data::derive_seed(args.synthetic.seed, rep as u64));
                (rep, run_replication(&spec, &methods, &cv))
            })
            .collect()
    });

    let mut outcome = Outcome {
        out: args.out.clone(),
        lines: vec![metadata(
            "sigma-bench",
            &json!({
                "args": args,
                "cv": cv,
                "notes": { "SZ": SZ_NOTE },
            }),
            Some(args.synthetic.seed),
            None,
        )],
        error: None,
    };
    for (rep, result) in per_rep {
        for entry in result? {
            match entry {
                Ok(mut rec) => {
                    rec.extra.insert("rep".into(), json!(rep));
                    outcome.lines.push(to_value(&rec));
                }
                Err((method, e)) => {
                    let mut line = error_record(&e);
                    line["method"] = json!(method.name());
                    line["rep"] = json!(rep);
                    outcome.lines.push(line);
                    if e.is_numerical() && outcome.error.is_none() {
                        outcome.error = Some(e);
                    } else if !e.is_numerical() {
                        return Err(e);
                    }
                }
            }
        }
    }
    Ok(outcome)
}

fn run_screen_bench(args: &ScreenBenchArgs) -> Result<Outcome> {
    let modes = args
        .modes
        .iter()
        .map(|m| parse_screening(m.trim()))
        .collect::<Result<Vec<_>>>()?;
    if modes.is_empty() || args.eps_list.is_empty() {
        return Err(Error::InvalidConfig("--modes and --eps-list must be non-empty".into()));
    }
    let ds = data::load_csv(&args.data)?;
    let sigma0 = match args.sigma0 {
        Some(s) => {
            check_positive("sigma0", s)?;
            s
        }
        None => problem::default_sigma0(&ds),
    };
    let spec = PathSpec::new(args.n_lambdas, args.delta);
    let grid = spec.grid(problem::lambda_max(&ds, sigma0))?;
    let mut lines = vec![metadata(
        "screen-bench",
        &json!({ "args": args, "sigma0": sigma0 }),
        None,
        Some(&grid),
    )];
    for &eps in &args.eps_list {
        for &mode in &modes {
            let cfg = SolverConfig::new(grid[0], sigma0)?
                .with_eps(eps)
                .with_max_sweeps(args.max_sweeps)
                .with_screening(mode);
            let path = solver::fit_path(&ds, &cfg, &spec)?;
            let final_fractions: Vec<f64> = path
                .fits
                .iter()
                .map(|f| f.screened_fraction_trace.last().map_or(0.0, |&(_, v)| v))
                .collect();
            lines.push(json!({
                "mode": mode.as_str(),
                "eps": eps,
                "n": ds.n(),
                "p": ds.p(),
                "n_lambdas": grid.len(),
                "wall_time_ms": path.wall_time.as_secs_f64() * 1e3,
                "total_sweeps": path.fits.iter().map(|f| f.sweeps).sum::<usize>(),
                "presolve_sweeps": path.presolve_sweeps.iter().sum::<usize>(),
                "converged": path.fits.iter().all(|f| f.converged),
                "max_gap": path.fits.iter().map(|f| f.gap).fold(0.0, f64::max),
                "screened_fraction": final_fractions,
            }));
        }
    }
    Ok(Outcome {
        out: args.out.clone(),
        lines,
        error: None,
    })
}

fn dispatch(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Gen(a) => run_gen(a),
        Command::Solve(a) => run_solve(a),
        Command::Path(a) => run_path(a),
        Command::Cv(a) => run_cv(a),
        Command::SigmaBench(a) => run_sigma_bench(a),
        Command::ScreenBench(a) => run_screen_bench(a),
    }
}

fn out_path(cmd: &Command) -> Option<&Path> {
    match cmd {
        Command::Gen(_) => None,
        Command::Solve(a) => a.out.as_deref(),
        Command::Path(a) => a.solve.out.as_deref(),
        Command::Cv(a) => a.out.as_deref(),
        Command::SigmaBench(a) => a.out.as_deref(),
        Command::ScreenBench(a) => a.out.as_deref(),
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match CliConfig::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (err, lines, out) = match dispatch(&cli.command) {
        Ok(o) => (o.error, o.lines, o.out),
        Err(e) => (Some(e), Vec::new(), out_path(&cli.command).map(Path::to_path_buf)),
    };
    match err {
        None => match write_lines(out.as_deref(), &lines) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("error: {e}");
                1
            }
        },
        Some(e) if e.is_numerical() => {
            let mut lines = lines;
            if !lines.iter().any(|l| l.get("error").is_some()) {
                lines.push(error_record(&e));
            }
            if let Err(w) = write_lines(out.as_deref(), &lines) {
                eprintln!("error: {w}");
            }
            eprintln!("error: {e}");
            2
        }
        Some(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
