//! Full regularization path under every screening mode.

use sclasso::{data, problem, solver, PathSpec, Screening, SolverConfig};

fn main() -> sclasso::Result<()> {
    let eps: f64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("eps"))
        .unwrap_or(1e-8);
    let syn = data::generate(&data::SyntheticSpec::benchmark(0))?;
    let ds = &syn.dataset;
    let sigma0 = problem::default_sigma0(ds);
    let spec = PathSpec::default();

    println!("eps = {eps:e}, T = {}, delta = {}", spec.n_lambdas, spec.delta);
    for mode in Screening::ALL {
        let cfg = SolverConfig::new(1.0, sigma0)?.with_eps(eps).with_screening(mode);
        let path = solver::fit_path(ds, &cfg, &spec)?;
        let sweeps: usize = path.fits.iter().map(|f| f.sweeps).sum();
        let last = path.fits.last().expect("non-empty path");
        println!(
            "{:>6}: {:>8.1} ms, {sweeps:>6} sweeps, last |support| = {}, last sigma = {:.4}",
            mode.as_str(),
            path.wall_time.as_secs_f64() * 1e3,
            last.support().len(),
            last.sigma
        );
    }
    Ok(())
}
