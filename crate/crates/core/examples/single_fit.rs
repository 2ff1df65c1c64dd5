//! Fit one problem and inspect its certificate.

use sclasso::{data, problem, solver, Screening, SolverConfig};

fn main() -> sclasso::Result<()> {
    let syn = data::generate(&data::SyntheticSpec::benchmark(1))?;
    let ds = &syn.dataset;
    let sigma0 = problem::default_sigma0(ds);
    let lambda_max = problem::lambda_max(ds, sigma0);
    println!("n = {}, p = {}, sigma0 = {sigma0:.4e}, lambda_max = {lambda_max:.4}", ds.n(), ds.p());

    let cfg = SolverConfig::new(0.2 * lambda_max, sigma0)?
        .with_eps(1e-8)
        .with_screening(Screening::GapSafe);
    let fit = solver::fit(ds, &cfg, None)?;
    println!(
        "converged = {}, sweeps = {}, gap = {:.3e}, sigma = {:.4}, |support| = {}",
        fit.converged,
        fit.sweeps,
        fit.gap,
        fit.sigma,
        fit.support().len()
    );

    let primal = problem::primal_objective(ds, &fit.beta, fit.sigma, cfg.lambda, sigma0)?;
    let dual = problem::dual_feasible_point(ds, &fit.beta, cfg.lambda, sigma0);
    let d = problem::dual_objective(ds, &dual.theta, cfg.lambda, sigma0);
    println!("primal = {primal:.10}, dual = {d:.10}, feasible = {}", dual.feasible);

    for (sweep, frac) in &fit.screened_fraction_trace {
        println!("sweep {sweep:>4}: {:.1}% of features screened", 100.0 * frac);
    }
    Ok(())
}
