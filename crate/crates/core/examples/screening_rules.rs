//! Apply both safe rules by hand from a rough iterate.

use sclasso::screening::{self, BoundPair, SafeSphere};
use sclasso::{data, problem, solver, SolverConfig, Screening};

fn main() -> sclasso::Result<()> {
    let syn = data::generate(&data::SyntheticSpec::benchmark(2))?;
    let ds = &syn.dataset;
    let sigma0 = problem::default_sigma0(ds);
    let lambda = 0.7 * problem::lambda_max(ds, sigma0);

    for sweeps in [10, 100, 1000] {
        let cfg = SolverConfig::new(lambda, sigma0)?
            .with_max_sweeps(sweeps)
            .with_eps(1e-300)
            .with_screening(Screening::None);
        let rough = solver::fit(ds, &cfg, None)?;
        let dual = problem::dual_feasible_point(ds, &rough.beta, lambda, sigma0);
        let primal = problem::primal_objective(ds, &rough.beta, rough.sigma, lambda, sigma0)?;
        let dval = problem::dual_objective(ds, &dual.theta, lambda, sigma0);

        let sphere = SafeSphere::from_gap(dual.theta.clone(), primal - dval, lambda, sigma0, ds.n());
        let by_sphere = screening::gap_safe_screen(ds, &sphere);
        let bounds = BoundPair::new(dval, primal, ds.y_norm(), ds.n(), sigma0);
        let by_bounds = screening::bound_safe_screen(ds, &bounds, lambda);
        println!(
            "after {sweeps:>4} sweeps: gap = {:.2e}, sphere discards {:>3}/{}, bounds discard {:>3}/{}",
            primal - dval,
            by_sphere.len(),
            ds.p(),
            by_bounds.len(),
            ds.p()
        );
    }
    Ok(())
}
