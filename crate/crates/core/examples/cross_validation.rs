//! Five-fold selection of the regularization parameter.

use sclasso::data::{self, SyntheticSpec};
use sclasso::estimators::{self, CvConfig, CvMethod};
use sclasso::PathSpec;

fn main() -> sclasso::Result<()> {
    let syn = data::generate(&SyntheticSpec::benchmark(5))?;
    let ds = &syn.dataset;
    let cfg = CvConfig {
        grid: PathSpec::new(30, 2.0),
        ..CvConfig::default()
    };
    for method in [CvMethod::SmoothedConcomitant, CvMethod::Lasso] {
        let sel = estimators::cv_select(ds, &cfg, method)?;
        let ls = estimators::cv_ls_sigma(ds, &sel)?;
        println!(
            "{method:?}: lambda_cv = {:.4} (index {}), cv mse = {:.4}, sigma = {:.4}, refit sigma = {:.4}, |support| = {}",
            sel.lambda_cv,
            sel.best,
            sel.scores[sel.best],
            sel.estimate.sigma,
            ls.sigma,
            ls.support_size
        );
    }
    Ok(())
}
