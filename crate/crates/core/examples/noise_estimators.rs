//! Every noise-level estimator on one synthetic replication.

use sclasso::data::{self, SyntheticSpec};
use sclasso::estimators::{self, CvConfig, CvMethod};

fn main() -> sclasso::Result<()> {
    let seed = std::env::args().nth(1).map_or(3, |s| s.parse().expect("seed"));
    let syn = data::generate(&SyntheticSpec::benchmark(seed))?;
    let ds = &syn.dataset;
    let cv = CvConfig {
        seed,
        ..CvConfig::default()
    };

    let sc = estimators::cv_select(ds, &cv, CvMethod::SmoothedConcomitant)?;
    let lasso = estimators::cv_select(ds, &cv, CvMethod::Lasso)?;
    let results = [
        estimators::oracle_sigma(ds, &syn.support),
        Ok(sc.estimate.clone()),
        estimators::cv_ls_sigma(ds, &sc),
        Ok(lasso.estimate.clone()),
        estimators::cv_ls_sigma(ds, &lasso),
        estimators::universal_lasso_sigma(ds),
        estimators::rcv_sigma(ds, &cv, seed),
        estimators::dicker_sigma(ds),
        estimators::sz_sigma(ds, &cv),
    ];
    println!("true sigma = 1");
    for r in results {
        match r {
            Ok(e) => println!("{:>6}: sigma = {:.4}, |support| = {}", e.method, e.sigma, e.support_size),
            Err(e) => println!("failed: {e}"),
        }
    }
    Ok(())
}
