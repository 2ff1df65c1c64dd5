//! Generate a synthetic dataset, write it as CSV and read it back.

use sclasso::data::{self, SyntheticSpec};

fn main() -> sclasso::Result<()> {
    let spec = SyntheticSpec {
        n: 50,
        p: 20,
        rho: 0.5,
        snr: 3.0,
        s: 0.5,
        sigma_star: 0.5,
        seed: 42,
    };
    let syn = data::generate(&spec)?;
    let quad = data::ar1_quadratic_form(&syn.beta_star, spec.rho);
    println!(
        "support size = {}, beta^T Sigma beta = {quad:.4}, signal/noise variance = {:.4}",
        syn.support.len(),
        quad / spec.sigma_star.powi(2)
    );

    let dir = std::env::temp_dir().join("sclasso-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("data.csv");
    data::save_csv(&syn.dataset, &path)?;
    let back = data::load_csv(&path)?;
    println!("wrote {} and read back n = {}, p = {}", path.display(), back.n(), back.p());
    assert_eq!(back.y(), syn.dataset.y());
    assert_eq!(back.x(), syn.dataset.x());
    Ok(())
}
