use approx::assert_abs_diff_eq;
use sclasso::data::{self, SyntheticSpec};
use sclasso::{Dataset, Error};

fn spec(n: usize, p: usize, rho: f64, seed: u64) -> SyntheticSpec {
    SyntheticSpec {
        n,
        p,
        rho,
        snr: 5.0,
        s: 0.9,
        sigma_star: 1.0,
        seed,
    }
}

#[test]
fn snr_identity_holds() {
    for (rho, seed) in [(0.0, 1), (0.6, 2), (0.95, 3)] {
        let syn = data::generate(&spec(50, 200, rho, seed)).unwrap();
        let b = &syn.beta_star;
        let mut quad = 0.0;
        for i in 0..b.len() {
            for j in 0..b.len() {
                quad += b[i] * b[j] * rho.powi((i as i32 - j as i32).abs());
            }
        }
        assert_abs_diff_eq!(quad, 5.0, epsilon = 1e-10);
        assert_eq!(syn.support.len(), 20);
    }
}

#[test]
fn design_columns_have_unit_variance() {
    let ds = data::generate(&spec(1000, 20, 0.0, 4)).unwrap().dataset;
    for j in 0..20 {
        let var = ds.col_norm_sq(j) / 1000.0;
        assert!((0.9..=1.1).contains(&var), "column {j}: {var}");
    }
}

#[test]
fn design_has_ar1_correlation() {
    let ds = data::generate(&spec(4000, 6, 0.6, 5)).unwrap().dataset;
    let cov = |a: usize, b: usize| {
        ds.column(a).iter().zip(ds.column(b)).map(|(x, y)| x * y).sum::<f64>() / 4000.0
    };
    for lag in 0..4 {
        assert_abs_diff_eq!(cov(1, 1 + lag), 0.6f64.powi(lag as i32), epsilon = 0.05);
    }
}

#[test]
fn generation_is_deterministic() {
    let a = data::generate(&spec(30, 40, 0.5, 7)).unwrap();
    let b = data::generate(&spec(30, 40, 0.5, 7)).unwrap();
    assert_eq!(a.dataset, b.dataset);
    assert_eq!(a.beta_star, b.beta_star);
    let c = data::generate(&spec(30, 40, 0.5, 8)).unwrap();
    assert_ne!(a.dataset, c.dataset);
}

#[test]
fn all_zero_coefficients_rejected() {
    let err = data::generate(&SyntheticSpec { s: 1.0, ..spec(10, 10, 0.0, 0) }).unwrap_err();
    assert!(matches!(err, Error::InvalidConfig(_)));
}

#[test]
fn invalid_specs_rejected() {
    for bad in [
        SyntheticSpec { rho: 1.0, ..spec(10, 10, 0.0, 0) },
        SyntheticSpec { snr: 0.0, ..spec(10, 10, 0.0, 0) },
        SyntheticSpec { s: 1.5, ..spec(10, 10, 0.0, 0) },
        SyntheticSpec { n: 0, ..spec(10, 10, 0.0, 0) },
    ] {
        assert!(data::generate(&bad).is_err());
    }
}

#[test]
fn csv_examples() {
    let ds = data::parse_csv("y,x1,x2\n1,2,3\n4,5,6\n".as_bytes()).unwrap();
    assert_eq!((ds.n(), ds.p()), (2, 2));
    assert_eq!(ds.y(), &[1.0, 4.0]);
    assert_eq!(ds.column(0), &[2.0, 5.0]);
    assert_eq!(ds.column(1), &[3.0, 6.0]);

    let no_header = data::parse_csv("1,2,3\n4,5,6\n".as_bytes()).unwrap();
    assert_eq!(no_header, ds);
}

#[test]
fn malformed_row_names_its_index() {
    let err = data::parse_csv("1,2,3\n4,oops,6\n".as_bytes()).unwrap_err();
    match err {
        Error::Parse { row, col, .. } => {
            assert_eq!(row, 2);
            assert_eq!(col, Some(2));
        }
        other => panic!("unexpected {other:?}"),
    }
    let err = data::parse_csv("1,2,3\n4,5\n".as_bytes()).unwrap_err();
    assert!(matches!(err, Error::Parse { row: 2, .. }));
    assert!(err.to_string().contains("row 2"));
}

#[test]
fn csv_round_trip_is_exact() {
    let ds = data::generate(&spec(20, 15, 0.3, 9)).unwrap().dataset;
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.csv");
    data::save_csv(&ds, &path).unwrap();
    let back = data::load_csv(&path).unwrap();
    assert_eq!(back, ds);
}

#[test]
fn json_lines_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.jsonl");
    let recs = vec![serde_json::json!({"a": 1}), serde_json::json!({"b": [1.5, 2.0]})];
    data::save_results_json(&recs, &path).unwrap();
    assert_eq!(data::read_json_lines(&path).unwrap(), recs);
}

#[test]
fn zero_response_rejected() {
    let err = Dataset::from_rows(&[vec![1.0], vec![2.0]], vec![0.0, 0.0]).unwrap_err();
    assert!(matches!(err, Error::InvalidDataset(_)));
}
