mod common;

use common::DenseKriging;
use mivor_core::{ClassRule, Dataset, Hyperparameters, KrigingModel, NuggetPolicy, SwarmConfig};
use proptest::prelude::*;

fn close(a: f64, b: f64, scale: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(scale)
}

fn dataset_strategy() -> impl Strategy<Value = (usize, Vec<Vec<f64>>, Vec<f64>)> {
    (1usize..=2, 2usize..=12).prop_flat_map(|(n, m)| {
        (
            Just(n),
            prop::collection::vec(prop::collection::vec(0.0f64..1.0, n), m),
            prop::collection::vec(-5.0f64..5.0, m),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fixed_lengths_match_dense_inverse(
        (n, points, values) in dataset_strategy(),
        raw in prop::collection::vec(-1.3f64..0.3, 2),
        query in prop::collection::vec(0.0f64..1.0, 2),
    ) {
        let data = match Dataset::new(points.clone(), values.clone(), ClassRule::new(0.0)) {
            Ok(d) => d,
            Err(_) => return Ok(()),
        };
        prop_assume!(data.min_pairwise_distance() > 0.02);
        let lengths: Vec<f64> = raw[..n].iter().map(|l| 10f64.powf(*l)).collect();
        let model = KrigingModel::with_hyperparameters(
            data,
            Hyperparameters::new(lengths.clone()).unwrap(),
            &NuggetPolicy::default(),
        ).unwrap();
        let oracle = DenseKriging::new(&points, &values, &lengths, model.nugget());
        let scale = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        prop_assert!(close(model.mu_hat(), oracle.mu, scale, 1e-8));
        prop_assert!(close(model.sigma2_hat(), oracle.sigma2, 0.0, 1e-8));
        prop_assert!(close(model.likelihood().psi, oracle.psi, 0.0, 1e-8));
        let q = &query[..n];
        let p = model.predict(q).unwrap();
        let (mean, var) = oracle.predict(q);
        prop_assert!(close(p.mean, mean, scale, 1e-8), "{} vs {}", p.mean, mean);
        prop_assert!(close(p.variance, var, oracle.sigma2, 1e-8), "{} vs {}", p.variance, var);
    }
}

#[test]
fn fitted_model_interpolates_training_data() {
    let points: Vec<Vec<f64>> = (0..9).map(|i| vec![i as f64 / 8.0, ((i * 5) % 9) as f64 / 8.0]).collect();
    let values: Vec<f64> = points.iter().map(|p| (3.0 * p[0]).sin() * p[1] + p[0]).collect();
    let data = Dataset::new(points.clone(), values.clone(), ClassRule::new(0.5)).unwrap();
    let model = KrigingModel::fit(data, &SwarmConfig::default(), &NuggetPolicy::default()).unwrap();
    for (x, y) in points.iter().zip(&values) {
        let p = model.predict(x).unwrap();
        assert!((p.mean - y).abs() <= 1e-6 * (1.0 + y.abs()));
        assert!(p.variance <= 1e-6 * model.sigma2_hat());
    }
}

#[test]
fn fit_minimizes_over_a_coarse_grid() {
    let points: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64 / 9.0]).collect();
    let values: Vec<f64> = points.iter().map(|p| (6.0 * p[0]).cos()).collect();
    let data = Dataset::new(points, values, ClassRule::new(0.0)).unwrap();
    let model = KrigingModel::fit(data.clone(), &SwarmConfig::default(), &NuggetPolicy::default()).unwrap();
    let best = model.likelihood().psi;
    for k in 0..=100 {
        let l = 10f64.powf(-3.0 + 5.0 * k as f64 / 100.0);
        let h = Hyperparameters::new(vec![l]).unwrap();
        if let Ok(lk) = mivor_core::reduced_likelihood(&data, &h, model.nugget()) {
            assert!(best <= lk.psi * (1.0 + 1e-6), "grid point {l} beats the fit: {} < {best}", lk.psi);
        }
    }
}
