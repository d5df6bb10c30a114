mod common;

use cellfree_oas::estimation::{mmse_alpha, split_estimate};
use cellfree_oas::rng::{complex_normal, Purpose, StreamKey};
use cellfree_oas::Complex64;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn alpha_bounds_and_monotonicity_on_random_triples() {
    let mut rng = StreamKey::new(21, 0, Purpose::Estimation, 0).rng();
    for _ in 0..100_000 {
        let beta = 10f64.powf(rng.random_range(-16.0..-4.0));
        let pu = 10f64.powf(rng.random_range(-5.0..0.0));
        let sigma2 = 10f64.powf(rng.random_range(-18.0..-10.0));
        let a = mmse_alpha(beta, pu, sigma2).unwrap();
        assert!(a >= 0.0 && a < beta, "{beta} {pu} {sigma2} -> {a}");
        assert!(mmse_alpha(beta, pu * 2.0, sigma2).unwrap() >= a);
        assert!(mmse_alpha(beta * 2.0, pu, sigma2).unwrap() >= a);
    }
    let beta = 1e-9;
    let ratio = mmse_alpha(beta, 1e6, 1e-13).unwrap() / beta;
    assert!((ratio - 1.0).abs() < 1e-9);
}

#[test]
fn split_moments() {
    let (beta, alpha): (f64, f64) = (2.5e-10, 1e-10);
    let mut rng = StreamKey::new(22, 0, Purpose::Estimation, 0).rng();
    let n = 10_000;
    let mut est = Vec::with_capacity(n);
    let mut err = Vec::with_capacity(n);
    for _ in 0..n {
        let g = complex_normal(&mut rng) * beta.sqrt();
        let (e, x) = split_estimate(g, alpha, beta, &mut rng).unwrap();
        assert!((e + x - g).norm() <= 1e-15 * beta.sqrt());
        est.push(e);
        err.push(x);
    }
    let var_est = est.iter().map(Complex64::norm_sqr).sum::<f64>() / n as f64;
    let var_err = err.iter().map(Complex64::norm_sqr).sum::<f64>() / n as f64;
    let cov: Complex64 = est
        .iter()
        .zip(&err)
        .map(|(e, x)| e * x.conj())
        .sum::<Complex64>()
        / n as f64;
    assert!((var_est / alpha - 1.0).abs() < 0.05, "{var_est}");
    assert!((var_err / (beta - alpha) - 1.0).abs() < 0.05, "{var_err}");
    assert!(cov.norm() < 0.05 * beta, "{cov}");
    assert!(((var_est + var_err) / beta - 1.0).abs() < 0.05);
}

proptest! {
    #[test]
    fn alpha_within_bounds(beta in 1e-16f64..1e-3, pu in 1e-6f64..1.0, sigma2 in 1e-20f64..1e-9) {
        let a = mmse_alpha(beta, pu, sigma2).unwrap();
        prop_assert!(a >= 0.0);
        prop_assert!(a < beta);
    }
}
