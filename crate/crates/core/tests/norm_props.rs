use std::f64::consts::TAU;

use num_complex::Complex64;
use proptest::prelude::*;
use ratbound::generators::{gen_shell_instance, split_seed};
use ratbound::norms::{polynomial_norm, rational_norm, sup_norm_circle};
use ratbound::{CirclePoint, NormConfig, PoleSet, Polynomial, RationalFn};

fn brute_force(r: &RationalFn, samples: usize) -> f64 {
    (0..samples)
        .map(|i| r.eval(Complex64::from_polar(1.0, TAU * i as f64 / samples as f64)).unwrap().norm())
        .fold(0.0, f64::max)
}

fn rational(max: usize) -> impl Strategy<Value = RationalFn> {
    (1..=max, any::<u64>()).prop_map(|(n, seed)| gen_shell_instance(n, [0.1, 3.0], [1.05, 3.0], seed).unwrap())
}

#[test]
fn matches_million_point_grid() {
    let cfg = NormConfig::default();
    for i in 0..20u64 {
        let r = gen_shell_instance(1 + (i % 8) as usize, [0.1, 3.0], [1.05, 3.0], split_seed(5, 0, i)).unwrap();
        let est = rational_norm(&r, &cfg).unwrap();
        let brute = brute_force(&r, 1_000_000);
        assert!((est.value - brute).abs() <= 1e-6 * brute, "{} vs {brute}", est.value);
        assert!(est.value >= brute * (1.0 - 1e-15));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn witness_attains_estimate(r in rational(8)) {
        let est = rational_norm(&r, &NormConfig::default()).unwrap();
        let at = r.eval(CirclePoint::new(est.argmax_theta).z).unwrap().norm();
        prop_assert!((at - est.value).abs() <= 1e-14 * est.value);
        prop_assert!((0.0..TAU).contains(&est.argmax_theta));
    }

    #[test]
    fn scaling_equivariance(r in rational(6), scale in 1e-3f64..1e3, phase in 0.0..TAU) {
        let cfg = NormConfig::default();
        let c = Complex64::from_polar(scale, phase);
        let scaled = RationalFn::new(r.numerator().scaled(c), r.poles().clone()).unwrap();
        let a = rational_norm(&r, &cfg).unwrap().value;
        let b = rational_norm(&scaled, &cfg).unwrap().value;
        prop_assert!((b - scale * a).abs() <= 1e-12 * scale * a);
    }

    #[test]
    fn rotation_invariance(coeffs in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..=8), shift in 0.0..TAU) {
        // p(e^{i s} z) has the same sup-norm as p
        let cs: Vec<Complex64> = coeffs.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
        let rotated: Vec<Complex64> = cs.iter().enumerate().map(|(j, c)| c * Complex64::from_polar(1.0, shift * j as f64)).collect();
        let cfg = NormConfig::default();
        let a = polynomial_norm(&Polynomial::new(cs), &cfg).unwrap().value;
        let b = polynomial_norm(&Polynomial::new(rotated), &cfg).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a));
    }

    #[test]
    fn sup_dominates_every_sample(r in rational(6), theta in 0.0..TAU) {
        let est = rational_norm(&r, &NormConfig::default()).unwrap();
        prop_assert!(r.eval(CirclePoint::new(theta).z).unwrap().norm() <= est.value * (1.0 + 1e-9));
    }
}

#[test]
fn narrow_peak_between_grid_points() {
    // a pole close to the circle at an off-grid angle gives a sharp peak
    let theta0 = TAU * 1000.5 / 4096.0;
    let a = Complex64::from_polar(1.0005, theta0);
    let r = RationalFn::new(Polynomial::from_real_coeffs(&[1.0]), PoleSet::new(vec![a]).unwrap()).unwrap();
    let est = rational_norm(&r, &NormConfig::default()).unwrap();
    assert!((est.value - 1.0 / 0.0005).abs() <= 1e-9 / 0.0005);
    assert!((est.argmax_theta - theta0).abs() < 1e-8);
}

#[test]
fn custom_modulus_function() {
    let est = sup_norm_circle(|t| Ok(2.0 + (3.0 * t).cos()), &NormConfig::default()).unwrap();
    assert!((est.value - 3.0).abs() < 1e-15);
    assert_eq!(est.argmax_theta, 0.0);
}

#[test]
fn tiny_norms_survive() {
    // z^5 over a far pole: ||r|| is of order 1e-30
    let p = Polynomial::monomial(5, Complex64::new(1.0, 0.0)).unwrap();
    let r = RationalFn::new(p, PoleSet::repeated(1e6, 5).unwrap()).unwrap();
    let est = rational_norm(&r, &NormConfig::default()).unwrap();
    let expected = 1.0 / (1e6 - 1.0f64).powi(5);
    assert!((est.value - expected).abs() <= 1e-12 * expected);
    assert!(est.value > 0.0);
}
