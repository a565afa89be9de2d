mod common;

use std::f64::consts::PI;

use common::*;
use num_complex::Complex64;
use pcpr::metrics::{
    aligned_phase, deviation, epsilon_c, epsilon_m, ff_cut_deviation, format_db, success_rate, SUCCESS_THRESHOLD_DB,
};
use pcpr::CVector;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn exact_and_rotated_matches_are_neg_infinity() {
    let mut r = rng(41);
    let y = random_vector(&mut r, 30);
    assert_eq!(epsilon_c(&y, &y).unwrap(), f64::NEG_INFINITY);
    let rot = y.scale(Complex64::from_polar(1.0, PI / 3.0));
    assert_eq!(epsilon_c(&rot, &y).unwrap(), f64::NEG_INFINITY);
    let scrambled = CVector::new(y.iter().map(|&z| z * Complex64::from_polar(1.0, r.random_range(-PI..PI))).collect()).unwrap();
    assert_eq!(epsilon_m(&scrambled, &y).unwrap(), f64::NEG_INFINITY);
}

#[test]
fn formula_evaluations() {
    let mut r = rng(42);
    let y = random_vector(&mut r, 40);
    // A perturbation orthogonal to y keeps the aligned phase at zero.
    let mut d = random_vector(&mut r, 40);
    let proj = d.inner(&y) / y.norm_sqr();
    d = d.sub(&y.scale(proj)).unwrap();
    d = d.scale(Complex64::new(1e-3 * y.norm() / d.norm(), 0.0));
    let x = y.add(&d).unwrap();
    let ec = epsilon_c(&x, &y).unwrap();
    assert!((ec + 60.0).abs() < 1e-6, "{ec}");

    let x = y.scale(Complex64::new(1.001, 0.0));
    assert!((epsilon_m(&x, &y).unwrap() + 60.0).abs() < 1e-9);
}

#[test]
fn zero_reference_and_length_mismatch_are_errors() {
    let z = CVector::zeros(3);
    let mut r = rng(43);
    let x = random_vector(&mut r, 3);
    assert!(epsilon_c(&x, &z).is_err());
    assert!(epsilon_m(&x, &z).is_err());
    assert!(epsilon_c(&x, &random_vector(&mut r, 4)).is_err());
}

#[test]
fn success_rate_examples() {
    assert_eq!(success_rate(&[-100.0, -80.0], SUCCESS_THRESHOLD_DB), Some(0.5));
    assert_eq!(success_rate(&[f64::NEG_INFINITY; 4], SUCCESS_THRESHOLD_DB), Some(1.0));
    assert_eq!(success_rate(&[-90.0], SUCCESS_THRESHOLD_DB), Some(0.0));
    assert_eq!(success_rate(&[], SUCCESS_THRESHOLD_DB), None);
}

#[test]
fn db_formatting() {
    assert_eq!(format_db(f64::NEG_INFINITY), "-400.0000");
    assert_eq!(format_db(-12.345678), "-12.3457");
}

#[test]
fn ff_cut_deviation_cases() {
    let mut r = rng(44);
    let p = random_vector(&mut r, 73);
    let dev = ff_cut_deviation(p.as_slice(), p.as_slice()).unwrap();
    assert!(dev.iter().all(|&d| d == f64::NEG_INFINITY));

    let rot = p.scale(Complex64::from_polar(2.5, 0.7));
    let dev = ff_cut_deviation(rot.as_slice(), p.as_slice()).unwrap();
    assert!(dev.iter().all(|&d| d == f64::NEG_INFINITY));

    let phaseless: Vec<Complex64> = p.iter().map(|z| Complex64::new(z.norm(), 0.0)).collect();
    let dev = ff_cut_deviation(&phaseless, p.as_slice()).unwrap();
    let worst = dev.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    assert!(worst > -6.0, "{worst}");

    assert!(ff_cut_deviation(&p.as_slice()[..5], p.as_slice()).is_err());
}

fn pair(seed: u64, n: usize) -> (CVector, CVector) {
    let mut r = rng(seed);
    (random_vector(&mut r, n), random_vector(&mut r, n))
}

proptest! {
    #[test]
    fn epsilon_c_ignores_global_phase(seed in any::<u64>(), n in 1usize..50, theta in -PI..PI) {
        let (x, y) = pair(seed, n);
        let a = epsilon_c(&x, &y).unwrap();
        let b = epsilon_c(&x.scale(Complex64::from_polar(1.0, theta)), &y).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn alignment_is_optimal(seed in any::<u64>(), n in 1usize..50) {
        let (x, y) = pair(seed, n);
        let best = x.scale(Complex64::from_polar(1.0, -aligned_phase(&x, &y))).sub(&y).unwrap().norm();
        for k in 0..360 {
            let phi = (k as f64).to_radians();
            let other = x.scale(Complex64::from_polar(1.0, -phi)).sub(&y).unwrap().norm();
            prop_assert!(best <= other * (1.0 + 1e-12));
        }
    }

    #[test]
    fn magnitude_deviation_bounded_by_complex(seed in any::<u64>(), n in 1usize..50) {
        let (x, y) = pair(seed, n);
        let d = deviation(&x, &y).unwrap();
        prop_assert!(d.epsilon_m <= d.epsilon_c + 1e-9);
    }

    #[test]
    fn success_rate_monotone_in_threshold(
        values in proptest::collection::vec(-200.0..0.0f64, 1..50),
        t1 in -200.0..0.0f64,
        t2 in -200.0..0.0f64,
    ) {
        let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        prop_assert!(success_rate(&values, lo).unwrap() <= success_rate(&values, hi).unwrap());
    }
}
