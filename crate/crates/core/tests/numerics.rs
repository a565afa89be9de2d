mod common;

use common::*;
use num_complex::{Complex32, Complex64};
use pcpr::numerics::{dominant_eigenvector, least_squares_solve, matvec};
use pcpr::{CMatrix, CMatrix32, CVector, CVector32};
use proptest::prelude::*;

#[test]
fn identity_and_zero_products() {
    let x = CVector::new(vec![c(1.0, 0.0), c(0.0, 1.0), c(-2.0, 0.0)]).unwrap();
    assert_eq!(matvec(&CMatrix::identity(3), &x).unwrap(), x);
    let five = CVector::new(vec![c(5.0, 0.0), c(5.0, 0.0)]).unwrap();
    assert_eq!(matvec(&CMatrix::zeros(2, 2), &five).unwrap(), CVector::zeros(2));
}

#[test]
fn matvec_dimension_mismatch() {
    assert!(matvec(&CMatrix::identity(3), &CVector::zeros(2)).is_err());
}

#[test]
fn matvec_matches_scalar_loop() {
    let mut r = rng(11);
    for _ in 0..50 {
        let m = random_matrix(&mut r, 4, 3);
        let x = random_vector(&mut r, 3);
        let y = matvec(&m, &x).unwrap();
        for i in 0..4 {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..3 {
                s += m.row(i)[k] * x.as_slice()[k];
            }
            assert!((y.as_slice()[i] - s).norm() <= 1e-14 * (1.0 + s.norm()));
        }
    }
}

#[test]
fn lstsq_small_cases() {
    let y = CVector::new(vec![c(3.0, 0.0), c(0.0, 4.0)]).unwrap();
    assert!(rel_diff(&least_squares_solve(&CMatrix::identity(2), &y).unwrap(), &y) < 1e-15);

    let m = CMatrix::new(2, 1, vec![c(1.0, 0.0); 2]).unwrap();
    let y = CVector::new(vec![c(1.0, 0.0), c(3.0, 0.0)]).unwrap();
    let x = least_squares_solve(&m, &y).unwrap();
    assert!((x.as_slice()[0] - c(2.0, 0.0)).norm() < 1e-14);
}

#[test]
fn lstsq_plant_and_recover() {
    let mut r = rng(12);
    for _ in 0..100 {
        let m = random_matrix(&mut r, 6, 4);
        let x_star = random_vector(&mut r, 4);
        let y = m.matvec(&x_star).unwrap();
        let x = least_squares_solve(&m, &y).unwrap();
        assert!(rel_diff(&x, &x_star) < 1e-10);
    }
}

#[test]
fn lstsq_minimum_norm_matches_pseudo_inverse() {
    let mut r = rng(13);
    for (rows, cols) in [(3, 6), (5, 5), (8, 4)] {
        // Rank 2 by construction.
        let left = random_matrix(&mut r, rows, 2);
        let right = random_matrix(&mut r, 2, cols);
        let m = left.matmul(&right).unwrap();
        let y = random_vector(&mut r, rows);
        let x = least_squares_solve(&m, &y).unwrap();
        let pinv = to_nalgebra(&m).pseudo_inverse(1e-10).unwrap();
        let oracle = pinv * nalgebra::DVector::from_column_slice(y.as_slice());
        let oracle = CVector::new(oracle.iter().cloned().collect()).unwrap();
        assert!(rel_diff(&x, &oracle) < 1e-8, "{rows}x{cols}: {}", rel_diff(&x, &oracle));
    }
}

#[test]
fn lstsq_single_precision() {
    let m = CMatrix32::new(
        3,
        2,
        vec![
            Complex32::new(1.0, 0.0),
            Complex32::new(0.0, 1.0),
            Complex32::new(2.0, -1.0),
            Complex32::new(1.0, 1.0),
            Complex32::new(0.5, 0.0),
            Complex32::new(-1.0, 0.0),
        ],
    )
    .unwrap();
    let x_star = CVector32::new(vec![Complex32::new(1.0, -2.0), Complex32::new(0.5, 0.25)]).unwrap();
    let x = least_squares_solve(&m, &m.matvec(&x_star).unwrap()).unwrap();
    assert!(x.sub(&x_star).unwrap().norm() / x_star.norm() < 1e-5);
}

#[test]
fn power_iteration_diagonal_and_identity() {
    let h = CMatrix::from_diagonal(&[c(5.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
    let v = dominant_eigenvector(&h, 40, None).unwrap();
    assert!(v.as_slice()[0].norm() > 1.0 - 1e-9);

    let v = dominant_eigenvector(&CMatrix::identity(4), 40, None).unwrap();
    for z in v.iter() {
        assert!((*z - c(0.5, 0.0)).norm() < 1e-14);
    }
    let v = dominant_eigenvector(&CMatrix::zeros(3, 3), 5, None).unwrap();
    assert!((v.norm() - 1.0).abs() < 1e-14);
}

#[test]
fn power_iteration_matches_dense_eigensolver() {
    let mut r = rng(14);
    let mut checked = 0;
    while checked < 20 {
        let g = random_matrix(&mut r, 8, 8);
        let h = g.matmul(&g.adjoint()).unwrap();
        let eig = to_nalgebra(&h).symmetric_eigen();
        let mut order: Vec<usize> = (0..8).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
        if eig.eigenvalues[order[0]] / eig.eigenvalues[order[1]] < 2.0 {
            continue;
        }
        let lead = eig.eigenvectors.column(order[0]);
        let v = dominant_eigenvector(&h, 40, None).unwrap();
        let overlap: Complex64 = v.iter().zip(lead.iter()).map(|(a, b)| a * b.conj()).sum();
        assert!(overlap.norm() > 0.999, "overlap {}", overlap.norm());
        assert!((v.norm() - 1.0).abs() < 1e-12);
        checked += 1;
    }
}

fn complex_strategy() -> impl Strategy<Value = Complex64> {
    (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(a, b)| Complex64::new(a, b))
}

proptest! {
    #[test]
    fn matvec_is_linear(
        entries in proptest::collection::vec(complex_strategy(), 12),
        x in proptest::collection::vec(complex_strategy(), 3),
        y in proptest::collection::vec(complex_strategy(), 3),
        alpha in complex_strategy(),
        beta in complex_strategy(),
    ) {
        let m = CMatrix::new(4, 3, entries).unwrap();
        let x = CVector::new(x).unwrap();
        let y = CVector::new(y).unwrap();
        let combo = x.scale(alpha).add(&y.scale(beta)).unwrap();
        let lhs = matvec(&m, &combo).unwrap();
        let rhs = matvec(&m, &x).unwrap().scale(alpha).add(&matvec(&m, &y).unwrap().scale(beta)).unwrap();
        let scale = m.frobenius_norm() * (alpha.norm() * x.norm() + beta.norm() * y.norm());
        prop_assert!(lhs.sub(&rhs).unwrap().norm() <= 1e-12 * scale.max(1e-300));
    }

    #[test]
    fn lstsq_residual_is_orthogonal(
        rows in 1usize..9,
        cols in 1usize..9,
        seed in any::<u64>(),
    ) {
        let mut r = rng(seed);
        let m = random_matrix(&mut r, rows, cols);
        let y = random_vector(&mut r, rows);
        let x = least_squares_solve(&m, &y).unwrap();
        let residual = m.matvec(&x).unwrap().sub(&y).unwrap();
        let normal = m.adjoint_matvec(&residual).unwrap().norm();
        prop_assert!(normal <= 1e-8 * m.frobenius_norm() * y.norm());
    }

    #[test]
    fn power_iteration_output_has_unit_norm(seed in any::<u64>(), n in 1usize..10) {
        let mut r = rng(seed);
        let g = random_matrix(&mut r, n, n);
        let h = g.matmul(&g.adjoint()).unwrap();
        let v = dominant_eigenvector(&h, 40, None).unwrap();
        prop_assert!((v.norm() - 1.0).abs() < 1e-12);
    }
}
