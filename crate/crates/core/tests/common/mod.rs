#![allow(dead_code)]

use num_complex::Complex64;
use pcpr::models::complex_normal;
use pcpr::{CMatrix, CVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> CVector {
    CVector::new((0..n).map(|_| complex_normal(rng)).collect()).unwrap()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rel_diff(a: &CVector, b: &CVector) -> f64 {
    a.sub(b).unwrap().norm() / b.norm()
}

/// Dense copy for the nalgebra oracle.
pub fn to_nalgebra(a: &CMatrix) -> nalgebra::DMatrix<Complex64> {
    nalgebra::DMatrix::from_row_slice(a.rows(), a.cols(), a.as_slice())
}
