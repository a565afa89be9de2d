use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numerics::{abs2, dominant_eigenvector, ComplexMatrix, ComplexVector, Real};

/// Spectral starting point for the nonconvex solver.
///
/// Forms `Y = (1/m) sum_k |b_k|^2 a_k a_k^H` (with `a_k^H` the `k`-th row of
/// `A`), takes its dominant eigenvector after `iterations` power iterations
/// and scales it to `sqrt(sum |b_k|^2 / sum ||a_k||^2)`. All-zero
/// magnitudes yield the zero vector.
pub fn spectral_initialize<T: Real>(
    a: &ComplexMatrix<T>,
    magnitudes: &[T],
    iterations: usize,
) -> Result<ComplexVector<T>> {
    let (m, n) = (a.rows(), a.cols());
    if magnitudes.len() != m {
        return Err(Error::Dimension(format!("{} magnitudes for {m} rows", magnitudes.len())));
    }
    let weights: Vec<T> = magnitudes.iter().map(|&v| v * v).collect();
    let total: T = weights.iter().copied().sum();
    if total == T::zero() {
        return Ok(ComplexVector::zeros(n));
    }
    let row_energy: T = a.as_slice().iter().map(|&z| abs2(z)).sum();
    if row_energy == T::zero() {
        return Ok(ComplexVector::zeros(n));
    }

    let mut y = ComplexMatrix::zeros(n, n);
    let inv_m = T::one() / T::from_usize_lossy(m);
    for (k, &w) in weights.iter().enumerate() {
        if w == T::zero() {
            continue;
        }
        let row = a.row(k);
        for i in 0..n {
            let ci: Complex<T> = row[i].conj() * (w * inv_m);
            for j in 0..n {
                y[(i, j)] += ci * row[j];
            }
        }
    }
    let v = dominant_eigenvector(&y, iterations, None)?;
    let lambda = (total / row_energy).sqrt();
    Ok(v.scale(Complex::new(lambda, T::zero())))
}
