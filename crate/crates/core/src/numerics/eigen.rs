//! Power iteration for the dominant eigenvector of a Hermitian matrix.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::dense::{ComplexMatrix, ComplexVector};
use super::scalar::Real;
use crate::error::{Error, Result};

/// Runs `iterations` power iterations on `h` and returns a unit vector.
///
/// The start vector is the normalized all-ones vector, or a complex Gaussian
/// draw when `seed` is given. If an iterate is annihilated by `h` (for
/// instance when `h` is zero) the current unit vector is returned.
pub fn dominant_eigenvector<T: Real>(
    h: &ComplexMatrix<T>,
    iterations: usize,
    seed: Option<u64>,
) -> Result<ComplexVector<T>> {
    let n = h.rows();
    if h.cols() != n {
        return Err(Error::Dimension(format!("power iteration on {}x{} matrix", n, h.cols())));
    }
    if iterations == 0 {
        return Err(Error::Config("power iteration needs at least one iteration".into()));
    }
    if n == 0 {
        return Ok(ComplexVector::zeros(0));
    }
    let mut v: Vec<Complex<T>> = match seed {
        None => vec![Complex::new(T::one(), T::zero()); n],
        Some(s) => {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            (0..n)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    Complex::new(T::lit(re), T::lit(im))
                })
                .collect()
        }
    };
    normalize(&mut v);
    for _ in 0..iterations {
        let mut w = h.mul_slice(&v);
        if !normalize(&mut w) {
            break;
        }
        v = w;
    }
    ComplexVector::new(v).map_err(|_| Error::Numerical("power iteration diverged".into()))
}

/// Scales `v` to unit norm; returns false if `v` is zero.
fn normalize<T: Real>(v: &mut [Complex<T>]) -> bool {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    if norm == T::zero() || !norm.is_finite() {
        return false;
    }
    for z in v.iter_mut() {
        *z = *z / norm;
    }
    true
}
