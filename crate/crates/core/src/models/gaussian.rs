use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::{CMatrix, CVector};

/// Random instance with i.i.d. circularly-symmetric complex normal entries.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianInstance {
    pub a: CMatrix,
    pub z_true: CVector,
    pub b_true: CVector,
    pub seed: u64,
}

/// Draws a zero-mean unit-variance complex normal sample (variance 1/2 per
/// real component).
pub fn complex_normal<R: rand::Rng>(rng: &mut R) -> Complex64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re * s, im * s)
}

/// Draws `A` (row-major) then `z_true` from a ChaCha8 stream seeded with
/// `seed`, and sets `b_true = A z_true`.
pub fn sample_gaussian_instance(n: usize, m: usize, seed: u64) -> Result<GaussianInstance> {
    if n == 0 || m == 0 {
        return Err(Error::Config(format!("gaussian instance needs n, m >= 1 (got {n}, {m})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data: Vec<Complex64> = (0..m * n).map(|_| complex_normal(&mut rng)).collect();
    let a = CMatrix::new(m, n, data)?;
    let z_true = CVector::new((0..n).map(|_| complex_normal(&mut rng)).collect())?;
    let b_true = a.matvec(&z_true)?;
    Ok(GaussianInstance { a, z_true, b_true, seed })
}
