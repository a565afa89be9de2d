use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::gaussian::complex_normal;
use crate::error::{Error, Result};
use crate::CVector;

/// Adds circularly-symmetric complex Gaussian noise with standard deviation
/// `max_k |b_k| * 10^(-snr_db / 20)`. `snr_db = +inf` returns `b` unchanged.
pub fn add_noise(b: &CVector, snr_db: f64, seed: u64) -> Result<CVector> {
    if snr_db == f64::INFINITY {
        return Ok(b.clone());
    }
    if snr_db.is_nan() {
        return Err(Error::Config("snr_db is NaN".into()));
    }
    let peak = b.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Err(Error::Dimension("cannot scale noise to an all-zero signal".into()));
    }
    let sigma = peak * 10f64.powf(-snr_db / 20.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CVector::new(b.iter().map(|&z| z + complex_normal(&mut rng) * sigma).collect())
}
