//! Near-field deviation measures, success statistics and far-field cut
//! deviation traces. All levels are in dB; an exact match (up to rounding of
//! the inputs) is `-inf`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numerics::{abs2, cis, ComplexVector, Real};

/// Level written to result files in place of `-inf`.
pub const DB_FLOOR: f64 = -400.0;

/// Success threshold on the complex deviation.
pub const SUCCESS_THRESHOLD_DB: f64 = -90.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviationReport<T> {
    pub epsilon_c: T,
    pub epsilon_m: T,
    /// Global phase removed from the prediction before computing `epsilon_c`.
    pub aligned_phase: T,
}

/// Ratios at or below this many machine epsilons are rounding noise of an
/// exact match and map to `-inf`.
const ROUNDING_RATIO_EPS: f64 = 16.0;

fn to_db<T: Real>(ratio: T) -> T {
    if ratio <= T::lit(ROUNDING_RATIO_EPS) * T::epsilon() {
        T::neg_infinity()
    } else {
        T::lit(20.0) * ratio.log10()
    }
}

fn check_pair<T: Real>(predicted: &ComplexVector<T>, reference: &ComplexVector<T>) -> Result<T> {
    if predicted.len() != reference.len() {
        return Err(Error::Dimension(format!(
            "prediction has {} entries, reference {}",
            predicted.len(),
            reference.len()
        )));
    }
    let norm = reference.norm();
    if norm == T::zero() {
        return Err(Error::Dimension("reference vector is zero".into()));
    }
    Ok(norm)
}

/// Least-squares optimal global phase `angle(<predicted, reference>)`.
pub fn aligned_phase<T: Real>(predicted: &ComplexVector<T>, reference: &ComplexVector<T>) -> T {
    let ip = predicted.inner(reference);
    if ip.re == T::zero() && ip.im == T::zero() {
        T::zero()
    } else {
        ip.im.atan2(ip.re)
    }
}

/// Relative complex deviation with the global phase removed.
pub fn epsilon_c<T: Real>(predicted: &ComplexVector<T>, reference: &ComplexVector<T>) -> Result<T> {
    deviation(predicted, reference).map(|r| r.epsilon_c)
}

/// Relative deviation of elementwise magnitudes.
pub fn epsilon_m<T: Real>(predicted: &ComplexVector<T>, reference: &ComplexVector<T>) -> Result<T> {
    let norm = check_pair(predicted, reference)?;
    let num: T = predicted
        .iter()
        .zip(reference)
        .map(|(p, r)| {
            let d = p.norm() - r.norm();
            d * d
        })
        .sum();
    Ok(to_db(num.sqrt() / norm))
}

pub fn deviation<T: Real>(
    predicted: &ComplexVector<T>,
    reference: &ComplexVector<T>,
) -> Result<DeviationReport<T>> {
    let norm = check_pair(predicted, reference)?;
    let theta = aligned_phase(predicted, reference);
    let rot: Complex<T> = cis(-theta);
    let num: T = predicted
        .iter()
        .zip(reference)
        .map(|(&p, &r)| abs2(p * rot - r))
        .sum();
    Ok(DeviationReport {
        epsilon_c: to_db(num.sqrt() / norm),
        epsilon_m: epsilon_m(predicted, reference)?,
        aligned_phase: theta,
    })
}

/// Fraction of deviations strictly below `threshold_db`; `None` for an
/// empty list.
pub fn success_rate(deviations_db: &[f64], threshold_db: f64) -> Option<f64> {
    if deviations_db.is_empty() {
        return None;
    }
    let hits = deviations_db.iter().filter(|&&d| d < threshold_db).count();
    Some(hits as f64 / deviations_db.len() as f64)
}

/// Normalizes a pattern by its peak sample so that the peak becomes 1 with
/// zero phase.
pub fn normalize_to_peak<T: Real>(pattern: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    let peak = pattern
        .iter()
        .copied()
        .fold(Complex::new(T::zero(), T::zero()), |best, z| if abs2(z) > abs2(best) { z } else { best });
    if abs2(peak) == T::zero() {
        return Err(Error::Dimension("pattern is identically zero".into()));
    }
    Ok(pattern.iter().map(|&z| z / peak).collect())
}

/// Per-angle deviation `|result - reference| / max|reference|` in dB after
/// normalizing both patterns to their peaks.
pub fn ff_cut_deviation<T: Real>(result: &[Complex<T>], reference: &[Complex<T>]) -> Result<Vec<T>> {
    if result.len() != reference.len() {
        return Err(Error::Dimension(format!(
            "angle grids differ: {} vs {} samples",
            result.len(),
            reference.len()
        )));
    }
    let r = normalize_to_peak(result)?;
    let f = normalize_to_peak(reference)?;
    Ok(r.iter().zip(&f).map(|(&a, &b)| to_db((a - b).norm())).collect())
}

/// Writes a dB level with four decimals, mapping `-inf` to [`DB_FLOOR`].
pub fn format_db(value: f64) -> String {
    let v = if value.is_nan() {
        return "nan".into();
    } else if value < DB_FLOOR {
        DB_FLOOR
    } else {
        value
    };
    format!("{v:.4}")
}
