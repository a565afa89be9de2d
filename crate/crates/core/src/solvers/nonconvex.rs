//! Intensity least-squares phase retrieval with L-BFGS and a strong-Wolfe
//! line search.
//!
//! The objective `f(z) = (1/(2m)) sum_k (|(Az)_k|^2 - |b_k|^2)^2` is real
//! valued in complex `z`. Treating `z` as the real vector `[Re z; Im z]`,
//! its gradient is `2 * (1/m) A^H [(|Az|^2 - |b|^2) o Az]`, i.e. twice the
//! Wirtinger gradient, and real inner products are `Re <u, v>`.

use std::collections::VecDeque;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{Solution, SolveReport};
use crate::error::{Error, Result};

use crate::numerics::{abs2, ComplexMatrix, ComplexVector, Real};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NonconvexSettings {
    pub max_iterations: usize,
    /// Number of stored curvature pairs.
    pub memory: usize,
    /// Stop once `||grad f(z)|| <= gradient_tolerance * ||grad f(z0)||`.
    pub gradient_tolerance: f64,
    /// Sufficient-decrease constant.
    pub c1: f64,
    /// Curvature constant.
    pub c2: f64,
    pub max_line_search: usize,
}

impl Default for NonconvexSettings {
    fn default() -> Self {
        Self {
            max_iterations: 2000,
            memory: 10,
            gradient_tolerance: 1e-12,
            c1: 1e-4,
            c2: 0.9,
            max_line_search: 30,
        }
    }
}

impl NonconvexSettings {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be at least 1".into()));
        }
        if self.memory == 0 || self.max_line_search == 0 {
            return Err(Error::Config("memory and max_line_search must be positive".into()));
        }
        if !(self.gradient_tolerance > 0.0) {
            return Err(Error::Config("gradient_tolerance must be positive".into()));
        }
        if !(0.0 < self.c1 && self.c1 < self.c2 && self.c2 < 1.0) {
            return Err(Error::Config("line search needs 0 < c1 < c2 < 1".into()));
        }
        Ok(())
    }
}

/// Why the iteration ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    GradientTolerance,
    /// Objective at the rounding level of the measured intensities.
    ExactFit,
    IterationLimit,
    /// No step satisfying the line-search conditions was found even along
    /// steepest descent; usually means rounding-level progress.
    LineSearchStalled,
}

struct Problem<'a, T: Real> {
    a: &'a ComplexMatrix<T>,
    intensities: Vec<T>,
    inv_m: T,
    /// Objective level explained by rounding of the intensities alone.
    rounding_floor: T,
}

impl<T: Real> Problem<'_, T> {
    /// Objective and real gradient (stored as complex `dRe + j dIm`).
    fn eval(&self, z: &[Complex<T>]) -> (T, Vec<Complex<T>>) {
        let w = self.a.mul_slice(z);
        let mut f = T::zero();
        let weighted: Vec<Complex<T>> = w
            .iter()
            .zip(&self.intensities)
            .map(|(&wk, &yk)| {
                let r = abs2(wk) - yk;
                f += r * r;
                wk * r
            })
            .collect();
        let mut g = self.a.adjoint_mul_slice(&weighted);
        let scale = T::lit(2.0) * self.inv_m;
        for gk in g.iter_mut() {
            *gk = *gk * scale;
        }
        (f * self.inv_m / T::lit(2.0), g)
    }
}

/// Objective value and Wirtinger gradient `df/d(conj z)` at `z`.
pub fn intensity_objective<T: Real>(
    a: &ComplexMatrix<T>,
    magnitudes: &[T],
    z: &ComplexVector<T>,
) -> Result<(T, ComplexVector<T>)> {
    if magnitudes.len() != a.rows() || z.len() != a.cols() {
        return Err(Error::Dimension(format!(
            "{}x{} operator, {} magnitudes, {} unknowns",
            a.rows(),
            a.cols(),
            magnitudes.len(),
            z.len()
        )));
    }
    let p = problem(a, magnitudes);
    let (f, g) = p.eval(z.as_slice());
    let half = T::lit(0.5);
    Ok((f, ComplexVector::from_raw(g.into_iter().map(|v| v * half).collect())))
}

fn problem<'a, T: Real>(a: &'a ComplexMatrix<T>, magnitudes: &[T]) -> Problem<'a, T> {
    let intensities: Vec<T> = magnitudes.iter().map(|&v| v * v).collect();
    let inv_m = T::one() / T::from_usize_lossy(a.rows().max(1));
    let tol = T::lit(4.0) * T::epsilon();
    let rounding_floor = intensities.iter().map(|&y| (tol * y) * (tol * y)).sum::<T>() * inv_m / T::lit(2.0);
    Problem {
        a,
        intensities,
        inv_m,
        rounding_floor,
    }
}

fn dot<T: Real>(u: &[Complex<T>], v: &[Complex<T>]) -> T {
    u.iter().zip(v).map(|(a, b)| a.re * b.re + a.im * b.im).sum()
}

fn norm<T: Real>(u: &[Complex<T>]) -> T {
    dot(u, u).sqrt()
}

fn axpy<T: Real>(x: &[Complex<T>], alpha: T, d: &[Complex<T>]) -> Vec<Complex<T>> {
    x.iter().zip(d).map(|(&a, &b)| a + b * alpha).collect()
}

struct Point<T: Real> {
    x: Vec<Complex<T>>,
    f: T,
    g: Vec<Complex<T>>,
}

/// Minimizes the intensity objective from `z0`.
///
/// Never errors on non-convergence: the best iterate is returned with
/// `converged = false`. A non-finite objective aborts with
/// [`Error::Numerical`].
pub fn solve_nonconvex<T: Real>(
    a: &ComplexMatrix<T>,
    magnitudes: &[T],
    z0: &ComplexVector<T>,
    settings: &NonconvexSettings,
) -> Result<SolveReport<T>> {
    settings.validate()?;
    if z0.len() != a.cols() {
        return Err(Error::Dimension(format!("start vector has {} entries, operator {} columns", z0.len(), a.cols())));
    }
    if magnitudes.len() != a.rows() {
        return Err(Error::Dimension(format!("{} magnitudes for {} rows", magnitudes.len(), a.rows())));
    }
    let prob = problem(a, magnitudes);
    let (f0, g0) = prob.eval(z0.as_slice());
    if !f0.is_finite() {
        return Err(Error::Numerical("objective is not finite at the start vector".into()));
    }
    let g0_norm = norm(&g0);
    let tol = T::lit(settings.gradient_tolerance) * g0_norm;
    let mut cur = Point { x: z0.as_slice().to_vec(), f: f0, g: g0 };
    let mut history: VecDeque<(Vec<Complex<T>>, Vec<Complex<T>>, T)> = VecDeque::with_capacity(settings.memory);
    let mut iterations = 0;

    let stop = if cur.f <= prob.rounding_floor {
        StopReason::ExactFit
    } else if g0_norm == T::zero() {
        StopReason::GradientTolerance
    } else {
        loop {
            if iterations >= settings.max_iterations {
                break StopReason::IterationLimit;
            }
            let mut d = two_loop(&cur.g, &history);
            let mut slope = dot(&cur.g, &d);
            if !(slope < T::zero()) {
                history.clear();
                d = cur.g.iter().map(|&v| -v).collect();
                slope = dot(&cur.g, &d);
            }
            let initial = if history.is_empty() {
                let xn = norm(&cur.x);
                let scale = if xn > T::zero() { xn } else { T::one() };
                (scale / norm(&d)).min(T::one())
            } else {
                T::one()
            };
            let next = match line_search(&prob, &cur, &d, slope, initial, settings)? {
                Some(p) => p,
                None if !history.is_empty() => {
                    history.clear();
                    continue;
                }
                None => break StopReason::LineSearchStalled,
            };
            iterations += 1;

            let s: Vec<Complex<T>> = next.x.iter().zip(&cur.x).map(|(&a, &b)| a - b).collect();
            let y: Vec<Complex<T>> = next.g.iter().zip(&cur.g).map(|(&a, &b)| a - b).collect();
            let sy = dot(&s, &y);
            if sy > T::epsilon() * norm(&s) * norm(&y) {
                if history.len() == settings.memory {
                    history.pop_front();
                }
                history.push_back((s, y, T::one() / sy));
            }
            cur = next;
            if cur.f <= prob.rounding_floor {
                break StopReason::ExactFit;
            }
            if norm(&cur.g) <= tol {
                break StopReason::GradientTolerance;
            }
        }
    };

    Ok(SolveReport {
        solution: Solution::Coefficients(ComplexVector::from_raw(cur.x)),
        iterations_used: iterations,
        final_objective: cur.f,
        anchor_index: None,
        underdetermined: false,
        condition_warning: false,
        converged: matches!(stop, StopReason::GradientTolerance | StopReason::ExactFit),
    })
}

/// L-BFGS two-loop recursion: returns `-H g`.
fn two_loop<T: Real>(g: &[Complex<T>], history: &VecDeque<(Vec<Complex<T>>, Vec<Complex<T>>, T)>) -> Vec<Complex<T>> {
    let mut q = g.to_vec();
    let mut alphas = Vec::with_capacity(history.len());
    for (s, y, rho) in history.iter().rev() {
        let alpha = *rho * dot(s, &q);
        for (qk, yk) in q.iter_mut().zip(y) {
            *qk -= yk * alpha;
        }
        alphas.push(alpha);
    }
    if let Some((s, y, _)) = history.back() {
        let gamma = dot(s, y) / dot(y, y);
        for qk in q.iter_mut() {
            *qk = *qk * gamma;
        }
    }
    for ((s, y, rho), alpha) in history.iter().zip(alphas.iter().rev()) {
        let beta = *rho * dot(y, &q);
        for (qk, sk) in q.iter_mut().zip(s) {
            *qk += sk * (*alpha - beta);
        }
    }
    q.iter().map(|&v| -v).collect()
}

/// Strong-Wolfe bracketing and zoom. Returns `None` if no acceptable step
/// was found. Accepted points always have `f <= f(current)`.
fn line_search<T: Real>(
    prob: &Problem<'_, T>,
    cur: &Point<T>,
    d: &[Complex<T>],
    slope0: T,
    initial: T,
    settings: &NonconvexSettings,
) -> Result<Option<Point<T>>> {
    let c1 = T::lit(settings.c1);
    let c2 = T::lit(settings.c2);
    let eval = |alpha: T| -> Result<(Point<T>, T)> {
        let x = axpy(&cur.x, alpha, d);
        let (f, g) = prob.eval(&x);
        if !f.is_finite() {
            return Err(Error::Numerical(format!("objective became non-finite at step {alpha}")));
        }
        let slope = dot(&g, d);
        Ok((Point { x, f, g }, slope))
    };
    let armijo = |alpha: T, f: T| f <= cur.f + c1 * alpha * slope0;
    let curvature = |slope: T| slope.abs() <= -c2 * slope0;

    let mut prev_alpha = T::zero();
    let mut prev_f = cur.f;
    let mut prev_slope = slope0;
    let mut prev_point: Option<Point<T>> = None;
    let mut alpha = initial;
    for i in 0..settings.max_line_search {
        let (p, slope) = eval(alpha)?;
        if !armijo(alpha, p.f) || (i > 0 && p.f >= prev_f) {
            return zoom(cur, slope0, settings, (prev_alpha, prev_f, prev_slope, prev_point), (alpha, p.f, slope), &eval);
        }
        if curvature(slope) {
            return Ok(Some(p));
        }
        if slope >= T::zero() {
            return zoom(cur, slope0, settings, (alpha, p.f, slope, Some(p)), (prev_alpha, prev_f, prev_slope), &eval);
        }
        prev_alpha = alpha;
        prev_f = p.f;
        prev_slope = slope;
        prev_point = Some(p);
        alpha = alpha * T::lit(2.0);
    }
    // Expansion budget exhausted; the last point still satisfied Armijo.
    Ok(prev_point)
}

#[allow(clippy::type_complexity)]
fn zoom<T: Real>(
    cur: &Point<T>,
    slope0: T,
    settings: &NonconvexSettings,
    lo: (T, T, T, Option<Point<T>>),
    hi: (T, T, T),
    eval: &dyn Fn(T) -> Result<(Point<T>, T)>,
) -> Result<Option<Point<T>>> {
    let c1 = T::lit(settings.c1);
    let c2 = T::lit(settings.c2);
    let (mut a_lo, mut f_lo, mut s_lo, mut p_lo) = lo;
    let (mut a_hi, mut f_hi, mut s_hi) = hi;
    for _ in 0..settings.max_line_search {
        let alpha = interpolate(a_lo, f_lo, s_lo, a_hi, f_hi, s_hi);
        if (alpha - a_lo).abs() <= T::epsilon() * a_lo.abs().max(T::epsilon()) {
            break;
        }
        let (p, slope) = eval(alpha)?;
        if p.f > cur.f + c1 * alpha * slope0 || p.f >= f_lo {
            a_hi = alpha;
            f_hi = p.f;
            s_hi = slope;
        } else {
            if slope.abs() <= -c2 * slope0 {
                return Ok(Some(p));
            }
            if slope * (a_hi - a_lo) >= T::zero() {
                a_hi = a_lo;
                f_hi = f_lo;
                s_hi = s_lo;
            }
            a_lo = alpha;
            f_lo = p.f;
            s_lo = slope;
            p_lo = Some(p);
        }
    }
    // Fall back to the best sufficient-decrease point seen, if it improves.
    Ok(p_lo.filter(|p| p.f < cur.f))
}

/// Cubic interpolation minimizer safeguarded to the interior of the bracket.
fn interpolate<T: Real>(a_lo: T, f_lo: T, s_lo: T, a_hi: T, f_hi: T, s_hi: T) -> T {
    let width = a_hi - a_lo;
    let mid = a_lo + width / T::lit(2.0);
    let d1 = s_lo + s_hi - T::lit(3.0) * (f_lo - f_hi) / (a_lo - a_hi);
    let disc = d1 * d1 - s_lo * s_hi;
    if !(disc >= T::zero()) {
        return mid;
    }
    let d2 = width.signum() * disc.sqrt();
    let denom = s_hi - s_lo + T::lit(2.0) * d2;
    if denom == T::zero() {
        return mid;
    }
    let alpha = a_hi - width * (s_hi + d2 - d1) / denom;
    let lo_edge = a_lo + width * T::lit(0.1);
    let hi_edge = a_hi - width * T::lit(0.1);
    let (lo_b, hi_b) = if lo_edge < hi_edge { (lo_edge, hi_edge) } else { (hi_edge, lo_edge) };
    if alpha.is_finite() && alpha >= lo_b && alpha <= hi_b {
        alpha
    } else {
        mid
    }
}
