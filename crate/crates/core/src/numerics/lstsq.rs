//! Dense complex least squares via Householder QR with column pivoting.
//!
//! Full-rank problems are solved by back substitution on the pivoted QR
//! factor. Rank-deficient problems go through a complete orthogonal
//! decomposition so that the returned solution has minimum norm.

use num_complex::Complex;

use super::dense::{ComplexMatrix, ComplexVector};
use super::scalar::{abs2, Real};
use crate::error::{Error, Result};

/// Result of a least-squares solve with rank diagnostics.
#[derive(Debug, Clone)]
pub struct LeastSquaresSolution<T: Real> {
    pub x: ComplexVector<T>,
    /// Numerical rank detected from the pivoted triangular factor.
    pub rank: usize,
    /// `|R_last| / |R_first|` over the retained diagonal; a cheap reciprocal
    /// condition estimate.
    pub diagonal_ratio: T,
}

/// Reflector `P = I - 2 u u^H / (u^H u)` acting on the trailing part of a
/// column. `P` is Hermitian and unitary.
struct Reflector<T: Real> {
    offset: usize,
    u: Vec<Complex<T>>,
    two_over_uu: T,
}

impl<T: Real> Reflector<T> {
    /// Builds the reflector mapping `x` onto a multiple of the first unit
    /// vector. Returns `None` when `x` is already zero.
    fn annihilating(offset: usize, x: &[Complex<T>]) -> Option<Self> {
        let norm = x.iter().map(|&z| abs2(z)).sum::<T>().sqrt();
        if norm == T::zero() {
            return None;
        }
        let mut u = x.to_vec();
        let a = u[0].norm();
        let phase = if a > T::zero() { u[0] / a } else { Complex::new(T::one(), T::zero()) };
        u[0] += phase * norm;
        let uu: T = u.iter().map(|&z| abs2(z)).sum();
        Some(Self {
            offset,
            u,
            two_over_uu: T::lit(2.0) / uu,
        })
    }

    fn apply(&self, v: &mut [Complex<T>]) {
        let tail = &mut v[self.offset..];
        let zero = Complex::new(T::zero(), T::zero());
        let s = self.u.iter().zip(tail.iter()).fold(zero, |acc, (u, x)| acc + u.conj() * x);
        let s = s * self.two_over_uu;
        for (x, u) in tail.iter_mut().zip(&self.u) {
            *x -= u * s;
        }
    }
}

/// Solves `min ||M x - y||_2`, returning the minimum-norm minimizer when `M`
/// is rank deficient.
pub fn least_squares_solve<T: Real>(
    m: &ComplexMatrix<T>,
    y: &ComplexVector<T>,
) -> Result<ComplexVector<T>> {
    least_squares_detailed(m, y).map(|s| s.x)
}

pub fn least_squares_detailed<T: Real>(
    m: &ComplexMatrix<T>,
    y: &ComplexVector<T>,
) -> Result<LeastSquaresSolution<T>> {
    let (rows, cols) = (m.rows(), m.cols());
    if rows == 0 {
        return Err(Error::Dimension("least squares needs at least one row".into()));
    }
    if y.len() != rows {
        return Err(Error::Dimension(format!(
            "least squares: {rows}x{cols} matrix with right-hand side of length {}",
            y.len()
        )));
    }
    if cols == 0 {
        return Ok(LeastSquaresSolution {
            x: ComplexVector::zeros(0),
            rank: 0,
            diagonal_ratio: T::one(),
        });
    }

    // Column-major working copy.
    let mut a: Vec<Vec<Complex<T>>> = (0..cols).map(|j| m.column(j)).collect();
    let mut perm: Vec<usize> = (0..cols).collect();
    let mut rhs = y.as_slice().to_vec();
    let steps = rows.min(cols);

    for k in 0..steps {
        let pivot = (k..cols)
            .map(|j| (j, a[j][k..].iter().map(|&z| abs2(z)).sum::<T>()))
            .fold((k, -T::one()), |best, cur| if cur.1 > best.1 { cur } else { best })
            .0;
        a.swap(k, pivot);
        perm.swap(k, pivot);
        if let Some(h) = Reflector::annihilating(k, &a[k][k..]) {
            for col in a.iter_mut().skip(k) {
                h.apply(col);
            }
            h.apply(&mut rhs);
        }
    }

    let r00 = a[0][0].norm();
    let tol = T::epsilon() * T::from_usize_lossy(rows.max(cols)) * r00;
    let rank = if r00 == T::zero() {
        0
    } else {
        (0..steps).take_while(|&k| a[k][k].norm() > tol).count()
    };
    let diagonal_ratio = if rank == 0 { T::zero() } else { a[rank - 1][rank - 1].norm() / r00 };

    let zero = Complex::new(T::zero(), T::zero());
    let mut w = vec![zero; cols];
    if rank == cols {
        for i in (0..cols).rev() {
            let mut s = rhs[i];
            for j in i + 1..cols {
                s -= a[j][i] * w[j];
            }
            w[i] = s / a[i][i];
        }
    } else if rank > 0 {
        // T = [R11 R12] is rank x cols. Factor T^H = P_1..P_r [S; 0] and
        // solve S^H u = c, then w = P_1..P_r [u; 0].
        let mut th: Vec<Vec<Complex<T>>> = (0..rank)
            .map(|i| (0..cols).map(|j| a[j][i].conj()).collect())
            .collect();
        let mut reflectors = Vec::with_capacity(rank);
        for k in 0..rank {
            let h = Reflector::annihilating(k, &th[k][k..]);
            if let Some(h) = &h {
                for col in th.iter_mut().skip(k) {
                    h.apply(col);
                }
            }
            reflectors.push(h);
        }
        // S[i][j] = th[j][i] for i <= j; S^H is lower triangular.
        let mut u = vec![zero; rank];
        for i in 0..rank {
            let mut s = rhs[i];
            for j in 0..i {
                s -= th[i][j].conj() * u[j];
            }
            u[i] = s / th[i][i].conj();
        }
        w[..rank].copy_from_slice(&u);
        for h in reflectors.iter().rev().flatten() {
            h.apply(&mut w);
        }
    }

    let mut x = vec![zero; cols];
    for (k, &p) in perm.iter().enumerate() {
        x[p] = w[k];
    }
    let x = ComplexVector::new(x)
        .map_err(|_| Error::Numerical("least squares produced non-finite values".into()))?;
    Ok(LeastSquaresSolution {
        x,
        rank,
        diagonal_ratio,
    })
}
