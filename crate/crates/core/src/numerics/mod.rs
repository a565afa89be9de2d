//! Dense complex linear algebra used by every other module.

mod dense;
mod eigen;
mod lstsq;
pub mod scalar;

pub use dense::{ComplexMatrix, ComplexVector};
pub use eigen::dominant_eigenvector;
pub use lstsq::{least_squares_detailed, least_squares_solve, LeastSquaresSolution};
pub use scalar::{abs2, cis, wrap_phase, Real};

use crate::error::Result;

/// `m * x`; fails on a dimension mismatch.
pub fn matvec<T: Real>(m: &ComplexMatrix<T>, x: &ComplexVector<T>) -> Result<ComplexVector<T>> {
    m.matvec(x)
}
