use num_complex::Complex;

use super::{Solution, SolveReport, StackedUnknowns};
use crate::coherence::{build_bc, CoherenceStructure, MagnitudePhaseData};
use crate::error::{Error, Result};
use crate::numerics::{least_squares_detailed, least_squares_solve, ComplexMatrix, ComplexVector, Real};

/// Reciprocal diagonal ratio of the pivoted QR factor below which a solve is
/// flagged as ill conditioned.
pub const CONDITION_WARNING_RATIO: f64 = 1e-10;

/// Unknown count of the anchored linear system.
pub fn unknowns_after_anchoring(n: usize, q: usize) -> usize {
    n + q - 1
}

/// Group whose anchor has the largest magnitude; ties go to the lowest index.
pub fn choose_anchor<T: Real>(structure: &CoherenceStructure, data: &MagnitudePhaseData<T>) -> Result<usize> {
    if data.len() != structure.m() {
        return Err(Error::Dimension(format!(
            "data has {} measurements, structure {}",
            data.len(),
            structure.m()
        )));
    }
    let mags = data.magnitudes();
    let (best, value) = (0..structure.q())
        .map(|g| (g, mags[structure.anchor(g)]))
        .fold((0, T::zero()), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
    if value == T::zero() {
        return Err(Error::NoAnchor);
    }
    Ok(best)
}

/// Solves `A z - B C psi = 0` subject to `psi_s = 1` in the least-squares
/// sense.
///
/// The constraint is eliminated exactly: column `n + s` of `[A, -BC]` moves
/// to the right-hand side, leaving an `m x (n + q - 1)` dense problem.
pub fn solve_linear_pc<T: Real>(
    a: &ComplexMatrix<T>,
    data: &MagnitudePhaseData<T>,
    structure: &CoherenceStructure,
    s: usize,
) -> Result<SolveReport<T>> {
    let (m, n, q) = (structure.m(), a.cols(), structure.q());
    if a.rows() != m {
        return Err(Error::Dimension(format!("operator has {} rows, structure {m} measurements", a.rows())));
    }
    if s >= q {
        return Err(Error::Dimension(format!("anchor group {s} out of range 0..{q}")));
    }
    if structure.groups()[s].iter().all(|&k| data.magnitudes()[k] == T::zero()) {
        return Err(Error::IndeterminateReference { group: s });
    }
    let bc = build_bc(structure, data)?;
    let unknowns = unknowns_after_anchoring(n, q);
    let zero = Complex::new(T::zero(), T::zero());

    // Reduced operator [A, -BC without column s]; rhs = BC column s.
    let mut reduced = ComplexMatrix::zeros(m, unknowns);
    let mut rhs = vec![zero; m];
    for k in 0..m {
        for j in 0..n {
            reduced[(k, j)] = a[(k, j)];
        }
        let g = structure.group_of(k);
        let entry = bc[(k, g)];
        if g == s {
            rhs[k] = entry;
        } else {
            let col = if g < s { n + g } else { n + g - 1 };
            reduced[(k, col)] = -entry;
        }
    }
    let rhs = ComplexVector::from_raw(rhs);
    let sol = least_squares_detailed(&reduced, &rhs)?;
    let residual = reduced.matvec(&sol.x)?.sub(&rhs)?.norm();

    let x = sol.x.as_slice();
    let z = ComplexVector::from_raw(x[..n].to_vec());
    let mut psi = Vec::with_capacity(q);
    psi.extend_from_slice(&x[n..n + s]);
    psi.push(Complex::new(T::one(), T::zero()));
    psi.extend_from_slice(&x[n + s..]);

    Ok(SolveReport {
        solution: Solution::Stacked(StackedUnknowns {
            z,
            psi: ComplexVector::from_raw(psi),
        }),
        iterations_used: 1,
        final_objective: residual,
        anchor_index: Some(s),
        underdetermined: m < unknowns,
        condition_warning: sol.rank < unknowns || sol.diagonal_ratio < T::lit(CONDITION_WARNING_RATIO),
        converged: true,
    })
}

/// Least-squares solve of the fully coherent system `A z = b`.
pub fn coherent_solve<T: Real>(a: &ComplexMatrix<T>, b: &ComplexVector<T>) -> Result<SolveReport<T>> {
    let sol = least_squares_detailed(a, b)?;
    let residual = a.matvec(&sol.x)?.sub(b)?.norm();
    Ok(SolveReport {
        solution: Solution::Coefficients(sol.x),
        iterations_used: 1,
        final_objective: residual,
        anchor_index: None,
        underdetermined: a.rows() < a.cols(),
        condition_warning: sol.rank < a.cols() || sol.diagonal_ratio < T::lit(CONDITION_WARNING_RATIO),
        converged: true,
    })
}

/// Re-imposes `|psi_g| = 1` on recovered group phases and solves the now
/// coherent system `A z = B C (psi / |psi|)`.
///
/// Returns `Ok(None)` when some `psi_g` is zero and no phase can be taken
/// from it; the caller should keep the unrefined solution.
pub fn coherent_resolve<T: Real>(
    a: &ComplexMatrix<T>,
    data: &MagnitudePhaseData<T>,
    structure: &CoherenceStructure,
    psi: &ComplexVector<T>,
) -> Result<Option<ComplexVector<T>>> {
    if psi.len() != structure.q() {
        return Err(Error::Dimension(format!(
            "{} phase terms for {} groups",
            psi.len(),
            structure.q()
        )));
    }
    if psi.iter().any(|p| p.norm() == T::zero()) {
        return Ok(None);
    }
    let rel = data.relative_field();
    let b_hat: Vec<Complex<T>> = rel
        .iter()
        .enumerate()
        .map(|(k, &v)| {
            let p = psi[structure.group_of(k)];
            v * (p / p.norm())
        })
        .collect();
    least_squares_solve(a, &ComplexVector::from_raw(b_hat)).map(Some)
}
