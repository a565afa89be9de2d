//! Retrieval paths: the linear partial-coherence solve, the nonconvex
//! intensity least-squares baseline with spectral initialization, and the
//! coherent (re-)solves used as references and refinement.

mod linear;
mod nonconvex;
mod spectral;

pub use linear::{
    choose_anchor, coherent_resolve, coherent_solve, solve_linear_pc, unknowns_after_anchoring,
    CONDITION_WARNING_RATIO,
};
pub use nonconvex::{intensity_objective, solve_nonconvex, NonconvexSettings, StopReason};
pub use spectral::spectral_initialize;

use crate::numerics::{ComplexVector, Real};

/// Unknowns of the linear formulation: source coefficients and one phase
/// term per coherence group.
#[derive(Debug, Clone, PartialEq)]
pub struct StackedUnknowns<T: Real> {
    pub z: ComplexVector<T>,
    pub psi: ComplexVector<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Solution<T: Real> {
    Stacked(StackedUnknowns<T>),
    Coefficients(ComplexVector<T>),
}

impl<T: Real> Solution<T> {
    /// Source coefficients regardless of the formulation.
    pub fn z(&self) -> &ComplexVector<T> {
        match self {
            Solution::Stacked(s) => &s.z,
            Solution::Coefficients(z) => z,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport<T: Real> {
    pub solution: Solution<T>,
    pub iterations_used: usize,
    pub final_objective: T,
    /// Group whose phase term was pinned to 1 (linear solve only).
    pub anchor_index: Option<usize>,
    /// Fewer equations than unknowns; the minimum-norm solution is returned.
    pub underdetermined: bool,
    /// Numerically rank deficient or close to it.
    pub condition_warning: bool,
    /// Iterative solvers: stopped on the gradient criterion.
    pub converged: bool,
}
