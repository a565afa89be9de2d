//! Phase retrieval for measurements with locally known phase relations.
//!
//! The central routine is [`solvers::solve_linear_pc`], which recovers source
//! coefficients from magnitudes plus intra-group phase differences by a
//! single linear least-squares solve over source coefficients and one phase
//! term per coherence group. Nonconvex intensity-based baselines, synthetic
//! measurement models, deviation metrics and an experiment harness are
//! provided alongside.
//!
//! The linear algebra, coherence matrices, metrics and solvers are generic
//! over the real scalar ([`Real`]: `f32` or `f64`); the models and harness
//! work in double precision through the aliases below.

pub mod coherence;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod models;
pub mod numerics;
pub mod seeds;
pub mod solvers;

pub use error::{Error, Result};
pub use numerics::{ComplexMatrix, ComplexVector, Real};

/// Double-precision complex matrix.
pub type CMatrix = ComplexMatrix<f64>;
/// Double-precision complex vector.
pub type CVector = ComplexVector<f64>;
/// Single-precision complex matrix.
pub type CMatrix32 = ComplexMatrix<f32>;
/// Single-precision complex vector.
pub type CVector32 = ComplexVector<f32>;
/// Double-precision magnitude/phase data.
pub type PhaseData = coherence::MagnitudePhaseData<f64>;
/// Double-precision solve report.
pub type Report = solvers::SolveReport<f64>;
