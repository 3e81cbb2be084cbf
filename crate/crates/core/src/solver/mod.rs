//! Embedded dense convex-QP solver (active set) and an SQP layer on top of it
//! for the nonlinear collocation problems.
//!
//! Both solvers are deterministic: identical problems yield identical
//! reports. Instances hold no global state, so distinct problems may be
//! solved concurrently.

mod nlp;
mod qp;

pub use nlp::{
    solve_nlp, FnNlp, JacobianMode, NlpFunctions, NlpOptions, NlpProblem, QpAsNlp,
};
pub use qp::{solve_qp, ConstraintRef, QpOptions, QpProblem};

use nalgebra::DVector;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Termination state of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    MaxIterations,
    NumericalFailure,
}

/// Outcome of a QP or NLP solve. Immutable after return.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub solution: DVector<f64>,
    /// Multipliers laid out as `[equalities; inequality rows; variable bounds]`.
    /// Inequality and bound entries are signed: positive when the lower side
    /// is active, negative when the upper side is active, zero when inactive.
    pub multipliers: DVector<f64>,
    pub iterations: usize,
    /// Max of stationarity residual and constraint violation at the solution.
    pub kkt_residual: f64,
    /// Active inequality/bound facets at the solution, usable as a warm start.
    pub active_set: Vec<ConstraintRef>,
}

impl SolveReport {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    Dimension {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("cost matrix is not symmetric (max asymmetry {0:.3e})")]
    Asymmetric(f64),
    #[error("lower bound exceeds upper bound at index {0}")]
    BoundOrder(usize),
    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),
    #[error("debug dump failed: {0}")]
    DebugDump(#[from] std::io::Error),
}
