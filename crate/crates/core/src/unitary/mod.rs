//! Word maps on `SU(n)` and `U(n)`: Haar sampling, evaluation with
//! analytic gradients, and a Riemannian descent solver for `w(x) = target`.

mod eval;
mod matrix;
mod solve;

use thiserror::Error;

pub use eval::{evaluate, residual_and_gradient, CoefficientAssignment, CompiledWord, Gradient};
pub use matrix::{
    exp_skew_hermitian, haar_from_rng, haar_random, haar_random_in, matrix_from_rows, matrix_to_rows,
    project_to_algebra, reproject, unitarity_defect, CMatrix, GroupKind, UnitaryMatrix, C64, CONSTRUCTION_TOL,
};
pub use solve::{
    scan_target_seed, solve, solve_sequential, solve_traced, surjectivity_scan, RestartSummary, ScanReport,
    ScanTarget, SolveConfig, SolveOutcome, SolveRun, Solution,
};

/// An element of `SU(n)`; [`UnitaryMatrix`] values built for
/// [`GroupKind::Special`] satisfy both invariants.
pub type SpecialUnitaryMatrix = UnitaryMatrix;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UnitaryError {
    #[error("matrix is {0}x{1}, expected square and nonempty")]
    NotSquare(usize, usize),
    #[error("matrix is not unitary: |U^H U - I|_F = {0:e}")]
    NotUnitary(f64),
    #[error("matrix does not have determinant 1: |det U - 1| = {0:e}")]
    NotSpecial(f64),
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("coefficient symbol `{0}` has no matrix")]
    UnresolvedSymbol(String),
    #[error("expected {expected} variable matrices, found {found}")]
    VariableCount { expected: usize, found: usize },
    #[error("no matrices to infer a dimension from")]
    NoMatrices,
    #[error("the word has no variables")]
    NoVariables,
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
}
