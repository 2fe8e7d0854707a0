use thiserror::Error;

/// Errors raised by the spectral, operator and certificate layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("spectral functions live on incompatible grids")]
    IncompatibleGrids,

    /// The evaluation point is too far from the real axis for the
    /// quadrature to keep meaningful relative precision.
    #[error("evaluation out of range: |Im z| = {im} exceeds growth bound {bound}")]
    EvaluationOutOfRange { im: f64, bound: f64 },

    #[error("symbol with slope a = 1 has no unique fixed point")]
    NoUniqueFixedPoint,

    /// For |a| < 1 the adjoint is not a composition operator: f(z/a) has
    /// exponential type σ/|a| and leaves the space.
    #[error("adjoint of C_phi is not a composition operator for |a| = {a_abs} < 1")]
    AdjointNotCompositionOperator { a_abs: f64 },

    #[error("grid of {n_nodes} nodes too coarse for basis size M = {basis_m} (need at least {required})")]
    GridTooCoarse {
        n_nodes: usize,
        basis_m: usize,
        required: usize,
    },

    #[error("Gram system could not be solved: {0}")]
    GramSolve(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
