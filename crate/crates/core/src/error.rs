//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by construction and lattice/algebra operations.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("matrix dimension mismatch: {left}x{left} vs {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("generator {index} is not Hermitian (max |A - A†| = {residual:e})")]
    NotHermitian { index: usize, residual: f64 },

    #[error(
        "generators {first} and {second} are not trace-orthogonal \
         (tr(T_{first} T_{second}) = {value:e}, expected {expected:e})"
    )]
    NonOrthogonalGenerators {
        first: usize,
        second: usize,
        value: f64,
        expected: f64,
    },

    #[error(
        "generators do not close under commutation: residual {residual:e} \
         for pair ({alpha}, {beta}) exceeds {tolerance:e}"
    )]
    AlgebraNotClosed {
        alpha: usize,
        beta: usize,
        residual: f64,
        tolerance: f64,
    },

    #[error("unknown algebra '{name}'; supported: u1, su2, su3")]
    UnknownAlgebra { name: String },

    #[error("lattice extent {extent} on axis {axis} is below the minimum of 4")]
    ExtentTooSmall { axis: usize, extent: usize },

    #[error("lattice spacing must be positive, got {value}")]
    NonPositiveSpacing { value: f64 },

    #[error("axis {axis} out of range (valid: 0..4)")]
    AxisOutOfRange { axis: usize },

    #[error("field shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("fields live on different lattices")]
    LatticeMismatch,

    #[error("representation dimension mismatch: field has {found}, algebra expects {expected}")]
    RepresentationMismatch { expected: usize, found: usize },

    #[error("adjoint dimension mismatch: field has {found}, algebra expects {expected}")]
    AdjointMismatch { expected: usize, found: usize },

    #[error("coupling must be positive, got {value}")]
    NonPositiveCoupling { value: f64 },

    #[error("mass must be non-negative, got {value}")]
    NegativeMass { value: f64 },

    #[error("λ tensor has a zero component at site {site} (index ν={nu}, μ={mu})")]
    LambdaZeroComponent { site: usize, nu: usize, mu: usize },

    #[error("configuration is not in the reduction regime: {reason}")]
    NotReductionRegime { reason: String },

    #[error("{0}")]
    Invalid(String),
}
