//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}x{1} vs {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),

    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),

    #[error("element is not in the algebra (residual {residual:.3e}, tol {tol:.3e})")]
    NotInAlgebra { residual: f64, tol: f64 },

    #[error("subspace is not contained in the algebra")]
    NotContained,

    #[error("subspace is not closed under adjoints")]
    NotStarClosed,

    #[error("not an automorphism of A: basis image residual {residual:.3e} exceeds tol {tol:.3e}")]
    NotAnAutomorphism { residual: f64, tol: f64 },

    #[error("order does not divide n: ||alpha^n - id|| = {residual:.3e}")]
    OrderMismatch { residual: f64 },

    #[error("matrix is not unitary within tolerance (residual {0:.3e})")]
    NotUnitary(f64),

    #[error("invalid block permutation: {0}")]
    BadPermutation(String),

    #[error("degenerate center sample")]
    DegenerateCenterSample,

    #[error("not semisimple within tolerance: {0}")]
    NotSemisimple(String),

    #[error("not a *-homomorphism within tolerance: {0}")]
    NotAHomomorphism(String),

    #[error("not in image subalgebra: block ({row},{col}) residual {residual:.3e}")]
    NotInImageSubalgebra {
        row: usize,
        col: usize,
        residual: f64,
    },

    #[error("group homomorphism is not well defined on torsion generators")]
    IllDefinedHom,

    #[error("homomorphisms are not composable at position {0}")]
    NotComposable(usize),

    #[error("exactness failure: {0}")]
    ExactnessFailure(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}
