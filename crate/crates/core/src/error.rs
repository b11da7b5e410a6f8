use thiserror::Error;

use crate::algebra::QTElement;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("level r must be at least 1, got {0}")]
    InvalidLevel(i64),

    #[error("complex structure needs Im(tau) > 0, got {0}")]
    DegenerateModulus(f64),

    #[error("quadrature grid of {grid_n} points is too coarse, need at least {min}")]
    GridTooCoarse { grid_n: usize, min: usize },

    #[error("operator does not preserve the alternating subspace (leak {leak:.3e} > {bound:.3e})")]
    SubspaceNotPreserved { leak: f64, bound: f64 },

    #[error("operator has basis {found:?}, expected {expected:?}")]
    BasisMismatch {
        expected: crate::Basis,
        found: crate::Basis,
    },

    #[error("matrix of size {found} does not match the {basis:?} basis dimension {expected}")]
    DimensionMismatch {
        basis: crate::Basis,
        expected: usize,
        found: usize,
    },

    #[error("element is not invariant under e(a,b) -> e(-a,-b)")]
    NotInvariant,

    #[error("symbol is not even under the involution z -> -z")]
    SymbolNotEven,

    #[error("symbol is not real-valued")]
    SymbolNotReal,

    #[error("kernel norm does not decay: fitted slope {slope:.4} >= 0")]
    NonDecaying { slope: f64 },

    #[error("representation is not an anti-homomorphism: deviation {deviation:.3e} on pair {x} / {y}")]
    IsomorphismViolation {
        x: Box<QTElement>,
        y: Box<QTElement>,
        deviation: f64,
    },

    #[error("unknown knot preset {0:?}")]
    UnknownKnot(String),

    #[error("color {n} is outside 1..={r}")]
    ColorOutOfRange { n: usize, r: u32 },

    #[error("polynomial is identically zero")]
    DegeneratePolynomial,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("could not parse polynomial {input:?}: {reason}")]
    PolynomialParse { input: String, reason: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
