//! Exact arithmetic over `Z`, `Z/NZ` and `Z[a1, a2, ...]`, plus the matrix
//! kernels built on top of it.

mod congruence;
mod matrix;
mod poly;
mod ring;

pub use congruence::{inverse, solve_linear_congruence, CongruenceSolutions, Family};
pub use matrix::Matrix;
pub use poly::{Monomial, Polynomial, Var};
pub use ring::{poly_eval, Modulus, Residue, RingSpec, RingValue};

pub(crate) use matrix::{corner_det3, det2, det3};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch { left: RingSpec, right: RingSpec },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("bad shape: {0}")]
    Shape(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),

    #[error("no value assigned to a{0}")]
    MissingVariable(Var),

    #[error("division by zero")]
    DivisionByZero,

    #[error("inexact division")]
    NotDivisible,
}
