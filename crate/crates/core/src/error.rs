use thiserror::Error;

use crate::linalg::Vector;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported modulus {0}: expected a prime below 16")]
    InvalidPrime(u64),

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),

    #[error("subspace is not an ideal: bracket leaves it at {witness:?}")]
    NotAnIdeal { witness: Vector },

    #[error("subspace is not closed under the bracket: basis pair ({left}, {right})")]
    NotClosed { left: usize, right: usize },

    #[error("invalid structure constants: {0}")]
    InvalidAlgebra(String),

    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
