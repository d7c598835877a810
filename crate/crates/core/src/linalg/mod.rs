//! Exact linear algebra over GF(p) for small primes, with bit-packed rows
//! over GF(2).

mod matrix;
mod subquotient;
mod subspace;
mod vector;

pub use matrix::{Matrix, Rref};
pub use subquotient::Subquotient;
pub use subspace::{EchelonBuilder, Subspace};
pub use vector::{Support, Vector};
