//! Graded Lie algebras of Cartan type over small prime fields.

pub mod cartan;
pub mod divided_power;
pub mod error;
pub mod field;
pub mod isomorphism;
pub mod lie;
pub mod linalg;
pub mod search;
pub mod structure;

pub use cartan::{build, CartanAlgebra, CartanFamily, FamilyKind};
pub use error::{Error, Result};
pub use field::{FieldElement, Prime};
pub use isomorphism::{
    find_isomorphism, fingerprint, verify_certificate, AlgebraDescriptor, CertificateVerdict,
    Fingerprint, IsoCertificate, IsoOutcome,
};
pub use lie::{LieAlgebra, SeriesKind};
pub use linalg::{Matrix, Subspace, Vector};
pub use search::SearchConfig;
