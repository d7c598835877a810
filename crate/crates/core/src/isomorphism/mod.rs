//! Basis-free invariants, isomorphism search with checkable certificates,
//! and the explicit epimorphism from the special algebra onto a Witt
//! algebra.

mod census;
mod search;
mod special_witt;
mod toral;

pub use census::{ElementCensus, Signature};
pub use search::{find_isomorphism, IsoOutcome, IsoSearch, SearchMethod};
pub use special_witt::{phi_special_witt, SpecialWittMap};

use std::fmt;

use crate::cartan::CartanFamily;
use crate::lie::{LieAlgebra, SeriesKind};
use crate::linalg::{EchelonBuilder, Matrix, Vector};
use crate::search::SearchConfig;

/// Invariants preserved by every isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    pub p: u8,
    pub dim: usize,
    pub derived_dims: Vec<usize>,
    pub lower_central_dims: Vec<usize>,
    pub center_dim: usize,
    pub killing_rank: usize,
    /// Centre dimension of each term of the derived series.
    pub derived_center_chain: Vec<usize>,
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "p={} dim={} derived={:?} lower_central={:?} center={} killing_rank={} derived_centers={:?}",
            self.p,
            self.dim,
            self.derived_dims,
            self.lower_central_dims,
            self.center_dim,
            self.killing_rank,
            self.derived_center_chain
        )
    }
}

/// Gram matrix of `(x, y) -> trace(ad x ad y)` on the basis.
pub fn killing_form(l: &LieAlgebra) -> Matrix {
    let p = l.prime();
    let n = l.dim();
    let ads: Vec<Matrix> = (0..n).map(|i| l.ad_basis(i)).collect();
    let ads_t: Vec<Matrix> = ads.iter().map(Matrix::transpose).collect();
    let mut k = Matrix::zeros(p, n, n);
    for (i, a) in ads.iter().enumerate() {
        for (j, bt) in ads_t.iter().enumerate().skip(i) {
            // trace(AB) = Σ_r row_r(A) · column_r(B)
            let mut t = 0u8;
            for r in 0..n {
                t = p.add(t, a.row(r).dot(bt.row(r)));
            }
            if t != 0 {
                k.set(i, j, t);
                k.set(j, i, t);
            }
        }
    }
    k
}

pub fn fingerprint(l: &LieAlgebra) -> Fingerprint {
    let full = l.full_space();
    let derived = l.series(SeriesKind::Derived, &full);
    let lower = l.series(SeriesKind::LowerCentral, &full);
    let derived_center_chain = derived
        .iter()
        .map(|x| x.intersect(&l.centralizer(x)).dim())
        .collect();
    Fingerprint {
        p: l.prime().get(),
        dim: l.dim(),
        derived_dims: derived.iter().map(|s| s.dim()).collect(),
        lower_central_dims: lower.iter().map(|s| s.dim()).collect(),
        center_dim: l.center().dim(),
        killing_rank: killing_form(l).rank(),
        derived_center_chain,
    }
}

/// What a certificate's algebras are.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraDescriptor {
    /// A constructed family member after `derived` derived-algebra steps.
    Family { family: CartanFamily, derived: u32 },
    /// Hex SHA-256 of a canonical algebra file.
    Hash(String),
    /// Free-form description.
    Label(String),
}

impl fmt::Display for AlgebraDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraDescriptor::Family { family, derived } => {
                write!(f, "{family}{}", "'".repeat(*derived as usize))
            }
            AlgebraDescriptor::Hash(h) => write!(f, "sha256:{h}"),
            AlgebraDescriptor::Label(s) => write!(f, "{s}"),
        }
    }
}

/// An asserted isomorphism: column `i` of `matrix` is the image of the
/// `i`-th source basis vector in target coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoCertificate {
    pub source: AlgebraDescriptor,
    pub target: AlgebraDescriptor,
    pub matrix: Matrix,
    pub seed: u64,
    pub budget: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateVerdict {
    Accepted,
    PrimeMismatch,
    DimensionMismatch {
        source: usize,
        target: usize,
        rows: usize,
        cols: usize,
    },
    NotInvertible,
    /// `M [e_i, e_j] != [M e_i, M e_j]` for this pair `i < j`.
    BracketMismatch {
        i: usize,
        j: usize,
    },
}

impl CertificateVerdict {
    pub fn is_accepted(&self) -> bool {
        *self == CertificateVerdict::Accepted
    }
}

impl fmt::Display for CertificateVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertificateVerdict::Accepted => write!(f, "accepted"),
            CertificateVerdict::PrimeMismatch => write!(f, "rejected: field mismatch"),
            CertificateVerdict::DimensionMismatch {
                source,
                target,
                rows,
                cols,
            } => write!(
                f,
                "rejected: {rows}x{cols} matrix for algebras of dims {source} and {target}"
            ),
            CertificateVerdict::NotInvertible => write!(f, "rejected: not invertible"),
            CertificateVerdict::BracketMismatch { i, j } => {
                write!(
                    f,
                    "rejected: bracket not preserved on basis pair ({i}, {j})"
                )
            }
        }
    }
}

/// Checks invertibility and `M [e_i, e_j]_1 = [M e_i, M e_j]_2` for all
/// `i < j`, independently of how `M` was found.
pub fn verify_certificate(
    source: &LieAlgebra,
    target: &LieAlgebra,
    m: &Matrix,
) -> CertificateVerdict {
    if source.prime() != target.prime() || m.prime() != source.prime() {
        return CertificateVerdict::PrimeMismatch;
    }
    let (n1, n2) = (source.dim(), target.dim());
    if n1 != n2 || m.nrows() != n2 || m.ncols() != n1 {
        return CertificateVerdict::DimensionMismatch {
            source: n1,
            target: n2,
            rows: m.nrows(),
            cols: m.ncols(),
        };
    }
    if !m.is_invertible() {
        return CertificateVerdict::NotInvertible;
    }
    let images: Vec<Vector> = (0..n1).map(|j| m.column(j)).collect();
    for j in 0..n1 {
        for i in 0..j {
            let lhs = m.mul_vec(&source.bracket_basis(i, j));
            let rhs = target.bracket(&images[i], &images[j]);
            if lhs != rhs {
                return CertificateVerdict::BracketMismatch { i, j };
            }
        }
    }
    CertificateVerdict::Accepted
}

/// Rank of a family of vectors.
pub(crate) fn rank_of(p: crate::field::Prime, n: usize, vs: &[Vector]) -> usize {
    let mut b = EchelonBuilder::new(p, n);
    for v in vs {
        b.insert(v.clone());
    }
    b.rank()
}

/// Convenience wrapper building a certificate from a successful search.
pub fn certify(
    source: &LieAlgebra,
    target: &LieAlgebra,
    source_desc: AlgebraDescriptor,
    target_desc: AlgebraDescriptor,
    cfg: &SearchConfig,
) -> (IsoSearch, Option<IsoCertificate>) {
    let search = find_isomorphism(source, target, cfg);
    let cert = match &search.outcome {
        IsoOutcome::Found(m) => Some(IsoCertificate {
            source: source_desc,
            target: target_desc,
            matrix: m.clone(),
            seed: cfg.seed,
            budget: cfg.budget,
        }),
        _ => None,
    };
    (search, cert)
}
