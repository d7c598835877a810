use super::{Matrix, Vector};
use crate::field::Prime;

/// A subspace of GF(p)^n held as its unique reduced row echelon basis.
///
/// Because the basis is canonical, two subspaces are equal exactly when their
/// bases are equal.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    p: Prime,
    ambient: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(p: Prime, ambient: usize) -> Self {
        Subspace {
            p,
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(p: Prime, ambient: usize) -> Self {
        Subspace {
            p,
            ambient,
            basis: (0..ambient).map(|i| Vector::unit(p, ambient, i)).collect(),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of an arbitrary collection of vectors.
    pub fn span<I>(p: Prime, ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vector>,
    {
        let mut b = EchelonBuilder::new(p, ambient);
        for v in vectors {
            b.insert(v);
            if b.is_full() {
                break;
            }
        }
        b.into_subspace()
    }

    /// Row space of `m`.
    pub fn row_space(m: &Matrix) -> Self {
        Subspace::span(m.prime(), m.ncols(), m.rows().iter().cloned())
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn codim(&self) -> usize {
        self.ambient - self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis rows as a matrix in reduced row echelon form.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_rows(self.p, self.ambient, self.basis.clone())
    }

    /// Coordinates not used as pivots; their unit vectors span a complement.
    pub fn non_pivots(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..self.ambient).filter(|&c| !is_pivot[c]).collect()
    }

    /// `v` minus the unique element of the subspace agreeing with `v` on
    /// every pivot coordinate.
    pub fn reduce(&self, v: &Vector) -> Vector {
        let mut r = v.clone();
        for (b, &c) in self.basis.iter().zip(&self.pivots) {
            let x = r.get(c);
            if x != 0 {
                r.add_scaled(b, self.p.neg(x));
            }
        }
        r
    }

    pub fn contains(&self, v: &Vector) -> bool {
        assert_eq!(v.len(), self.ambient, "ambient mismatch");
        self.reduce(v).is_zero()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Coefficients of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &Vector) -> Option<Vector> {
        if !self.contains(v) {
            return None;
        }
        Some(self.coordinates_unchecked(v))
    }

    /// Reads the pivot entries of `v`; only meaningful for members.
    pub fn coordinates_unchecked(&self, v: &Vector) -> Vector {
        let mut c = Vector::zeros(self.p, self.dim());
        for (k, &col) in self.pivots.iter().enumerate() {
            let x = v.get(col);
            if x != 0 {
                c.set(k, x);
            }
        }
        c
    }

    /// `Σ coords[k] · basis[k]`.
    pub fn from_coordinates(&self, coords: &Vector) -> Vector {
        assert_eq!(coords.len(), self.dim(), "coordinate length mismatch");
        let mut v = Vector::zeros(self.p, self.ambient);
        for (k, x) in coords.support() {
            v.add_scaled(&self.basis[k], x);
        }
        v
    }

    /// Sum and intersection together, via the Zassenhaus block elimination
    /// of `[u | u]` and `[v | 0]` rows.
    pub fn sum_and_intersection(&self, other: &Subspace) -> (Subspace, Subspace) {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        assert_eq!(self.p, other.p, "modulus mismatch");
        let n = self.ambient;
        let zero = Vector::zeros(self.p, n);
        let mut rows: Vec<Vector> = self.basis.iter().map(|u| u.concat(u)).collect();
        rows.extend(other.basis.iter().map(|v| v.concat(&zero)));
        let reduced = Matrix::from_rows(self.p, 2 * n, rows).rref();
        let mut sum = Vec::new();
        let mut meet = Vec::new();
        for (row, &c) in reduced.matrix.rows().iter().zip(&reduced.pivots) {
            if c < n {
                sum.push(row.slice(0, n));
            } else {
                meet.push(row.slice(n, 2 * n));
            }
        }
        (
            Subspace::span(self.p, n, sum),
            Subspace::span(self.p, n, meet),
        )
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::span(
            self.p,
            self.ambient,
            self.basis.iter().chain(&other.basis).cloned(),
        )
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        self.sum_and_intersection(other).1
    }

    /// `{w : w · v = 0 for all v in self}`.
    pub fn annihilator(&self) -> Subspace {
        if self.basis.is_empty() {
            return Subspace::full(self.p, self.ambient);
        }
        self.basis_matrix().kernel()
    }

    /// Image of the subspace under `m` (acting on columns).
    pub fn image(&self, m: &Matrix) -> Subspace {
        Subspace::span(self.p, m.nrows(), self.basis.iter().map(|b| m.mul_vec(b)))
    }
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Subspace(dim {} in GF({})^{}, pivots {:?})",
            self.dim(),
            self.p,
            self.ambient,
            self.pivots
        )
    }
}

/// Incrementally maintained echelon basis.
///
/// Each stored row has its leading coordinate at its pivot and vanishes on the
/// pivots of every earlier row, so reducing a vector by the rows in insertion
/// order clears all pivots.
#[derive(Clone, Debug)]
pub struct EchelonBuilder {
    p: Prime,
    ambient: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl EchelonBuilder {
    pub fn new(p: Prime, ambient: usize) -> Self {
        EchelonBuilder {
            p,
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_subspace(s: &Subspace) -> Self {
        EchelonBuilder {
            p: s.p,
            ambient: s.ambient,
            rows: s.basis.clone(),
            pivots: s.pivots.clone(),
        }
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    pub fn reduce(&self, v: &mut Vector) {
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let x = v.get(c);
            if x != 0 {
                v.add_scaled(row, self.p.neg(x));
            }
        }
    }

    pub fn contains(&self, v: &Vector) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_zero()
    }

    /// Adds `v` to the span; returns the reduced new row if the rank grew.
    pub fn insert(&mut self, mut v: Vector) -> Option<&Vector> {
        debug_assert_eq!(v.len(), self.ambient);
        self.reduce(&mut v);
        let lead = v.leading()?;
        let x = v.get(lead);
        if x != 1 {
            v.scale(self.p.inv(x));
        }
        self.rows.push(v);
        self.pivots.push(lead);
        self.rows.last()
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn into_subspace(self) -> Subspace {
        if self.rows.is_empty() {
            return Subspace::zero(self.p, self.ambient);
        }
        let r = Matrix::from_rows(self.p, self.ambient, self.rows).rref();
        let mut rows = r.matrix.into_rows();
        rows.truncate(r.rank);
        Subspace {
            p: self.p,
            ambient: self.ambient,
            basis: rows,
            pivots: r.pivots,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coord(p: Prime, n: usize, idx: &[usize]) -> Subspace {
        Subspace::span(p, n, idx.iter().map(|&i| Vector::unit(p, n, i)))
    }

    #[test]
    fn equal_subspaces() {
        let p = Prime::TWO;
        let u = Subspace::span(
            p,
            4,
            [
                Vector::from_residues(p, &[1, 1, 0, 0]),
                Vector::from_residues(p, &[0, 1, 1, 1]),
            ],
        );
        let (s, i) = u.sum_and_intersection(&u);
        assert_eq!(s, u);
        assert_eq!(i, u);
    }

    #[test]
    fn complementary_coordinate_planes() {
        let p = Prime::TWO;
        let u = coord(p, 4, &[0, 1]);
        let v = coord(p, 4, &[2, 3]);
        let (s, i) = u.sum_and_intersection(&v);
        assert!(s.is_full());
        assert!(i.is_zero());
    }

    #[test]
    fn coordinates_round_trip() {
        let p = Prime::new(3).unwrap();
        let u = Subspace::span(
            p,
            3,
            [
                Vector::from_residues(p, &[1, 2, 0]),
                Vector::from_residues(p, &[2, 1, 1]),
            ],
        );
        let mut v = u.basis()[0].scaled(2);
        v.add_assign(&u.basis()[1]);
        let c = u.coordinates(&v).unwrap();
        assert_eq!(u.from_coordinates(&c), v);
        assert!(u
            .coordinates(&Vector::from_residues(p, &[0, 1, 0]))
            .is_none());
    }

    #[test]
    fn annihilator_dimension() {
        let p = Prime::new(5).unwrap();
        let u = coord(p, 5, &[1, 3]);
        let a = u.annihilator();
        assert_eq!(a.dim(), 3);
        for w in a.basis() {
            for v in u.basis() {
                assert_eq!(w.dot(v), 0);
            }
        }
    }
}
