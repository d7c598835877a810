use std::fmt;

use rand::Rng;

use super::{Subspace, Vector};
use crate::field::Prime;

/// Dense matrix over GF(p), stored as a list of row vectors.
///
/// Over GF(2) every row is bit-packed, so the elimination step
/// `row_i += row_r` is a word-parallel XOR.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    p: Prime,
    cols: usize,
    rows: Vec<Vector>,
}

/// Output of [`Matrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(p: Prime, rows: usize, cols: usize) -> Self {
        Matrix {
            p,
            cols,
            rows: (0..rows).map(|_| Vector::zeros(p, cols)).collect(),
        }
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        Matrix {
            p,
            cols: n,
            rows: (0..n).map(|i| Vector::unit(p, n, i)).collect(),
        }
    }

    pub fn from_rows(p: Prime, cols: usize, rows: Vec<Vector>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            assert_eq!(r.prime(), p, "row modulus mismatch");
        }
        Matrix { p, cols, rows }
    }

    pub fn from_residues(p: Prime, cols: usize, entries: &[Vec<u8>]) -> Self {
        let rows = entries
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "row length mismatch");
                Vector::from_residues(p, r)
            })
            .collect();
        Matrix { p, cols, rows }
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(p: Prime, nrows: usize, columns: &[Vector]) -> Self {
        let mut m = Matrix::zeros(p, nrows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), nrows, "column length mismatch");
            for (i, x) in c.support() {
                m.rows[i].set(j, x);
            }
        }
        m
    }

    pub fn random<R: Rng + ?Sized>(p: Prime, rows: usize, cols: usize, rng: &mut R) -> Self {
        Matrix {
            p,
            cols,
            rows: (0..rows).map(|_| Vector::random(p, cols, rng)).collect(),
        }
    }

    /// Copy with byte-per-entry rows; selects the generic elimination kernels.
    pub fn to_dense(&self) -> Matrix {
        Matrix {
            p: self.p,
            cols: self.cols,
            rows: self.rows.iter().map(Vector::to_dense).collect(),
        }
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &Vector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vector> {
        self.rows
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.rows[i].get(j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: u8) {
        self.rows[i].set(j, x)
    }

    /// Adds `c` to entry `(i, j)`.
    #[inline]
    pub fn add_at(&mut self, i: usize, j: usize, c: u8) {
        self.rows[i].add_at(j, c)
    }

    pub fn column(&self, j: usize) -> Vector {
        let mut c = Vector::zeros(self.p, self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            let x = r.get(j);
            if x != 0 {
                c.set(i, x);
            }
        }
        c
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vector::is_zero)
    }

    pub fn trace(&self) -> u8 {
        (0..self.nrows().min(self.cols)).fold(0, |acc, i| self.p.add(acc, self.get(i, i)))
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.p, self.cols, self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            for (j, x) in r.support() {
                t.rows[j].set(i, x);
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.nrows(), "inner dimension mismatch");
        let rows = self
            .rows
            .iter()
            .map(|r| other.vec_mul(r))
            .collect::<Vec<_>>();
        Matrix {
            p: self.p,
            cols: other.cols,
            rows,
        }
    }

    /// Column action `self · v`.
    pub fn mul_vec(&self, v: &Vector) -> Vector {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        let mut out = Vector::zeros(self.p, self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            let x = r.dot(v);
            if x != 0 {
                out.set(i, x);
            }
        }
        out
    }

    /// Row action `v · self`.
    pub fn vec_mul(&self, v: &Vector) -> Vector {
        assert_eq!(self.nrows(), v.len(), "dimension mismatch");
        let mut out = Vector::zeros(self.p, self.cols);
        for (k, x) in v.support() {
            out.add_scaled(&self.rows[k], x);
        }
        out
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Matrix, c: u8) {
        assert_eq!(
            (self.nrows(), self.cols),
            (other.nrows(), other.cols),
            "shape mismatch"
        );
        for (a, b) in self.rows.iter_mut().zip(&other.rows) {
            a.add_scaled(b, c);
        }
    }

    pub fn add_identity_scaled(&mut self, c: u8) {
        for i in 0..self.nrows().min(self.cols) {
            self.rows[i].add_at(i, c);
        }
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "column mismatch");
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Matrix {
            p: self.p,
            cols: self.cols,
            rows,
        }
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.nrows(), other.nrows(), "row mismatch");
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.concat(b))
            .collect();
        Matrix {
            p: self.p,
            cols: self.cols + other.cols,
            rows,
        }
    }

    /// Reduced row echelon form. Pivots are chosen leftmost column first,
    /// topmost candidate row first, so the result is reproducible.
    pub fn rref(&self) -> Rref {
        let mut rows = self.rows.clone();
        let pivots = eliminate(self.p, self.cols, &mut rows);
        let rank = pivots.len();
        Rref {
            matrix: Matrix {
                p: self.p,
                cols: self.cols,
                rows,
            },
            rank,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Null space `{v : self · v = 0}`.
    pub fn kernel(&self) -> Subspace {
        let Rref { matrix, pivots, .. } = self.rref();
        let p = self.p;
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let basis = (0..self.cols).filter(|&f| !is_pivot[f]).map(|f| {
            let mut v = Vector::zeros(p, self.cols);
            v.set(f, 1);
            for (k, &c) in pivots.iter().enumerate() {
                let x = matrix.get(k, f);
                if x != 0 {
                    v.set(c, p.neg(x));
                }
            }
            v
        });
        Subspace::span(p, self.cols, basis)
    }

    /// `{v : v · self = 0}`.
    pub fn left_kernel(&self) -> Subspace {
        self.transpose().kernel()
    }

    /// Some `x` with `self · x = b`; free variables are set to zero.
    pub fn solve(&self, b: &Vector) -> Option<Vector> {
        assert_eq!(b.len(), self.nrows(), "right-hand side length mismatch");
        let rhs = Matrix::from_columns(self.p, self.nrows(), std::slice::from_ref(b));
        let Rref { matrix, pivots, .. } = self.hstack(&rhs).rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = Vector::zeros(self.p, self.cols);
        for (k, &c) in pivots.iter().enumerate() {
            let v = matrix.get(k, self.cols);
            if v != 0 {
                x.set(c, v);
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        let n = self.nrows();
        if n != self.cols {
            return None;
        }
        if n == 0 {
            return Some(self.clone());
        }
        let Rref { matrix, pivots, .. } = self.hstack(&Matrix::identity(self.p, n)).rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let rows = matrix.rows.iter().map(|r| r.slice(n, 2 * n)).collect();
        Some(Matrix {
            p: self.p,
            cols: n,
            rows,
        })
    }

    pub fn is_invertible(&self) -> bool {
        self.nrows() == self.cols && self.rank() == self.cols
    }
}

/// In-place Gauss–Jordan elimination; returns pivot columns.
fn eliminate(p: Prime, cols: usize, rows: &mut [Vector]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(i) = (r..rows.len()).find(|&i| rows[i].get(c) != 0) else {
            continue;
        };
        rows.swap(r, i);
        let lead = rows[r].get(c);
        if lead != 1 {
            rows[r].scale(p.inv(lead));
        }
        let (head, tail) = rows.split_at_mut(r);
        let (pivot, tail) = tail.split_first_mut().expect("pivot row exists");
        for row in head.iter_mut().chain(tail.iter_mut()) {
            let x = row.get(c);
            if x != 0 {
                row.add_scaled(pivot, p.neg(x));
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "Matrix {}x{} over GF({}):",
            self.nrows(),
            self.cols,
            self.p
        )?;
        for r in &self.rows {
            writeln!(f, "  {r:?}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf2(rows: &[&[u8]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_residues(
            Prime::TWO,
            cols,
            &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(),
        )
    }

    #[test]
    fn identity_is_its_own_rref() {
        let id = Matrix::identity(Prime::TWO, 3);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 3);
        assert_eq!(r.pivots, vec![0, 1, 2]);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let z = Matrix::zeros(Prime::TWO, 2, 3);
        let r = z.rref();
        assert_eq!(r.rank, 0);
        assert!(r.matrix.is_zero());
        assert_eq!(z.kernel().dim(), 3);
    }

    #[test]
    fn dependent_rows_over_gf2() {
        let m = gf2(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        let r = m.rref();
        assert_eq!(r.rank, 2);
        assert_eq!(r.matrix, gf2(&[&[1, 0, 1], &[0, 1, 1], &[0, 0, 0]]));
        let k = m.kernel();
        assert_eq!(k.dim(), 1);
        let ones = Vector::from_residues(Prime::TWO, &[1, 1, 1]);
        assert!(k.contains(&ones));
        assert!(m.mul_vec(&ones).is_zero());
    }

    #[test]
    fn solve_identity_and_inconsistent() {
        let p = Prime::new(3).unwrap();
        let b = Vector::from_residues(p, &[2, 1, 0]);
        assert_eq!(Matrix::identity(p, 3).solve(&b), Some(b.clone()));
        assert_eq!(Matrix::zeros(p, 3, 3).solve(&b), None);
    }

    #[test]
    fn solve_sets_free_variables_to_zero() {
        let m = gf2(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        let mut b = m.column(0);
        b.add_assign(&m.column(1));
        let x = m.solve(&b).expect("consistent");
        assert_eq!(m.mul_vec(&x), b);
        assert_eq!(x.get(2), 0, "free column is zero");
    }

    #[test]
    fn inverse_mod_seven() {
        let p = Prime::new(7).unwrap();
        let m = Matrix::from_residues(p, 2, &[vec![2, 3], vec![1, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(p, 2));
        let singular = Matrix::from_residues(p, 2, &[vec![1, 2], vec![2, 4]]);
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn transpose_and_products_agree() {
        let p = Prime::new(5).unwrap();
        let a = Matrix::from_residues(p, 3, &[vec![1, 2, 3], vec![0, 4, 1]]);
        let b = Matrix::from_residues(p, 2, &[vec![1, 0], vec![2, 1], vec![3, 3]]);
        let ab = a.mul(&b);
        assert_eq!(ab.transpose(), b.transpose().mul(&a.transpose()));
        let v = Vector::from_residues(p, &[1, 1, 2]);
        assert_eq!(a.mul_vec(&v), a.transpose().vec_mul(&v));
    }
}
