//! Finite-dimensional Lie algebras given by structure constants, and the
//! subspace machinery built on them: products, series, ideal closure,
//! centralizers, quotients and restriction to subalgebras.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::field::Prime;
use crate::linalg::{EchelonBuilder, Matrix, Subquotient, Subspace, Vector};

#[inline]
fn tri(i: usize, j: usize) -> usize {
    debug_assert!(i < j);
    j * (j - 1) / 2 + i
}

/// A Lie algebra over GF(p) with basis `e_0, ..., e_{dim-1}`.
///
/// Only `[e_i, e_j]` with `i < j` is stored; `[e_j, e_i] = -[e_i, e_j]` and
/// `[e_i, e_i] = 0` are implied, so the bracket is alternating by
/// construction. The Jacobi identity is checked by [`LieAlgebra::validate`].
#[derive(Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    p: Prime,
    dim: usize,
    labels: Vec<String>,
    table: Vec<Vec<(u32, u8)>>,
}

/// Jacobi identity failure on a basis triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiViolation {
    pub triple: (usize, usize, usize),
    pub jacobiator: Vector,
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub triples_checked: u64,
    pub violation_count: u64,
    /// The first few violations, in triple order.
    pub violations: Vec<JacobiViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violation_count == 0
    }
}

const REPORTED_VIOLATIONS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesKind {
    Derived,
    LowerCentral,
}

/// A quotient algebra together with the coordinates it was built on.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub algebra: LieAlgebra,
    pub map: Subquotient,
}

impl Quotient {
    /// `dim(L/I) x dim(L)` projection matrix.
    pub fn projection(&self) -> Matrix {
        self.map.projection_matrix()
    }
}

impl LieAlgebra {
    /// Builds an algebra from `(i, j, k, c)` entries meaning `c` is the
    /// coefficient of `e_k` in `[e_i, e_j]`, `i < j`.
    pub fn from_entries<I>(p: Prime, labels: Vec<String>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, usize, u8)>,
    {
        let dim = labels.len();
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidAlgebra(format!("duplicate label {l:?}")));
            }
        }
        let mut table = vec![Vec::new(); dim * dim.saturating_sub(1) / 2];
        for (n, (i, j, k, c)) in entries.into_iter().enumerate() {
            if !(i < j && j < dim && k < dim) {
                return Err(Error::InvalidAlgebra(format!(
                    "entry {n}: indices ({i}, {j}, {k}) must satisfy i < j < dim and k < dim = {dim}"
                )));
            }
            if c == 0 || c >= p.get() {
                return Err(Error::InvalidAlgebra(format!(
                    "entry {n}: coefficient {c} must be a nonzero residue mod {p}"
                )));
            }
            let slot = &mut table[tri(i, j)];
            if slot.iter().any(|&(kk, _)| kk as usize == k) {
                return Err(Error::InvalidAlgebra(format!(
                    "entry {n}: duplicate structure constant ({i}, {j}, {k})"
                )));
            }
            slot.push((k as u32, c));
        }
        for slot in &mut table {
            slot.sort_unstable();
        }
        Ok(LieAlgebra {
            p,
            dim,
            labels,
            table,
        })
    }

    /// Builds an algebra from a function returning `[e_i, e_j]` for `i < j`.
    pub fn from_bracket_fn<F>(p: Prime, labels: Vec<String>, mut f: F) -> Self
    where
        F: FnMut(usize, usize) -> Vector,
    {
        let dim = labels.len();
        let mut table = Vec::with_capacity(dim * dim.saturating_sub(1) / 2);
        for j in 0..dim {
            for i in 0..j {
                let v = f(i, j);
                debug_assert_eq!(v.len(), dim);
                table.push(v.support().map(|(k, c)| (k as u32, c)).collect());
            }
        }
        LieAlgebra {
            p,
            dim,
            labels,
            table,
        }
    }

    pub fn abelian(p: Prime, dim: usize) -> Self {
        let labels = (0..dim).map(|i| format!("e{i}")).collect();
        LieAlgebra::from_bracket_fn(p, labels, |_, _| Vector::zeros(p, dim))
    }

    /// `a ⊕ b` with `[a, b] = 0`; labels are prefixed to stay unique.
    pub fn direct_sum(a: &LieAlgebra, b: &LieAlgebra) -> Self {
        assert_eq!(a.p, b.p, "modulus mismatch");
        let (da, db) = (a.dim, b.dim);
        let labels = a
            .labels
            .iter()
            .map(|l| format!("L1:{l}"))
            .chain(b.labels.iter().map(|l| format!("L2:{l}")))
            .collect();
        LieAlgebra::from_bracket_fn(a.p, labels, |i, j| {
            let mut v = Vector::zeros(a.p, da + db);
            if j < da {
                for (k, c) in a.bracket_basis(i, j).support() {
                    v.set(k, c);
                }
            } else if i >= da {
                for (k, c) in b.bracket_basis(i - da, j - da).support() {
                    v.set(da + k, c);
                }
            }
            v
        })
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// All stored constants `(i, j, k, c)`, `i < j`, in lexicographic order.
    pub fn structure_constants(&self) -> Vec<(usize, usize, usize, u8)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for &(k, c) in &self.table[tri(i, j)] {
                    out.push((i, j, k as usize, c));
                }
            }
        }
        out
    }

    /// Number of stored nonzero structure constants.
    pub fn nonzero_constants(&self) -> usize {
        self.table.iter().map(Vec::len).sum()
    }

    pub fn is_abelian(&self) -> bool {
        self.table.iter().all(Vec::is_empty)
    }

    /// Sparse `[e_i, e_j]` with the orientation applied.
    #[inline]
    fn for_each_term(&self, i: usize, j: usize, mut f: impl FnMut(usize, u8)) {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => {
                for &(k, c) in &self.table[tri(i, j)] {
                    f(k as usize, c);
                }
            }
            std::cmp::Ordering::Greater => {
                for &(k, c) in &self.table[tri(j, i)] {
                    f(k as usize, self.p.neg(c));
                }
            }
            std::cmp::Ordering::Equal => {}
        }
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Vector {
        let mut v = Vector::zeros(self.p, self.dim);
        self.for_each_term(i, j, |k, c| v.add_at(k, c));
        v
    }

    pub fn bracket(&self, u: &Vector, v: &Vector) -> Vector {
        assert_eq!(u.len(), self.dim, "dimension mismatch");
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        let p = self.p;
        let mut out = Vector::zeros(p, self.dim);
        for (i, x) in u.support() {
            for (j, y) in v.support() {
                let xy = p.mul(x, y);
                self.for_each_term(i, j, |k, c| out.add_at(k, p.mul(xy, c)));
            }
        }
        out
    }

    /// `[e_i, v]`.
    pub fn bracket_with_basis(&self, i: usize, v: &Vector) -> Vector {
        let p = self.p;
        let mut out = Vector::zeros(p, self.dim);
        for (j, y) in v.support() {
            self.for_each_term(i, j, |k, c| out.add_at(k, p.mul(y, c)));
        }
        out
    }

    /// Matrix of `ad x = [x, -]`, acting on column vectors.
    pub fn ad(&self, x: &Vector) -> Matrix {
        let p = self.p;
        let mut m = Matrix::zeros(p, self.dim, self.dim);
        for (i, a) in x.support() {
            for j in 0..self.dim {
                self.for_each_term(i, j, |k, c| m.add_at(k, j, p.mul(a, c)));
            }
        }
        m
    }

    pub fn ad_basis(&self, i: usize) -> Matrix {
        self.ad(&Vector::unit(self.p, self.dim, i))
    }

    pub fn unit(&self, i: usize) -> Vector {
        Vector::unit(self.p, self.dim, i)
    }

    pub fn zero_space(&self) -> Subspace {
        Subspace::zero(self.p, self.dim)
    }

    pub fn full_space(&self) -> Subspace {
        Subspace::full(self.p, self.dim)
    }

    /// Checks the Jacobi identity on every basis triple `i < j < k`; the
    /// Jacobiator is alternating, so these triples suffice.
    pub fn validate(&self) -> ValidationReport {
        let p = self.p;
        let mut report = ValidationReport::default();
        let mut acc = vec![0u8; self.dim];
        let mut touched = Vec::new();
        let add = |acc: &mut Vec<u8>, touched: &mut Vec<usize>, k: usize, c: u8| {
            if acc[k] == 0 {
                touched.push(k);
            }
            acc[k] = p.add(acc[k], c);
        };
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for k in j + 1..self.dim {
                    // [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        self.for_each_term(a, b, |t, x| {
                            self.for_each_term(t, c, |s, y| {
                                add(&mut acc, &mut touched, s, p.mul(x, y))
                            })
                        });
                    }
                    report.triples_checked += 1;
                    let bad = touched.iter().any(|&s| acc[s] != 0);
                    if bad {
                        report.violation_count += 1;
                        if report.violations.len() < REPORTED_VIOLATIONS {
                            let mut v = Vector::zeros(p, self.dim);
                            for &s in &touched {
                                if acc[s] != 0 {
                                    v.set(s, acc[s]);
                                }
                            }
                            report.violations.push(JacobiViolation {
                                triple: (i, j, k),
                                jacobiator: v,
                            });
                        }
                    }
                    for &s in &touched {
                        acc[s] = 0;
                    }
                    touched.clear();
                }
            }
        }
        report
    }

    /// `[U, V]`: span of brackets of basis vectors.
    pub fn product_space(&self, u: &Subspace, v: &Subspace) -> Subspace {
        self.check_space(u);
        self.check_space(v);
        let same = u == v;
        let mut b = EchelonBuilder::new(self.p, self.dim);
        'outer: for (a, x) in u.basis().iter().enumerate() {
            let start = if same { a + 1 } else { 0 };
            for y in &v.basis()[start..] {
                b.insert(self.bracket(x, y));
                if b.is_full() {
                    break 'outer;
                }
            }
        }
        b.into_subspace()
    }

    pub fn derived_subalgebra(&self, u: &Subspace) -> Subspace {
        self.product_space(u, u)
    }

    /// Derived (`X_{k+1} = [X_k, X_k]`) or lower central
    /// (`X_{k+1} = [X_0, X_k]`) series from `start`, stopping before the
    /// first term equal to its predecessor.
    pub fn series(&self, kind: SeriesKind, start: &Subspace) -> Vec<Subspace> {
        let mut chain = vec![start.clone()];
        loop {
            let last = chain.last().expect("nonempty chain");
            let next = match kind {
                SeriesKind::Derived => self.product_space(last, last),
                SeriesKind::LowerCentral => self.product_space(start, last),
            };
            let stable = next.dim() == last.dim();
            if stable {
                break;
            }
            chain.push(next);
        }
        chain
    }

    /// Last term of the derived series of `L`.
    pub fn perfect_core(&self) -> Subspace {
        self.series(SeriesKind::Derived, &self.full_space())
            .pop()
            .expect("nonempty chain")
    }

    pub fn is_solvable(&self) -> bool {
        self.perfect_core().is_zero()
    }

    /// Smallest ideal containing `seed`, by breadth-first spinning under
    /// `ad e_0, ..., ad e_{dim-1}`.
    pub fn ideal_closure<I>(&self, seed: I) -> Subspace
    where
        I: IntoIterator<Item = Vector>,
    {
        let mut b = EchelonBuilder::new(self.p, self.dim);
        let mut queue = VecDeque::new();
        for v in seed {
            if let Some(r) = b.insert(v) {
                queue.push_back(r.clone());
            }
        }
        while let Some(w) = queue.pop_front() {
            if b.is_full() {
                break;
            }
            for i in 0..self.dim {
                if let Some(r) = b.insert(self.bracket_with_basis(i, &w)) {
                    queue.push_back(r.clone());
                }
            }
        }
        b.into_subspace()
    }

    /// Subalgebra generated by `gens`: the span of right-normed brackets,
    /// obtained by spinning the generators under their own `ad`.
    pub fn subalgebra_closure(&self, gens: &[Vector]) -> Subspace {
        let ads: Vec<Matrix> = gens.iter().map(|g| self.ad(g)).collect();
        let mut b = EchelonBuilder::new(self.p, self.dim);
        let mut queue = VecDeque::new();
        for g in gens {
            if let Some(r) = b.insert(g.clone()) {
                queue.push_back(r.clone());
            }
        }
        while let Some(w) = queue.pop_front() {
            if b.is_full() {
                break;
            }
            for a in &ads {
                if let Some(r) = b.insert(a.mul_vec(&w)) {
                    queue.push_back(r.clone());
                }
            }
        }
        b.into_subspace()
    }

    /// `{x : [x, u] = 0 for all u in U}`.
    pub fn centralizer(&self, u: &Subspace) -> Subspace {
        self.check_space(u);
        let mut rows = EchelonBuilder::new(self.p, self.dim);
        'outer: for b in u.basis() {
            // [x, b] = -ad(b) x, so the rows of ad(b) are the constraints.
            for r in self.ad(b).into_rows() {
                rows.insert(r);
                if rows.is_full() {
                    break 'outer;
                }
            }
        }
        rows.into_subspace().annihilator()
    }

    pub fn center(&self) -> Subspace {
        self.centralizer(&self.full_space())
    }

    /// `Err` carries some `[e_i, b]` outside `I`.
    pub fn check_ideal(&self, ideal: &Subspace) -> Result<()> {
        self.check_space(ideal);
        for b in ideal.basis() {
            for i in 0..self.dim {
                let w = self.bracket_with_basis(i, b);
                if !ideal.contains(&w) {
                    return Err(Error::NotAnIdeal { witness: w });
                }
            }
        }
        Ok(())
    }

    pub fn is_ideal(&self, ideal: &Subspace) -> bool {
        self.check_ideal(ideal).is_ok()
    }

    pub fn is_subalgebra(&self, u: &Subspace) -> bool {
        u.contains_subspace(&self.product_space(u, u))
    }

    /// `L / I` on the complement spanned by the non-pivot unit vectors of `I`.
    pub fn quotient(&self, ideal: &Subspace) -> Result<Quotient> {
        self.check_ideal(ideal)?;
        let map = Subquotient::quotient(ideal);
        let reps = ideal.non_pivots();
        let labels = reps.iter().map(|&c| self.labels[c].clone()).collect();
        let algebra = LieAlgebra::from_bracket_fn(self.p, labels, |a, b| {
            map.project(&self.bracket_basis(reps[a], reps[b]))
        });
        Ok(Quotient { algebra, map })
    }

    /// Structure constants of a bracket-closed subspace with respect to its
    /// echelon basis.
    pub fn restrict(&self, u: &Subspace) -> Result<LieAlgebra> {
        self.check_space(u);
        let basis = u.basis();
        for j in 0..basis.len() {
            for i in 0..j {
                if !u.contains(&self.bracket(&basis[i], &basis[j])) {
                    return Err(Error::NotClosed { left: i, right: j });
                }
            }
        }
        let labels = basis.iter().map(|b| self.describe(b)).collect();
        Ok(LieAlgebra::from_bracket_fn(self.p, labels, |i, j| {
            u.coordinates_unchecked(&self.bracket(&basis[i], &basis[j]))
        }))
    }

    /// The algebra in the basis `f_j = M e_j` (columns of an invertible `M`).
    pub fn change_basis(&self, m: &Matrix) -> Result<LieAlgebra> {
        let inv = m
            .inverse()
            .ok_or_else(|| Error::InvalidArgument("change of basis is singular".into()))?;
        let cols: Vec<Vector> = (0..self.dim).map(|j| m.column(j)).collect();
        let labels = (0..self.dim).map(|j| format!("f{j}")).collect();
        Ok(LieAlgebra::from_bracket_fn(self.p, labels, |i, j| {
            inv.mul_vec(&self.bracket(&cols[i], &cols[j]))
        }))
    }

    /// Human-readable expansion of `v` in terms of the basis labels.
    pub fn describe(&self, v: &Vector) -> String {
        if v.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (i, c)) in v.support().enumerate() {
            if k > 0 {
                s.push('+');
            }
            if c != 1 {
                s.push_str(&format!("{c}*"));
            }
            s.push_str(&self.labels[i]);
        }
        s
    }

    fn check_space(&self, u: &Subspace) {
        assert_eq!(u.ambient_dim(), self.dim, "subspace of a different algebra");
        assert_eq!(u.prime(), self.p, "modulus mismatch");
    }
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LieAlgebra(dim {} over GF({}), {} nonzero constants)",
            self.dim,
            self.p,
            self.nonzero_constants()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// sl_2 over GF(p) in the basis e, h, f: [e,h] = -2e, [e,f] = h, [h,f] = -2f.
    pub(crate) fn sl2(p: Prime) -> LieAlgebra {
        let labels = vec!["e".to_string(), "h".into(), "f".into()];
        let m2 = p.reduce(-2);
        let mut entries = vec![(0, 2, 1, 1)];
        if m2 != 0 {
            entries.push((0, 1, 0, m2));
            entries.push((1, 2, 2, m2));
        }
        LieAlgebra::from_entries(p, labels, entries).unwrap()
    }

    #[test]
    fn abelian_algebra_is_valid_and_central() {
        let a = LieAlgebra::abelian(Prime::TWO, 4);
        assert!(a.validate().is_valid());
        assert!(a.center().is_full());
        let lc = a.series(SeriesKind::LowerCentral, &a.full_space());
        assert_eq!(lc.len(), 2);
        assert!(lc[1].is_zero());
    }

    #[test]
    fn sl2_mod_five() {
        let p = Prime::new(5).unwrap();
        let l = sl2(p);
        assert!(l.validate().is_valid());
        assert!(l.derived_subalgebra(&l.full_space()).is_full());
        assert!(l.center().is_zero());
        let one = l.ideal_closure([l.unit(0)]);
        assert!(one.is_full());
    }

    #[test]
    fn corrupted_constant_breaks_jacobi() {
        let p = Prime::new(5).unwrap();
        let l = sl2(p);
        let mut entries = l.structure_constants();
        // [e, h] = e instead of -2e.
        for e in &mut entries {
            if (e.0, e.1) == (0, 1) {
                e.3 = 1;
            }
        }
        let bad = LieAlgebra::from_entries(p, l.labels().to_vec(), entries).unwrap();
        let report = bad.validate();
        assert!(!report.is_valid());
        assert_eq!(report.violations[0].triple, (0, 1, 2));
    }

    #[test]
    fn from_entries_rejects_duplicates_and_bad_indices() {
        let p = Prime::TWO;
        let labels = || vec!["a".to_string(), "b".into()];
        assert!(LieAlgebra::from_entries(p, labels(), [(0, 1, 0, 1), (0, 1, 0, 1)]).is_err());
        assert!(LieAlgebra::from_entries(p, labels(), [(1, 0, 0, 1)]).is_err());
        assert!(LieAlgebra::from_entries(p, labels(), [(0, 1, 2, 1)]).is_err());
        assert!(LieAlgebra::from_entries(p, labels(), [(0, 1, 0, 2)]).is_err());
        assert!(LieAlgebra::from_entries(p, vec!["a".into(), "a".into()], []).is_err());
    }

    #[test]
    fn quotient_and_restrict_of_trivial_spaces() {
        let p = Prime::new(3).unwrap();
        let l = sl2(p);
        let q = l.quotient(&l.zero_space()).unwrap();
        assert_eq!(q.algebra.structure_constants(), l.structure_constants());
        let z = l.quotient(&l.full_space()).unwrap();
        assert_eq!(z.algebra.dim(), 0);
        assert_eq!(l.restrict(&l.zero_space()).unwrap().dim(), 0);
    }

    #[test]
    fn non_ideal_is_rejected_with_witness() {
        let p = Prime::new(5).unwrap();
        let l = sl2(p);
        let h = Subspace::span(p, 3, [l.unit(1)]);
        match l.quotient(&h) {
            Err(Error::NotAnIdeal { witness }) => assert!(!h.contains(&witness)),
            other => panic!("expected NotAnIdeal, got {other:?}"),
        }
        let ef = Subspace::span(p, 3, [l.unit(0), l.unit(2)]);
        assert!(matches!(l.restrict(&ef), Err(Error::NotClosed { .. })));
    }

    #[test]
    fn change_basis_preserves_validity() {
        let p = Prime::new(3).unwrap();
        let l = sl2(p);
        let m = Matrix::from_residues(p, 3, &[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]);
        let l2 = l.change_basis(&m).unwrap();
        assert!(l2.validate().is_valid());
        assert!(l2.derived_subalgebra(&l2.full_space()).is_full());
    }
}
