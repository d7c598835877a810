//! Truncated divided-power algebras `A(n, m)` over GF(p).
//!
//! The basis is `X^(a)` for exponent vectors `0 <= a <= tau`, where
//! `tau_i = p^(m_i) - 1`, with product `X^(a) X^(b) = binom(a+b, a) X^(a+b)`
//! (multi-binomial reduced mod p) and zero whenever `a + b` exceeds `tau`.
//! The partial derivation in the `j`-th variable lowers the exponent:
//! `D_j X^(a) = X^(a - e_j)`.
//!
//! Monomials are numbered in mixed radix with radix `p^(m_i)` in position
//! `i` and the first coordinate most significant.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Prime;
use crate::linalg::Vector;

/// Largest supported `dim A(n, m)`.
pub const MAX_ALGEBRA_DIM: u64 = 1 << 12;

/// Exponent vector of a divided-power monomial.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(a: Vec<u32>) -> Self {
        MultiIndex(a)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The standard multi-index `e_i` (0-based position).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut a = vec![0; n];
        a[i] = 1;
        MultiIndex(a)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other` when componentwise nonnegative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// `self - e_j`, if the `j`-th exponent is positive.
    pub fn lower(&self, j: usize) -> Option<MultiIndex> {
        let mut a = self.0.clone();
        a[j] = a[j].checked_sub(1)?;
        Some(MultiIndex(a))
    }

    pub fn raise(&self, j: usize) -> MultiIndex {
        let mut a = self.0.clone();
        a[j] += 1;
        MultiIndex(a)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl std::ops::Index<usize> for MultiIndex {
    type Output = u32;
    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, a) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// `binom(c, a) mod p` by Lucas' theorem; zero when `a > c`.
pub fn binomial_mod(c: u64, a: u64, p: Prime) -> u8 {
    if a > c {
        return 0;
    }
    if p.is_two() {
        return (a & !c == 0) as u8;
    }
    let q = p.get() as u64;
    let (mut c, mut a) = (c, a);
    let mut acc = 1u8;
    while a > 0 || c > 0 {
        let (cd, ad) = (c % q, a % q);
        if ad > cd {
            return 0;
        }
        acc = p.mul(acc, small_binomial(cd, ad, p));
        c /= q;
        a /= q;
    }
    acc
}

fn small_binomial(c: u64, a: u64, p: Prime) -> u8 {
    // c < p <= 13, so the exact value fits easily.
    let mut num = 1u64;
    for k in 0..a {
        num = num * (c - k) / (k + 1);
    }
    p.from_u64(num)
}

/// `prod_i binom(c_i, a_i) mod p`, requiring `a <= c`.
pub fn multi_binomial(c: &MultiIndex, a: &MultiIndex, p: Prime) -> u8 {
    assert_eq!(c.len(), a.len(), "multi-index length mismatch");
    assert!(a.le(c), "multi_binomial requires a <= c");
    let mut acc = 1u8;
    for (&ci, &ai) in c.as_slice().iter().zip(a.as_slice()) {
        acc = p.mul(acc, binomial_mod(ci as u64, ai as u64, p));
        if acc == 0 {
            break;
        }
    }
    acc
}

/// Parameters `(n, m, p)` of `A(n, m)` together with the derived bound `tau`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Shape {
    p: Prime,
    m: Vec<u32>,
    tau: Vec<u32>,
    radix: Vec<usize>,
    dim: usize,
}

impl Shape {
    pub fn new(p: Prime, m: &[u32]) -> Result<Self> {
        if m.is_empty() {
            return Err(Error::InvalidShape("need at least one variable".into()));
        }
        if m.contains(&0) {
            return Err(Error::InvalidShape(format!(
                "all m_i must be positive, got {m:?}"
            )));
        }
        let total: u32 = m.iter().sum();
        let dim = (p.get() as u64).checked_pow(total).unwrap_or(u64::MAX);
        if dim > MAX_ALGEBRA_DIM {
            return Err(Error::InvalidShape(format!(
                "dim A(n,m) = {p}^{total} exceeds the supported {MAX_ALGEBRA_DIM}"
            )));
        }
        let radix: Vec<usize> = m.iter().map(|&mi| p.pow(mi) as usize).collect();
        let tau = radix.iter().map(|&r| r as u32 - 1).collect();
        Ok(Shape {
            p,
            m: m.to_vec(),
            tau,
            radix,
            dim: dim as usize,
        })
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.m.len()
    }

    pub fn m(&self) -> &[u32] {
        &self.m
    }

    pub fn tau(&self) -> MultiIndex {
        MultiIndex(self.tau.clone())
    }

    /// `dim A(n, m) = p^(m_1 + ... + m_n)`.
    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn contains(&self, a: &MultiIndex) -> bool {
        a.len() == self.n() && a.as_slice().iter().zip(&self.tau).all(|(x, t)| x <= t)
    }

    pub fn encode(&self, a: &MultiIndex) -> usize {
        debug_assert!(self.contains(a));
        a.as_slice()
            .iter()
            .zip(&self.radix)
            .fold(0usize, |acc, (&x, &r)| acc * r + x as usize)
    }

    pub fn decode(&self, mut code: usize) -> MultiIndex {
        let mut a = vec![0u32; self.n()];
        for i in (0..self.n()).rev() {
            a[i] = (code % self.radix[i]) as u32;
            code /= self.radix[i];
        }
        MultiIndex(a)
    }

    /// All basis exponents in encoding order.
    pub fn monomials(&self) -> impl Iterator<Item = MultiIndex> + '_ {
        (0..self.dim).map(move |k| self.decode(k))
    }
}

impl fmt::Debug for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A(n={}, m={:?}, p={})", self.n(), self.m, self.p)
    }
}

/// Element of `A(n, m)` as a sparse map from exponents to nonzero residues.
#[derive(Clone, PartialEq, Eq)]
pub struct DivPowElement {
    shape: Arc<Shape>,
    terms: BTreeMap<MultiIndex, u8>,
}

impl DivPowElement {
    pub fn zero(shape: &Arc<Shape>) -> Self {
        DivPowElement {
            shape: shape.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(shape: &Arc<Shape>) -> Self {
        Self::monomial(shape, MultiIndex::zero(shape.n()))
    }

    pub fn monomial(shape: &Arc<Shape>, a: MultiIndex) -> Self {
        Self::term(shape, a, 1)
    }

    pub fn term(shape: &Arc<Shape>, a: MultiIndex, c: u8) -> Self {
        assert!(shape.contains(&a), "exponent {a} outside tau");
        let mut terms = BTreeMap::new();
        let c = c % shape.p.get();
        if c != 0 {
            terms.insert(a, c);
        }
        DivPowElement {
            shape: shape.clone(),
            terms,
        }
    }

    pub fn shape(&self) -> &Arc<Shape> {
        &self.shape
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, u8)> {
        self.terms.iter().map(|(a, &c)| (a, c))
    }

    pub fn coefficient(&self, a: &MultiIndex) -> u8 {
        self.terms.get(a).copied().unwrap_or(0)
    }

    /// Adds `c * X^(a)`; exponents beyond `tau` are dropped.
    pub fn add_term(&mut self, a: MultiIndex, c: u8) {
        if c == 0 || !self.shape.contains(&a) {
            return;
        }
        let p = self.shape.p;
        let entry = self.terms.entry(a);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = p.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_shape(&self, other: &DivPowElement) {
        assert!(
            Arc::ptr_eq(&self.shape, &other.shape) || self.shape == other.shape,
            "shape mismatch"
        );
    }

    pub fn add(&self, other: &DivPowElement) -> DivPowElement {
        self.check_shape(other);
        let mut out = self.clone();
        for (a, c) in other.terms() {
            out.add_term(a.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &DivPowElement) -> DivPowElement {
        self.add(&other.scale(self.shape.p.neg(1)))
    }

    pub fn scale(&self, c: u8) -> DivPowElement {
        let p = self.shape.p;
        let c = c % p.get();
        let mut out = DivPowElement::zero(&self.shape);
        if c != 0 {
            for (a, x) in self.terms() {
                out.terms.insert(a.clone(), p.mul(x, c));
            }
        }
        out
    }

    /// Product in `A(n, m)`: terms beyond `tau` vanish.
    pub fn multiply(&self, other: &DivPowElement) -> DivPowElement {
        self.check_shape(other);
        let p = self.shape.p;
        let mut out = DivPowElement::zero(&self.shape);
        for (a, x) in self.terms() {
            for (b, y) in other.terms() {
                let c = a.add(b);
                if !self.shape.contains(&c) {
                    continue;
                }
                let k = multi_binomial(&c, a, p);
                if k != 0 {
                    out.add_term(c, p.mul(k, p.mul(x, y)));
                }
            }
        }
        out
    }

    /// Partial derivation `D_j` (0-based `j`).
    pub fn derive(&self, j: usize) -> DivPowElement {
        assert!(j < self.shape.n(), "derivation index {j} out of range");
        let mut out = DivPowElement::zero(&self.shape);
        for (a, c) in self.terms() {
            if let Some(b) = a.lower(j) {
                out.terms.insert(b, c);
            }
        }
        out
    }

    /// Dense coefficient vector in monomial encoding order.
    pub fn to_vector(&self) -> Vector {
        let mut v = Vector::zeros(self.shape.p, self.shape.dim());
        for (a, c) in self.terms() {
            v.set(self.shape.encode(a), c);
        }
        v
    }

    pub fn from_vector(shape: &Arc<Shape>, v: &Vector) -> DivPowElement {
        assert_eq!(v.len(), shape.dim(), "length mismatch");
        let mut out = DivPowElement::zero(shape);
        for (k, c) in v.support() {
            out.terms.insert(shape.decode(k), c);
        }
        out
    }
}

impl fmt::Debug for DivPowElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for DivPowElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (a, c)) in self.terms().enumerate() {
            if k > 0 {
                write!(f, "+")?;
            }
            if c != 1 {
                write!(f, "{c}*")?;
            }
            write!(f, "X^{a}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pascal(limit: usize, p: u8) -> Vec<Vec<u8>> {
        let mut t = vec![vec![0u8; limit + 1]; limit + 1];
        for c in 0..=limit {
            t[c][0] = 1;
            for a in 1..=c {
                t[c][a] = (t[c - 1][a - 1] + t[c - 1][a]) % p;
            }
        }
        t
    }

    fn shape(p: u8, m: &[u32]) -> Arc<Shape> {
        Arc::new(Shape::new(Prime::new(p).unwrap(), m).unwrap())
    }

    fn mi(a: &[u32]) -> MultiIndex {
        MultiIndex::new(a.to_vec())
    }

    #[test]
    fn binomial_examples() {
        let two = Prime::TWO;
        assert_eq!(multi_binomial(&mi(&[2]), &mi(&[1]), two), 0);
        assert_eq!(multi_binomial(&mi(&[3]), &mi(&[1]), two), 1);
        for p in [2u8, 3, 5] {
            let p = Prime::new(p).unwrap();
            assert_eq!(multi_binomial(&mi(&[5, 7]), &mi(&[5, 7]), p), 1);
        }
    }

    #[test]
    fn lucas_matches_pascal_up_to_63() {
        for p in [2u8, 3, 5, 7] {
            let table = pascal(63, p);
            let prime = Prime::new(p).unwrap();
            for c in 0..=63u64 {
                for a in 0..=c {
                    assert_eq!(
                        binomial_mod(c, a, prime),
                        table[c as usize][a as usize],
                        "binom({c},{a}) mod {p}"
                    );
                }
            }
        }
    }

    #[test]
    fn lucas_bit_rule_in_characteristic_two() {
        let table = pascal(126, 2);
        for a in 0..=63u32 {
            for b in 0..=63u32 {
                let c = mi(&[a + b]);
                let nonzero = multi_binomial(&c, &mi(&[a]), Prime::TWO) != 0;
                assert_eq!(nonzero, a & b == 0);
                assert_eq!(nonzero, table[(a + b) as usize][a as usize] == 1);
            }
        }
    }

    #[test]
    #[should_panic(expected = "a <= c")]
    fn binomial_rejects_a_above_c() {
        multi_binomial(&mi(&[1]), &mi(&[2]), Prime::TWO);
    }

    #[test]
    fn truncated_products_in_a_1_2() {
        let s = shape(2, &[2]);
        let x1 = DivPowElement::monomial(&s, mi(&[1]));
        let x2 = DivPowElement::monomial(&s, mi(&[2]));
        assert!(x1.multiply(&x1).is_zero());
        assert_eq!(x1.multiply(&x2), DivPowElement::monomial(&s, mi(&[3])));
        // X^(3) X^(1) leaves the truncation.
        let x3 = DivPowElement::monomial(&s, mi(&[3]));
        assert!(x3.multiply(&x1).is_zero());
    }

    #[test]
    fn derivation_examples() {
        let s = shape(2, &[2, 1]);
        let f = DivPowElement::monomial(&s, mi(&[3, 1]));
        assert_eq!(f.derive(0), DivPowElement::monomial(&s, mi(&[2, 1])));
        let g = DivPowElement::monomial(&s, mi(&[0, 1]));
        assert!(g.derive(0).is_zero());
    }

    #[test]
    fn dimension_and_encoding() {
        for (p, m) in [(2u8, vec![1u32, 2, 1]), (3, vec![1, 1]), (5, vec![1])] {
            let s = shape(p, &m);
            let total: u32 = m.iter().sum();
            assert_eq!(s.dim(), (p as usize).pow(total));
            let all: Vec<_> = s.monomials().collect();
            assert_eq!(all.len(), s.dim());
            for (k, a) in all.iter().enumerate() {
                assert!(s.contains(a));
                assert_eq!(s.encode(a), k);
            }
            // Mixed-radix order is lexicographic with the first coordinate leading.
            assert!(all.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn derivations_commute() {
        let s = shape(3, &[1, 2]);
        for a in s.monomials() {
            let f = DivPowElement::monomial(&s, a);
            assert_eq!(f.derive(0).derive(1), f.derive(1).derive(0));
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(Shape::new(Prime::TWO, &[]).is_err());
        assert!(Shape::new(Prime::TWO, &[1, 0]).is_err());
        assert!(Shape::new(Prime::TWO, &[7, 7]).is_err());
    }

    fn element(s: &Arc<Shape>, coeffs: &[u8]) -> DivPowElement {
        let v = Vector::from_residues(s.prime(), &coeffs[..s.dim()]);
        DivPowElement::from_vector(s, &v)
    }

    fn shapes() -> impl Strategy<Value = Arc<Shape>> {
        prop_oneof![
            Just(shape(2, &[2, 1])),
            Just(shape(2, &[1, 1, 2])),
            Just(shape(2, &[3])),
            Just(shape(3, &[1, 1])),
            Just(shape(5, &[1])),
        ]
    }

    proptest! {
        #[test]
        fn product_is_commutative_and_associative(
            s in shapes(),
            a in proptest::collection::vec(0u8..5, 27),
            b in proptest::collection::vec(0u8..5, 27),
            c in proptest::collection::vec(0u8..5, 27),
        ) {
            let (f, g, h) = (element(&s, &a), element(&s, &b), element(&s, &c));
            prop_assert_eq!(f.multiply(&g), g.multiply(&f));
            prop_assert_eq!(f.multiply(&g).multiply(&h), f.multiply(&g.multiply(&h)));
            prop_assert_eq!(DivPowElement::one(&s).multiply(&f), f.clone());
        }

        #[test]
        fn derivations_satisfy_leibniz(
            s in shapes(),
            a in proptest::collection::vec(0u8..5, 27),
            b in proptest::collection::vec(0u8..5, 27),
        ) {
            let (f, g) = (element(&s, &a), element(&s, &b));
            for j in 0..s.n() {
                let lhs = f.multiply(&g).derive(j);
                let rhs = f.derive(j).multiply(&g).add(&f.multiply(&g.derive(j)));
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
