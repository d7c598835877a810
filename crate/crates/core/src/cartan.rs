//! The Cartan-type families `W`, `S`, `H`, `K` as subalgebras of the Witt
//! algebra `W(n, m)`, plus the named bases used to cross-check them.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::divided_power::{binomial_mod, DivPowElement, MultiIndex, Shape};
use crate::error::{Error, Result};
use crate::field::Prime;
use crate::lie::LieAlgebra;
use crate::linalg::{EchelonBuilder, Subspace, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyKind {
    W,
    S,
    H,
    K,
}

impl FamilyKind {
    pub fn letter(self) -> char {
        match self {
            FamilyKind::W => 'W',
            FamilyKind::S => 'S',
            FamilyKind::H => 'H',
            FamilyKind::K => 'K',
        }
    }
}

/// A family member `X(n, m)` over GF(p); `n` is the length of `m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CartanFamily {
    kind: FamilyKind,
    m: Vec<u32>,
    p: Prime,
}

impl CartanFamily {
    pub fn new(kind: FamilyKind, m: &[u32], p: Prime) -> Result<Self> {
        let n = m.len();
        if n == 0 || m.contains(&0) {
            return Err(Error::InvalidFamily(format!(
                "m must be a nonempty vector of positive integers, got {m:?}"
            )));
        }
        match kind {
            FamilyKind::W => {}
            FamilyKind::S if n < 2 => {
                return Err(Error::InvalidFamily(format!(
                    "S requires n >= 2, got n = {n}"
                )))
            }
            FamilyKind::H if n < 2 || n % 2 == 1 => {
                return Err(Error::InvalidFamily(format!(
                    "H requires even n >= 2, got n = {n}"
                )))
            }
            FamilyKind::K if n < 3 || n.is_multiple_of(2) => {
                return Err(Error::InvalidFamily(format!(
                    "K requires odd n >= 3, got n = {n}"
                )))
            }
            _ => {}
        }
        Ok(CartanFamily {
            kind,
            m: m.to_vec(),
            p,
        })
    }

    pub fn w(m: &[u32]) -> Result<Self> {
        CartanFamily::new(FamilyKind::W, m, Prime::TWO)
    }

    pub fn s(m: &[u32]) -> Result<Self> {
        CartanFamily::new(FamilyKind::S, m, Prime::TWO)
    }

    pub fn h(m: &[u32]) -> Result<Self> {
        CartanFamily::new(FamilyKind::H, m, Prime::TWO)
    }

    pub fn k(m: &[u32]) -> Result<Self> {
        CartanFamily::new(FamilyKind::K, m, Prime::TWO)
    }

    /// Parses `W(2,(1,1))`; the modulus is supplied separately.
    pub fn parse(s: &str, p: Prime) -> Result<Self> {
        let bad = || {
            Error::InvalidFamily(format!(
                "cannot parse {s:?}; expected e.g. W(2,(1,1)) or H(4,(1,1,1,1))"
            ))
        };
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut chars = t.chars();
        let kind = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('W') => FamilyKind::W,
            Some('S') => FamilyKind::S,
            Some('H') => FamilyKind::H,
            Some('K') => FamilyKind::K,
            _ => return Err(bad()),
        };
        let body = chars
            .as_str()
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (n, rest) = body.split_once(',').ok_or_else(bad)?;
        let n: usize = n.parse().map_err(|_| bad())?;
        let list = rest
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(bad)?;
        let m = list
            .split(',')
            .map(|x| x.parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| bad())?;
        if m.len() != n {
            return Err(Error::InvalidFamily(format!(
                "{s:?}: n = {n} but m has {} entries",
                m.len()
            )));
        }
        CartanFamily::new(kind, &m, p)
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.m.len()
    }

    pub fn m(&self) -> &[u32] {
        &self.m
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn shape(&self) -> Result<Shape> {
        Shape::new(self.p, &self.m)
    }
}

impl fmt::Display for CartanFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},(", self.kind.letter(), self.n())?;
        for (k, x) in self.m.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "))")
    }
}

impl FromStr for CartanFamily {
    type Err = Error;

    /// Parses over GF(2).
    fn from_str(s: &str) -> Result<Self> {
        CartanFamily::parse(s, Prime::TWO)
    }
}

/// Pairing `j <-> j'` with signs on the first `2r` coordinates (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymplecticIndexing {
    n: usize,
    r: usize,
}

impl SymplecticIndexing {
    /// For `n = 2r` or `n = 2r + 1`; the last coordinate is unpaired when
    /// `n` is odd.
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "symplectic indexing needs n >= 2");
        SymplecticIndexing { n, r: n / 2 }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// `+1` on the first half, `-1` on the second.
    pub fn sigma(&self, j: usize) -> i8 {
        assert!(j < 2 * self.r, "index {j} is not paired");
        if j < self.r {
            1
        } else {
            -1
        }
    }

    pub fn sigma_mod(&self, j: usize, p: Prime) -> u8 {
        p.reduce(self.sigma(j) as i64)
    }

    pub fn partner(&self, j: usize) -> usize {
        assert!(j < 2 * self.r, "index {j} is not paired");
        if j < self.r {
            j + self.r
        } else {
            j - self.r
        }
    }
}

/// `Σ_j f_j D_j` in `W(n, m)`.
#[derive(Clone, PartialEq, Eq)]
pub struct DerivationElement {
    shape: Arc<Shape>,
    components: Vec<DivPowElement>,
}

impl DerivationElement {
    pub fn zero(shape: &Arc<Shape>) -> Self {
        DerivationElement {
            shape: shape.clone(),
            components: vec![DivPowElement::zero(shape); shape.n()],
        }
    }

    /// `f D_j` (0-based `j`).
    pub fn single(f: DivPowElement, j: usize) -> Self {
        let shape = f.shape().clone();
        assert!(j < shape.n(), "derivation index {j} out of range");
        let mut out = DerivationElement::zero(&shape);
        out.components[j] = f;
        out
    }

    /// `X^(a) D_j`.
    pub fn monomial(shape: &Arc<Shape>, a: MultiIndex, j: usize) -> Self {
        DerivationElement::single(DivPowElement::monomial(shape, a), j)
    }

    pub fn from_components(components: Vec<DivPowElement>) -> Self {
        let shape = components
            .first()
            .expect("at least one component")
            .shape()
            .clone();
        assert_eq!(
            components.len(),
            shape.n(),
            "need one component per variable"
        );
        assert!(
            components.iter().all(|c| **c.shape() == *shape),
            "shape mismatch"
        );
        DerivationElement { shape, components }
    }

    pub fn shape(&self) -> &Arc<Shape> {
        &self.shape
    }

    pub fn component(&self, j: usize) -> &DivPowElement {
        &self.components[j]
    }

    pub fn components(&self) -> &[DivPowElement] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(DivPowElement::is_zero)
    }

    pub fn add(&self, other: &DerivationElement) -> DerivationElement {
        DerivationElement {
            shape: self.shape.clone(),
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &DerivationElement) -> DerivationElement {
        self.add(&other.scale(self.shape.prime().neg(1)))
    }

    pub fn scale(&self, c: u8) -> DerivationElement {
        DerivationElement {
            shape: self.shape.clone(),
            components: self.components.iter().map(|f| f.scale(c)).collect(),
        }
    }

    /// Coordinates in the Witt basis, index `j * dim A + code(a)` for `X^(a) D_j`.
    pub fn to_vector(&self) -> Vector {
        let q = self.shape.dim();
        let mut v = Vector::zeros(self.shape.prime(), self.shape.n() * q);
        for (j, f) in self.components.iter().enumerate() {
            for (a, c) in f.terms() {
                v.set(j * q + self.shape.encode(a), c);
            }
        }
        v
    }

    pub fn from_vector(shape: &Arc<Shape>, v: &Vector) -> DerivationElement {
        let q = shape.dim();
        assert_eq!(v.len(), shape.n() * q, "length mismatch");
        let mut out = DerivationElement::zero(shape);
        for (k, c) in v.support() {
            out.components[k / q].add_term(shape.decode(k % q), c);
        }
        out
    }
}

impl fmt::Display for DerivationElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, g) in self.components.iter().enumerate() {
            for (a, c) in g.terms() {
                if !first {
                    write!(f, "+")?;
                }
                first = false;
                if c != 1 {
                    write!(f, "{c}*")?;
                }
                write!(f, "X^{a}D{}", j + 1)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for DerivationElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `[f D_i, g D_j] = f D_i(g) D_j - g D_j(f) D_i`, extended bilinearly.
pub fn bracket_derivations(u: &DerivationElement, v: &DerivationElement) -> DerivationElement {
    assert!(*u.shape == *v.shape, "shape mismatch");
    let shape = &u.shape;
    let mut out = DerivationElement::zero(shape);
    for (i, f) in u.components.iter().enumerate() {
        if f.is_zero() {
            continue;
        }
        for (j, g) in v.components.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            out.components[j] = out.components[j].add(&f.multiply(&g.derive(i)));
            out.components[i] = out.components[i].sub(&g.multiply(&f.derive(j)));
        }
    }
    out
}

/// Coefficient of `a_{i+j-1}` in `[a_i, a_j]` for `a_i = X^(i) D_1`:
/// `binom(i+j-1, i) - binom(i+j-1, j)` mod p.
pub fn witt1_structure_constant(i: u64, j: u64, p: Prime) -> u8 {
    if i + j == 0 {
        return 0;
    }
    let c = i + j - 1;
    p.sub(binomial_mod(c, i, p), binomial_mod(c, j, p))
}

/// `Σ_j D_j(f_j)`.
pub fn divergence(u: &DerivationElement) -> DivPowElement {
    u.components
        .iter()
        .enumerate()
        .fold(DivPowElement::zero(&u.shape), |acc, (j, f)| {
            acc.add(&f.derive(j))
        })
}

/// `D_j(f) D_i - D_i(f) D_j` for `i < j` (0-based).
pub fn d_ij(f: &DivPowElement, i: usize, j: usize) -> DerivationElement {
    let n = f.shape().n();
    assert!(i < j && j < n, "need 0 <= i < j < n, got ({i}, {j})");
    let mut components = vec![DivPowElement::zero(f.shape()); n];
    components[i] = f.derive(j);
    components[j] = f.derive(i).scale(f.shape().prime().neg(1));
    DerivationElement::from_components(components)
}

/// Hamiltonian map `f -> Σ_j σ(j) D_j(f) D_{j'}` (even `n`).
pub fn d_h(f: &DivPowElement) -> DerivationElement {
    let shape = f.shape();
    let n = shape.n();
    assert!(
        n >= 2 && n.is_multiple_of(2),
        "Hamiltonian map needs even n >= 2"
    );
    let p = shape.prime();
    let sym = SymplecticIndexing::new(n);
    let mut components = vec![DivPowElement::zero(shape); n];
    for j in 0..n {
        components[sym.partner(j)] = f.derive(j).scale(sym.sigma_mod(j, p));
    }
    DerivationElement::from_components(components)
}

/// Contact map (odd `n = 2r + 1`): for `j < 2r`,
/// `f_j = X_j D_n(f) + σ(j') D_{j'}(f)`, and
/// `f_n = 2f - Σ_j σ(j) X_j f_{j'}`.
pub fn d_k(f: &DivPowElement) -> DerivationElement {
    let shape = f.shape();
    let n = shape.n();
    assert!(n >= 3 && n % 2 == 1, "contact map needs odd n >= 3");
    let p = shape.prime();
    let sym = SymplecticIndexing::new(n);
    let last = n - 1;
    let dn = f.derive(last);
    let coordinate = |j: usize| DivPowElement::monomial(shape, MultiIndex::unit(n, j));
    let mut components = vec![DivPowElement::zero(shape); n];
    for (j, slot) in components.iter_mut().enumerate().take(last) {
        let jp = sym.partner(j);
        *slot = coordinate(j)
            .multiply(&dn)
            .add(&f.derive(jp).scale(sym.sigma_mod(jp, p)));
    }
    let mut top = f.scale(2 % p.get());
    for j in 0..last {
        let t = coordinate(j).multiply(&components[sym.partner(j)]);
        top = top.sub(&t.scale(sym.sigma_mod(j, p)));
    }
    components[last] = top;
    DerivationElement::from_components(components)
}

/// Label of the Witt basis vector `X^(a) D_j`.
pub fn witt_label(a: &MultiIndex, j: usize) -> String {
    format!("X^{a}D{}", j + 1)
}

/// `W(n, m)` on the basis `X^(a) D_j`, index `j * dim A + code(a)`.
pub fn witt_algebra(shape: &Shape) -> LieAlgebra {
    let q = shape.dim();
    let n = shape.n();
    let p = shape.prime();
    let mons: Vec<MultiIndex> = shape.monomials().collect();
    let mut labels = Vec::with_capacity(n * q);
    for j in 0..n {
        for a in &mons {
            labels.push(witt_label(a, j));
        }
    }
    LieAlgebra::from_bracket_fn(p, labels, |x, y| {
        let (i, a) = (x / q, &mons[x % q]);
        let (j, b) = (y / q, &mons[y % q]);
        let mut v = Vector::zeros(p, n * q);
        // X^a D_i (X^b) D_j
        if let Some(bl) = b.lower(i) {
            let c = a.add(&bl);
            if shape.contains(&c) {
                let k = crate::divided_power::multi_binomial(&c, a, p);
                if k != 0 {
                    v.add_at(j * q + shape.encode(&c), k);
                }
            }
        }
        // - X^b D_j (X^a) D_i
        if let Some(al) = a.lower(j) {
            let c = b.add(&al);
            if shape.contains(&c) {
                let k = crate::divided_power::multi_binomial(&c, b, p);
                if k != 0 {
                    v.add_at(i * q + shape.encode(&c), p.neg(k));
                }
            }
        }
        v
    })
}

/// A sparse spanning set of `ker(div)` in Witt coordinates: the `X^(a) D_j`
/// with `a_j = 0`, and differences of the `X^(b + ε_j) D_j` sharing `b`.
fn divergence_kernel_spanning_set(shape: &Shape) -> Vec<Vector> {
    let q = shape.dim();
    let n = shape.n();
    let p = shape.prime();
    let mut out = Vec::new();
    for (code, a) in shape.monomials().enumerate() {
        for j in 0..n {
            if a[j] == 0 {
                out.push(Vector::unit(p, n * q, j * q + code));
            }
        }
    }
    for b in shape.monomials() {
        let group: Vec<usize> = (0..n)
            .map(|j| (j, b.raise(j)))
            .filter(|(_, c)| shape.contains(c))
            .map(|(j, c)| j * q + shape.encode(&c))
            .collect();
        for w in group.windows(2) {
            let mut v = Vector::zeros(p, n * q);
            v.set(w[0], 1);
            v.set(w[1], p.neg(1));
            out.push(v);
        }
    }
    out
}

/// Span of `{[u, v]}` over pairs from a spanning set.
fn product_of_spanning_set(w: &LieAlgebra, gens: &[Vector]) -> Subspace {
    let mut b = EchelonBuilder::new(w.prime(), w.dim());
    for (k, u) in gens.iter().enumerate() {
        for v in &gens[k + 1..] {
            b.insert(w.bracket(u, v));
            if b.is_full() {
                return b.into_subspace();
            }
        }
    }
    b.into_subspace()
}

/// A constructed algebra: a subalgebra of `W(n, m)` together with its
/// structure constants on the echelon basis of that subalgebra.
#[derive(Clone, Debug)]
pub struct CartanAlgebra {
    family: CartanFamily,
    name: String,
    shape: Arc<Shape>,
    ambient: Arc<LieAlgebra>,
    generating: Subspace,
    subspace: Subspace,
    algebra: LieAlgebra,
}

/// Builds `W`, `S`, `H` or `K`: the full Witt algebra, or the derived
/// subalgebra of `ker(div)`, `im(d_h)`, `im(d_k)` respectively.
pub fn build(family: &CartanFamily) -> Result<CartanAlgebra> {
    let shape = Arc::new(family.shape()?);
    let ambient = Arc::new(witt_algebra(&shape));
    let p = family.prime();
    let dim = ambient.dim();
    let spanning: Vec<Vector> = match family.kind() {
        FamilyKind::W => {
            let full = Subspace::full(p, dim);
            return Ok(CartanAlgebra {
                family: family.clone(),
                name: family.to_string(),
                shape,
                algebra: (*ambient).clone(),
                ambient,
                generating: full.clone(),
                subspace: full,
            });
        }
        FamilyKind::S => divergence_kernel_spanning_set(&shape),
        FamilyKind::H => shape
            .monomials()
            .map(|a| d_h(&DivPowElement::monomial(&shape, a)).to_vector())
            .collect(),
        FamilyKind::K => shape
            .monomials()
            .map(|a| d_k(&DivPowElement::monomial(&shape, a)).to_vector())
            .collect(),
    };
    let generating = Subspace::span(p, dim, spanning.iter().cloned());
    let subspace = product_of_spanning_set(&ambient, &spanning);
    let algebra = ambient.restrict(&subspace)?;
    Ok(CartanAlgebra {
        family: family.clone(),
        name: family.to_string(),
        shape,
        ambient,
        generating,
        subspace,
        algebra,
    })
}

impl CartanAlgebra {
    pub fn family(&self) -> &CartanFamily {
        &self.family
    }

    /// `W(2,(1,1))`, with a prime per derived step taken.
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn shape(&self) -> &Arc<Shape> {
        &self.shape
    }

    /// The Witt algebra everything lives in.
    pub fn ambient(&self) -> &LieAlgebra {
        &self.ambient
    }

    /// The space whose derived subalgebra was taken (`ker div`, `im d_h`,
    /// `im d_k`; all of `W` for the Witt family).
    pub fn generating_space(&self) -> &Subspace {
        &self.generating
    }

    /// The algebra as a subspace of the Witt algebra.
    pub fn subspace(&self) -> &Subspace {
        &self.subspace
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn into_algebra(self) -> LieAlgebra {
        self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Derived subalgebra, again realised inside the Witt algebra.
    pub fn derived(&self) -> Result<CartanAlgebra> {
        let subspace = self.ambient.product_space(&self.subspace, &self.subspace);
        let algebra = self.ambient.restrict(&subspace)?;
        Ok(CartanAlgebra {
            family: self.family.clone(),
            name: format!("{}'", self.name),
            shape: self.shape.clone(),
            ambient: self.ambient.clone(),
            generating: self.subspace.clone(),
            subspace,
            algebra,
        })
    }

    /// Coordinates in the algebra's basis of a Witt vector lying in it.
    pub fn from_ambient(&self, v: &Vector) -> Option<Vector> {
        self.subspace.coordinates(v)
    }

    pub fn to_ambient(&self, coords: &Vector) -> Vector {
        self.subspace.from_coordinates(coords)
    }

    pub fn from_derivation(&self, u: &DerivationElement) -> Option<Vector> {
        self.from_ambient(&u.to_vector())
    }

    pub fn to_derivation(&self, coords: &Vector) -> DerivationElement {
        DerivationElement::from_vector(&self.shape, &self.to_ambient(coords))
    }
}

/// `a_i = X^(i) D_1` in `W(1, (l))`.
pub fn witt1_element(shape: &Arc<Shape>, i: u32) -> DerivationElement {
    assert_eq!(shape.n(), 1, "one variable expected");
    DerivationElement::monomial(shape, MultiIndex::new(vec![i]), 0)
}

/// Named basis elements of `S(2, m)`:
/// `x_j = X^(0,j) D_1`, `y_i = X^(i,0) D_2`,
/// `z_ij = X^(i+1,j) D_1 - X^(i,j+1) D_2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpecialBasis {
    X(u32),
    Y(u32),
    Z(u32, u32),
}

impl fmt::Display for SpecialBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecialBasis::X(j) => write!(f, "x_{j}"),
            SpecialBasis::Y(i) => write!(f, "y_{i}"),
            SpecialBasis::Z(i, j) => write!(f, "z_{i},{j}"),
        }
    }
}

impl SpecialBasis {
    /// The element in `W(2, m)`; exponents beyond `tau` vanish.
    pub fn element(&self, shape: &Arc<Shape>) -> DerivationElement {
        assert_eq!(shape.n(), 2, "two variables expected");
        let mono = |a: u32, b: u32, j: usize| {
            let idx = MultiIndex::new(vec![a, b]);
            if shape.contains(&idx) {
                DerivationElement::monomial(shape, idx, j)
            } else {
                DerivationElement::zero(shape)
            }
        };
        match *self {
            SpecialBasis::X(j) => mono(0, j, 0),
            SpecialBasis::Y(i) => mono(i, 0, 1),
            SpecialBasis::Z(i, j) => mono(i + 1, j, 0).sub(&mono(i, j + 1, 1)),
        }
    }

    /// Whether the index lies in the range of the named basis,
    /// `i <= 2^m1 - 2`, `j <= 2^m2 - 2`.
    pub fn in_range(&self, shape: &Shape) -> bool {
        let t = shape.tau();
        let (ti, tj) = (t[0], t[1]);
        match *self {
            SpecialBasis::X(j) => j < tj,
            SpecialBasis::Y(i) => i < ti,
            SpecialBasis::Z(i, j) => i < ti && j < tj,
        }
    }

    /// The full named basis in the order `x_*, y_*, z_**`.
    pub fn all(shape: &Shape) -> Vec<SpecialBasis> {
        let t = shape.tau();
        let (ti, tj) = (t[0], t[1]);
        let mut out: Vec<SpecialBasis> = (0..tj).map(SpecialBasis::X).collect();
        out.extend((0..ti).map(SpecialBasis::Y));
        for i in 0..ti {
            for j in 0..tj {
                out.push(SpecialBasis::Z(i, j));
            }
        }
        out
    }
}

/// A formal combination of named basis elements.
pub type Expansion = Vec<(SpecialBasis, u8)>;

/// `binom(i+k+1, i+1) (binom(j+l, j) + binom(j+l, j-1))
///  - binom(i+k+1, i) (binom(j+l, j+1) + binom(j+l, j))`, mod p.
pub fn special2_gamma(i: u32, j: u32, k: u32, l: u32, p: Prime) -> u8 {
    let b = |c: u32, a: i64| {
        if a < 0 {
            0
        } else {
            binomial_mod(c as u64, a as u64, p)
        }
    };
    let (i, j, k, l) = (i as i64, j as i64, k as i64, l as i64);
    let ik = (i + k + 1) as u32;
    let jl = (j + l) as u32;
    let left = p.mul(b(ik, i + 1), p.add(b(jl, j), b(jl, j - 1)));
    let right = p.mul(b(ik, i), p.add(b(jl, j + 1), b(jl, j)));
    p.sub(left, right)
}

/// The bracket of two named basis elements of `S(2, m)` as predicted by
/// the explicit relation list (with `x_{-1} = y_{-1} = 0`). Pairs are
/// accepted in either order; the result is antisymmetrised. `None` when
/// the list has no rule for the pair.
pub fn special2_expected_bracket(
    u: SpecialBasis,
    v: SpecialBasis,
    m: (u32, u32),
    p: Prime,
) -> Result<Option<Expansion>> {
    let shape = Shape::new(p, &[m.0, m.1])?;
    for e in [u, v] {
        if !e.in_range(&shape) {
            return Err(Error::InvalidArgument(format!(
                "{e} is outside the named basis of S(2,({},{}))",
                m.0, m.1
            )));
        }
    }
    if let Some(e) = special2_rule(u, v, p) {
        return Ok(Some(e));
    }
    Ok(special2_rule(v, u, p).map(|e| e.into_iter().map(|(b, c)| (b, p.neg(c))).collect()))
}

fn special2_rule(u: SpecialBasis, v: SpecialBasis, p: Prime) -> Option<Expansion> {
    use SpecialBasis::*;
    let single = |b: SpecialBasis, c: u8| if c == 0 { vec![] } else { vec![(b, c)] };
    let binom = |c: u32, a: u32| binomial_mod(c as u64, a as u64, p);
    Some(match (u, v) {
        (X(_), X(_)) | (Y(_), Y(_)) => vec![],
        (Z(i, j), Z(k, l)) => single(Z(i + k, j + l), special2_gamma(i, j, k, l, p)),
        (X(0), Y(i)) => match i {
            0 => vec![],
            _ => single(Y(i - 1), 1),
        },
        (Y(0), X(j)) => match j {
            0 => vec![],
            _ => single(X(j - 1), 1),
        },
        (X(i), Y(j)) if i > 0 && j > 0 => single(Z(j - 1, i - 1), 1),
        (X(i), Z(0, k)) => single(X(i + k), binom(i + k + 1, i)),
        (X(i), Z(j, k)) if j > 0 => single(Z(j - 1, i + k), binom(i + k + 1, i)),
        (Y(i), Z(j, 0)) => single(Y(i + j), binom(i + j + 1, i)),
        (Y(i), Z(j, k)) if k > 0 => single(Z(i + j, k - 1), binom(i + j + 1, i)),
        _ => return None,
    })
}

/// Evaluates a formal expansion in `W(2, m)`.
pub fn special2_evaluate(e: &Expansion, shape: &Arc<Shape>) -> DerivationElement {
    e.iter()
        .fold(DerivationElement::zero(shape), |acc, (b, c)| {
            acc.add(&b.element(shape).scale(*c))
        })
}

/// `h_a = d_h(X^(a))`.
pub fn hamiltonian_element(shape: &Arc<Shape>, a: MultiIndex) -> DerivationElement {
    d_h(&DivPowElement::monomial(shape, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(p: u8, m: &[u32]) -> Arc<Shape> {
        Arc::new(Shape::new(Prime::new(p).unwrap(), m).unwrap())
    }

    fn mono(s: &Arc<Shape>, a: &[u32]) -> DivPowElement {
        DivPowElement::monomial(s, MultiIndex::new(a.to_vec()))
    }

    fn dmono(s: &Arc<Shape>, a: &[u32], j: usize) -> DerivationElement {
        DerivationElement::monomial(s, MultiIndex::new(a.to_vec()), j)
    }

    #[test]
    fn family_constraints_and_parsing() {
        assert!(CartanFamily::s(&[3]).is_err());
        assert!(CartanFamily::h(&[1, 1, 1]).is_err());
        assert!(CartanFamily::k(&[1, 1]).is_err());
        assert!(CartanFamily::w(&[1, 0]).is_err());
        let f: CartanFamily = "H(4, (2,1,1,1))".parse().unwrap();
        assert_eq!(f, CartanFamily::h(&[2, 1, 1, 1]).unwrap());
        assert_eq!(f.to_string(), "H(4,(2,1,1,1))");
        assert!("H(3,(1,1))".parse::<CartanFamily>().is_err());
        assert!("Q(1,(1))".parse::<CartanFamily>().is_err());
    }

    #[test]
    fn symplectic_pairing() {
        let s = SymplecticIndexing::new(5);
        for j in 0..4 {
            assert_eq!(s.partner(s.partner(j)), j);
        }
        assert_eq!(s.sigma(1), 1);
        assert_eq!(s.sigma(3), -1);
        assert_eq!(s.partner(0), 2);
    }

    #[test]
    fn lowering_in_one_variable() {
        let s = shape(2, &[3]);
        for i in 1..8 {
            let b = bracket_derivations(&witt1_element(&s, 0), &witt1_element(&s, i));
            assert_eq!(b, witt1_element(&s, i - 1));
        }
    }

    #[test]
    fn small_witt_bracket() {
        let s = shape(2, &[2]);
        let b = bracket_derivations(&witt1_element(&s, 1), &witt1_element(&s, 2));
        assert_eq!(b, witt1_element(&s, 2));
    }

    #[test]
    fn one_variable_constants_match_the_binomial_formula() {
        for p in [2u8, 3, 5] {
            let pr = Prime::new(p).unwrap();
            let s = shape(p, &[2]);
            let top = s.tau()[0];
            for i in 0..=top {
                for j in 0..=top {
                    let b = bracket_derivations(&witt1_element(&s, i), &witt1_element(&s, j));
                    let k = i + j;
                    let expected = if k >= 1 && k - 1 <= top {
                        witt1_element(&s, k - 1)
                            .scale(witt1_structure_constant(i as u64, j as u64, pr))
                    } else {
                        DerivationElement::zero(&s)
                    };
                    assert_eq!(b, expected, "p={p} i={i} j={j}");
                }
            }
        }
        assert_eq!(witt1_structure_constant(0, 3, Prime::TWO), 1);
        assert_eq!(witt1_structure_constant(4, 4, Prime::TWO), 0);
        assert_eq!(witt1_structure_constant(1, 2, Prime::TWO), 1);
    }

    #[test]
    fn witt_table_matches_derivation_bracket() {
        for (p, m) in [(2u8, vec![1u32, 2]), (3, vec![1, 1]), (2, vec![1, 1, 1])] {
            let s = shape(p, &m);
            let w = witt_algebra(&s);
            assert_eq!(w.dim(), s.n() * s.dim());
            for x in 0..w.dim() {
                for y in 0..w.dim() {
                    let u = DerivationElement::from_vector(&s, &w.unit(x));
                    let v = DerivationElement::from_vector(&s, &w.unit(y));
                    assert_eq!(
                        w.bracket_basis(x, y),
                        bracket_derivations(&u, &v).to_vector()
                    );
                }
            }
        }
    }

    #[test]
    fn divergence_examples() {
        let s = shape(2, &[1, 1]);
        assert_eq!(divergence(&dmono(&s, &[1, 0], 0)), DivPowElement::one(&s));
        assert!(divergence(&dmono(&s, &[0, 1], 0)).is_zero());
    }

    #[test]
    fn d_ij_examples() {
        let s = shape(2, &[2, 2]);
        let z00 = dmono(&s, &[1, 0], 0).sub(&dmono(&s, &[0, 1], 1));
        assert_eq!(d_ij(&mono(&s, &[1, 1]), 0, 1), z00);
        assert!(d_ij(&DivPowElement::one(&s), 0, 1).is_zero());
        for a in s.monomials() {
            assert!(divergence(&d_ij(&DivPowElement::monomial(&s, a), 0, 1)).is_zero());
        }
    }

    #[test]
    fn hamiltonian_map() {
        let s = shape(2, &[1, 1, 1, 1]);
        assert!(d_h(&DivPowElement::one(&s)).is_zero());
        // d_h(X_1) = σ(1) D_{1'}
        assert_eq!(d_h(&mono(&s, &[1, 0, 0, 0])), dmono(&s, &[0, 0, 0, 0], 2));
        let rank = Subspace::span(
            Prime::TWO,
            4 * s.dim(),
            s.monomials()
                .map(|a| d_h(&DivPowElement::monomial(&s, a)).to_vector()),
        )
        .dim();
        assert_eq!(rank, s.dim() - 1);

        let s2 = shape(3, &[1, 1]);
        for a in s2.monomials() {
            let f = DivPowElement::monomial(&s2, a);
            let expected =
                DerivationElement::from_components(vec![f.derive(1).scale(2), f.derive(0)]);
            assert_eq!(d_h(&f), expected);
        }
    }

    #[test]
    fn contact_map_rank() {
        let s = shape(2, &[1, 1, 1]);
        assert!(d_k(&DivPowElement::zero(&s)).is_zero());
        let images: Vec<Vector> = s
            .monomials()
            .map(|a| d_k(&DivPowElement::monomial(&s, a)).to_vector())
            .collect();
        let rank = Subspace::span(Prime::TWO, 3 * s.dim(), images).dim();
        // In characteristic 2 the constant function is killed, and so is
        // X_3 - X_1 X_2.
        assert!(d_k(&DivPowElement::one(&s)).is_zero());
        let f = mono(&s, &[0, 0, 1]).sub(&mono(&s, &[1, 1, 0]));
        assert!(d_k(&f).is_zero());
        assert_eq!(rank, s.dim() - 2);

        let s3 = shape(3, &[1, 1, 1]);
        let rank3 = Subspace::span(
            s3.prime(),
            3 * s3.dim(),
            s3.monomials()
                .map(|a| d_k(&DivPowElement::monomial(&s3, a)).to_vector()),
        )
        .dim();
        assert_eq!(rank3, s3.dim());
    }
}
