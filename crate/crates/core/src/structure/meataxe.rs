//! Modules over GF(p) given by generating matrices, and the MeatAxe chop:
//! find a proper submodule or certify irreducibility by Norton's criterion.

use std::collections::VecDeque;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::Prime;
use crate::linalg::{EchelonBuilder, Matrix, Subquotient, Subspace, Vector};
use crate::search::SearchConfig;

/// Largest number of kernel points Norton's test will spin per side.
const MAX_NORTON_POINTS: usize = 255;

/// A module for the associative algebra generated by `gens`, acting on
/// column vectors of length `dim`.
#[derive(Clone, Debug)]
pub struct Module {
    p: Prime,
    dim: usize,
    gens: Vec<Matrix>,
}

impl Module {
    pub fn new(p: Prime, dim: usize, gens: Vec<Matrix>) -> Self {
        for g in &gens {
            assert!(g.nrows() == dim && g.ncols() == dim, "generator shape");
        }
        Module { p, dim, gens }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gens(&self) -> &[Matrix] {
        &self.gens
    }

    /// The dual module under the transposed generators.
    pub fn dual(&self) -> Module {
        Module {
            p: self.p,
            dim: self.dim,
            gens: self.gens.iter().map(Matrix::transpose).collect(),
        }
    }

    /// Smallest submodule containing `seeds`.
    pub fn spin<I>(&self, seeds: I) -> Subspace
    where
        I: IntoIterator<Item = Vector>,
    {
        let mut b = EchelonBuilder::new(self.p, self.dim);
        let mut queue = VecDeque::new();
        for v in seeds {
            if let Some(r) = b.insert(v) {
                queue.push_back(r.clone());
            }
        }
        while let Some(w) = queue.pop_front() {
            if b.is_full() {
                break;
            }
            for g in &self.gens {
                if let Some(r) = b.insert(g.mul_vec(&w)) {
                    queue.push_back(r.clone());
                }
            }
        }
        b.into_subspace()
    }

    pub fn is_submodule(&self, u: &Subspace) -> bool {
        u.basis()
            .iter()
            .all(|b| self.gens.iter().all(|g| u.contains(&g.mul_vec(b))))
    }

    /// Action on `upper / lower`; both must be submodules.
    pub fn subquotient(&self, sq: &Subquotient) -> Module {
        Module {
            p: self.p,
            dim: sq.dim(),
            gens: self.gens.iter().map(|g| sq.induced(g)).collect(),
        }
    }

    pub fn submodule(&self, u: &Subspace) -> Module {
        self.subquotient(&Subquotient::new(&Subspace::zero(self.p, self.dim), u))
    }
}

/// Number of words of length at most three in two letters.
const WORDS: usize = 14;

/// A replayable element of the enveloping algebra:
/// `Σ_w c_w w(A, B) + shift · I` with `A = Σ a_i g_i`, `B = Σ b_i g_i`,
/// over the fourteen words `A, B, AA, AB, BA, BB, AAA, ..., BBB`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvelopingElement {
    pub a: Vec<u8>,
    pub b: Vec<u8>,
    pub words: Vec<u8>,
    pub shift: u8,
}

impl EnvelopingElement {
    pub fn random<R: Rng + ?Sized>(p: Prime, ngens: usize, rng: &mut R) -> Self {
        let q = p.get();
        let mut draw = |n: usize| (0..n).map(|_| rng.gen_range(0..q)).collect::<Vec<u8>>();
        EnvelopingElement {
            a: draw(ngens),
            b: draw(ngens),
            words: draw(WORDS),
            shift: 0,
        }
    }

    pub fn evaluate(&self, p: Prime, dim: usize, gens: &[Matrix]) -> Matrix {
        assert_eq!(gens.len(), self.a.len(), "generator count mismatch");
        let combine = |c: &[u8]| {
            let mut m = Matrix::zeros(p, dim, dim);
            for (g, &x) in gens.iter().zip(c) {
                if x != 0 {
                    m.add_scaled(g, x);
                }
            }
            m
        };
        let a = combine(&self.a);
        let b = combine(&self.b);
        let aa = a.mul(&a);
        let ab = a.mul(&b);
        let ba = b.mul(&a);
        let bb = b.mul(&b);
        let mut out = Matrix::zeros(p, dim, dim);
        let words = [&a, &b, &aa, &ab, &ba, &bb];
        for (w, &c) in words.iter().zip(&self.words) {
            if c != 0 {
                out.add_scaled(w, c);
            }
        }
        let cubes = [
            (&aa, &a),
            (&aa, &b),
            (&ab, &a),
            (&ab, &b),
            (&ba, &a),
            (&ba, &b),
            (&bb, &a),
            (&bb, &b),
        ];
        for ((l, r), &c) in cubes.iter().zip(&self.words[6..]) {
            if c != 0 {
                out.add_scaled(&l.mul(r), c);
            }
        }
        if self.shift != 0 {
            out.add_identity_scaled(self.shift);
        }
        out
    }

    pub fn with_shift(&self, shift: u8) -> Self {
        EnvelopingElement {
            shift,
            ..self.clone()
        }
    }
}

/// Evidence for irreducibility: an enveloping-algebra element `θ` with
/// nonzero kernel such that every kernel vector of `θ` spins to the whole
/// module and every kernel vector of `θ^T` spins to the whole dual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NortonCertificate {
    pub element: EnvelopingElement,
    pub nullity: usize,
    /// Trials used before success.
    pub trials: usize,
}

impl NortonCertificate {
    /// Re-runs the criterion from scratch.
    pub fn verify(&self, module: &Module) -> bool {
        if module.dim() == 0 || self.element.a.len() != module.gens().len() {
            return false;
        }
        let theta = self.element.evaluate(module.p, module.dim, module.gens());
        let k = theta.kernel();
        if k.dim() != self.nullity || k.is_zero() {
            return false;
        }
        let kt = theta.transpose().kernel();
        let dual = module.dual();
        match (
            projective_points(k.basis(), usize::MAX),
            projective_points(kt.basis(), usize::MAX),
        ) {
            (Some(pts), Some(dpts)) => {
                pts.into_iter().all(|v| module.spin([v]).is_full())
                    && dpts.into_iter().all(|w| dual.spin([w]).is_full())
            }
            _ => false,
        }
    }
}

#[derive(Clone, Debug)]
pub enum ChopOutcome {
    /// A proper nonzero submodule.
    Reducible(Subspace),
    Irreducible(NortonCertificate),
    Unknown {
        trials: usize,
    },
}

impl ChopOutcome {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, ChopOutcome::Irreducible(_))
    }
}

/// One representative per one-dimensional subspace of the span of `basis`
/// (first nonzero coefficient equal to 1); `None` if there are more than
/// `limit`.
pub fn projective_points(basis: &[Vector], limit: usize) -> Option<Vec<Vector>> {
    let k = basis.len();
    if k == 0 {
        return Some(Vec::new());
    }
    let p = basis[0].prime();
    let q = p.get() as u128;
    let count = (q.checked_pow(k as u32)? - 1) / (q - 1);
    if count > limit as u128 {
        return None;
    }
    let n = basis[0].len();
    let mut out = Vec::with_capacity(count as usize);
    for lead in 0..k {
        let tail = k - lead - 1;
        let combos = (q as u64).pow(tail as u32);
        for code in 0..combos {
            let mut v = basis[lead].clone();
            let mut c = code;
            for t in 0..tail {
                let x = (c % q as u64) as u8;
                c /= q as u64;
                if x != 0 {
                    v.add_scaled(&basis[lead + 1 + t], x);
                }
            }
            debug_assert_eq!(v.len(), n);
            out.push(v);
        }
    }
    Some(out)
}

/// Looks for a proper submodule with the default randomised chop.
pub fn find_proper_submodule(module: &Module, cfg: &SearchConfig) -> ChopOutcome {
    chop(module, cfg.budget, &mut cfg.rng())
}

pub(crate) fn chop<R: Rng + ?Sized>(module: &Module, budget: usize, rng: &mut R) -> ChopOutcome {
    let p = module.p;
    let n = module.dim;
    assert!(n >= 1, "the zero module has no chop");
    let ngens = module.gens.len();
    if n == 1 {
        // θ = 0 has the whole space as kernel, and one vector spins to it.
        let cert = NortonCertificate {
            element: EnvelopingElement {
                a: vec![0; ngens],
                b: vec![0; ngens],
                words: vec![0; WORDS],
                shift: 0,
            },
            nullity: 1,
            trials: 0,
        };
        return ChopOutcome::Irreducible(cert);
    }
    // Cheap probes: coordinate vectors at both ends.
    for i in [0, n - 1] {
        let s = module.spin([Vector::unit(p, n, i)]);
        if !s.is_full() {
            return ChopOutcome::Reducible(s);
        }
    }
    let dual = module.dual();
    for trial in 1..=budget {
        let base = EnvelopingElement::random(p, ngens, rng);
        let theta0 = base.evaluate(p, n, &module.gens);
        let shifts: Vec<u8> = if p.is_two() {
            vec![0, 1]
        } else {
            vec![0, rng.gen_range(1..p.get())]
        };
        for shift in shifts {
            let mut theta = theta0.clone();
            if shift != 0 {
                theta.add_identity_scaled(shift);
            }
            let k = theta.kernel();
            if k.is_zero() {
                continue;
            }
            let Some(points) = projective_points(k.basis(), MAX_NORTON_POINTS) else {
                // Too many points to certify; a random kernel vector may
                // still expose a submodule.
                let mut v = Vector::zeros(p, n);
                for b in k.basis() {
                    v.add_scaled(b, rng.gen_range(0..p.get()));
                }
                if !v.is_zero() {
                    let s = module.spin([v]);
                    if !s.is_full() {
                        return ChopOutcome::Reducible(s);
                    }
                }
                continue;
            };
            for v in points {
                let s = module.spin([v]);
                if !s.is_full() {
                    return ChopOutcome::Reducible(s);
                }
            }
            let kt = theta.transpose().kernel();
            let dual_points =
                projective_points(kt.basis(), MAX_NORTON_POINTS).expect("same nullity");
            for w in dual_points {
                let s = dual.spin([w]);
                if !s.is_full() {
                    return ChopOutcome::Reducible(s.annihilator());
                }
            }
            return ChopOutcome::Irreducible(NortonCertificate {
                element: base.with_shift(shift),
                nullity: k.dim(),
                trials: trial,
            });
        }
    }
    ChopOutcome::Unknown { trials: budget }
}

/// An irreducible subquotient of a composition series.
#[derive(Clone, Debug)]
pub struct CompositionFactor {
    pub section: Subquotient,
    pub module: Module,
    pub certificate: NortonCertificate,
}

impl CompositionFactor {
    pub fn dim(&self) -> usize {
        self.module.dim()
    }
}

/// `0 = V_0 < V_1 < ... < V_r = V` with irreducible `V_{i+1} / V_i`.
#[derive(Clone, Debug)]
pub struct CompositionSeries {
    pub flag: Vec<Subspace>,
    pub factors: Vec<CompositionFactor>,
}

impl CompositionSeries {
    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(CompositionFactor::dim).collect()
    }
}

pub fn composition_series(module: &Module, cfg: &SearchConfig) -> Result<CompositionSeries> {
    composition_series_with(module, cfg.budget, &mut cfg.rng())
}

pub(crate) fn composition_series_with<R: Rng + ?Sized>(
    module: &Module,
    budget: usize,
    rng: &mut R,
) -> Result<CompositionSeries> {
    let p = module.p;
    let n = module.dim;
    let mut flag = vec![Subspace::zero(p, n)];
    let mut factors = Vec::new();
    // Intervals still to refine, processed bottom-up.
    let mut stack = vec![(Subspace::zero(p, n), Subspace::full(p, n))];
    while let Some((lower, upper)) = stack.pop() {
        if lower.dim() == upper.dim() {
            continue;
        }
        let section = Subquotient::new(&lower, &upper);
        let m = module.subquotient(&section);
        match chop(&m, budget, rng) {
            ChopOutcome::Reducible(s) => {
                let mid = section.pull_back(&s);
                stack.push((mid.clone(), upper));
                stack.push((lower, mid));
            }
            ChopOutcome::Irreducible(certificate) => {
                flag.push(upper);
                factors.push(CompositionFactor {
                    section,
                    module: m,
                    certificate,
                });
            }
            ChopOutcome::Unknown { trials } => {
                return Err(Error::BudgetExhausted(format!(
                    "no verdict on a {}-dimensional section after {trials} trials",
                    m.dim()
                )))
            }
        }
    }
    Ok(CompositionSeries { flag, factors })
}

/// All minimal nonzero submodules.
///
/// Each minimal submodule `S` is isomorphic to some composition factor `F`.
/// For `dim F > 1` the certificate element `θ` of `F` is singular on `S`,
/// so `S` is spanned by the orbit of a kernel vector of `θ` on the whole
/// module; one-dimensional `S` are common eigenvectors with the
/// eigenvalues of `F`. Spinning all such points and keeping the
/// inclusion-minimal results gives every minimal submodule exactly once.
pub fn minimal_submodules(
    module: &Module,
    cfg: &SearchConfig,
    point_limit: usize,
) -> Result<Vec<Subspace>> {
    let p = module.p;
    let n = module.dim;
    if n == 0 {
        return Ok(Vec::new());
    }
    let series = composition_series(module, cfg)?;
    let mut kernels: Vec<Subspace> = Vec::new();
    for f in &series.factors {
        let k = if f.dim() == 1 {
            let mut rows = Matrix::zeros(p, 0, n);
            for (g, gf) in module.gens.iter().zip(f.module.gens()) {
                let mut shifted = g.clone();
                shifted.add_identity_scaled(p.neg(gf.get(0, 0)));
                rows = rows.vstack(&shifted);
            }
            if rows.nrows() == 0 {
                Subspace::full(p, n)
            } else {
                rows.kernel()
            }
        } else {
            f.certificate.element.evaluate(p, n, &module.gens).kernel()
        };
        if !k.is_zero() && !kernels.contains(&k) {
            kernels.push(k);
        }
    }
    let mut candidates: Vec<Subspace> = Vec::new();
    for k in &kernels {
        let points = projective_points(k.basis(), point_limit).ok_or_else(|| {
            Error::BudgetExhausted(format!(
                "a {}-dimensional kernel has more than {point_limit} points to spin",
                k.dim()
            ))
        })?;
        for v in points {
            let s = module.spin([v]);
            if !candidates.contains(&s) {
                candidates.push(s);
            }
        }
    }
    candidates.sort_by_key(Subspace::dim);
    let mut minimal: Vec<Subspace> = Vec::new();
    for s in candidates {
        if !minimal.iter().any(|m| s.contains_subspace(m)) {
            minimal.push(s);
        }
    }
    Ok(minimal)
}
