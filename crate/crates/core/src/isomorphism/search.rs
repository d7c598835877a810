//! Backtracking isomorphism search over images of a generating tuple.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::census::{ElementCensus, Signature, SignatureEngine};
use super::{fingerprint, toral, verify_certificate};
use crate::lie::LieAlgebra;
use crate::linalg::{EchelonBuilder, Matrix, Vector};
use crate::search::SearchConfig;

/// Algebras with at most this many elements are enumerated outright.
pub const ENUMERATION_LIMIT: u64 = 1 << 20;

/// The coset test walks at most `p^COSET_SPAN` elements.
const COSET_SPAN: usize = 12;

/// Replay cap of the first restart round.
const FIRST_ROUND: usize = 1024;

/// Partial-image replays allowed per unit of budget.
pub const CHECKS_PER_BUDGET: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMethod {
    /// Decided from invariants alone, or trivial.
    Invariants,
    /// Full census of both algebras; a negative answer is exhaustive.
    Enumeration,
    /// Generators taken from a split torus and its weight spaces.
    Toral,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoOutcome {
    /// Column `i` is the image of source basis vector `i`.
    Found(Matrix),
    Absent(String),
    Unknown(String),
}

#[derive(Clone, Debug)]
pub struct IsoSearch {
    pub outcome: IsoOutcome,
    pub method: SearchMethod,
    /// Partial generator images replayed.
    pub checks: usize,
}

impl IsoSearch {
    fn decided(outcome: IsoOutcome) -> Self {
        IsoSearch {
            outcome,
            method: SearchMethod::Invariants,
            checks: 0,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self.outcome, IsoOutcome::Found(_))
    }
}

/// How each basis vector of the subalgebra generated by a tuple arises from
/// the generators, and the linear relations every candidate image tuple
/// must reproduce.
pub(crate) struct Program {
    basis: Vec<Vector>,
    steps: Vec<Step>,
    /// Relations `[g_a, b_j] = sum coeffs`, grouped by the step after
    /// which every term is known.
    checks: Vec<Vec<Relation>>,
    /// Present when the generators span the whole algebra.
    basis_inverse: Option<Matrix>,
}

#[derive(Clone, Copy)]
enum Step {
    Generator(usize),
    /// `[g_a, b_j]`.
    Bracket(usize, usize),
}

struct Relation {
    gen: usize,
    of: usize,
    coeffs: Vector,
}

impl Program {
    /// Records a breadth-first spin of `gens` under their own `ad`; `None`
    /// if the generators are linearly dependent.
    pub fn new(l: &LieAlgebra, gens: &[Vector]) -> Option<Self> {
        let p = l.prime();
        let n = l.dim();
        let mut ech = EchelonBuilder::new(p, n);
        let mut basis = Vec::new();
        let mut steps = Vec::new();
        for (a, g) in gens.iter().enumerate() {
            ech.insert(g.clone())?;
            basis.push(g.clone());
            steps.push(Step::Generator(a));
        }
        let mut pending = Vec::new();
        let mut j = 0;
        while j < basis.len() {
            for (a, g) in gens.iter().enumerate() {
                let v = l.bracket(g, &basis[j]);
                if ech.insert(v.clone()).is_some() {
                    basis.push(v);
                    steps.push(Step::Bracket(a, j));
                } else {
                    pending.push((a, j, v));
                }
            }
            j += 1;
        }
        let d = basis.len();
        let columns = Matrix::from_columns(p, n, &basis);
        let mut checks: Vec<Vec<Relation>> = (0..d).map(|_| Vec::new()).collect();
        for (gen, of, v) in pending {
            let coeffs = columns.solve(&v).expect("closed under the generators");
            let ready = coeffs.support().map(|(k, _)| k).max().unwrap_or(0).max(of);
            checks[ready].push(Relation { gen, of, coeffs });
        }
        let basis_inverse = if d == n { columns.inverse() } else { None };
        Some(Program {
            basis,
            steps,
            checks,
            basis_inverse,
        })
    }

    /// Images of the spun basis if every relation holds on `images` and the
    /// images stay independent.
    pub fn replay(&self, target: &LieAlgebra, images: &[Vector]) -> Option<Vec<Vector>> {
        let p = target.prime();
        let n = target.dim();
        let mut ech = EchelonBuilder::new(p, n);
        let mut c: Vec<Vector> = Vec::with_capacity(self.steps.len());
        for (k, step) in self.steps.iter().enumerate() {
            let v = match *step {
                Step::Generator(a) => images[a].clone(),
                Step::Bracket(a, j) => target.bracket(&images[a], &c[j]),
            };
            ech.insert(v.clone())?;
            c.push(v);
            for rel in &self.checks[k] {
                let lhs = target.bracket(&images[rel.gen], &c[rel.of]);
                let mut rhs = Vector::zeros(p, n);
                for (i, x) in rel.coeffs.support() {
                    rhs.add_scaled(&c[i], x);
                }
                if lhs != rhs {
                    return None;
                }
            }
        }
        Some(c)
    }

    /// Source basis of the spun subalgebra.
    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// The isomorphism determined by `images`, for a spanning program.
    pub fn isomorphism(&self, target: &LieAlgebra, images: &[Vector]) -> Option<Matrix> {
        let inv = self.basis_inverse.as_ref()?;
        let c = self.replay(target, images)?;
        Some(Matrix::from_columns(target.prime(), target.dim(), &c).mul(inv))
    }
}

/// Accepts image `h` for generator `k` given the images of `0..k`.
pub(crate) type PairTest<'a> = &'a dyn Fn(usize, &Vector, &[Vector]) -> bool;

/// Accepts image `h` for generator `k` given the partial map on the
/// subalgebra spanned by generators `0..k`: source basis and its images.
pub(crate) type CosetTest<'a> = &'a dyn Fn(usize, &Vector, &[Vector], &[Vector]) -> bool;

/// Depth-first search over candidate generator images. Each partial tuple
/// must pass the pairwise and coset tests and replay the relations of the
/// subalgebra its source generators span.
pub(crate) struct Backtrack<'a> {
    pub target: &'a LieAlgebra,
    /// `programs[k]` spins the first `k + 1` generators; the last spans.
    pub programs: Vec<Program>,
    pub candidates: Vec<Vec<Vector>>,
    pub compatible: PairTest<'a>,
    pub coset: Option<CosetTest<'a>>,
    pub limit: usize,
    pub checks: usize,
    stop: usize,
}

pub(crate) enum BacktrackResult {
    Found(Matrix),
    Exhausted,
    OutOfBudget,
}

impl<'a> Backtrack<'a> {
    pub fn new(
        source: &LieAlgebra,
        target: &'a LieAlgebra,
        gens: &[Vector],
        candidates: Vec<Vec<Vector>>,
        compatible: PairTest<'a>,
        limit: usize,
    ) -> Self {
        let programs = (1..=gens.len())
            .map(|k| Program::new(source, &gens[..k]).expect("independent generators"))
            .collect();
        Backtrack {
            target,
            programs,
            candidates,
            compatible,
            coset: None,
            limit,
            checks: 0,
            stop: limit,
        }
    }

    pub fn run(&mut self) -> BacktrackResult {
        self.stop = self.limit;
        let mut chosen = Vec::with_capacity(self.candidates.len());
        self.descend(&mut chosen, &[])
    }

    /// Runs rounds with doubling replay caps, shuffling the candidate
    /// order between rounds so one barren subtree cannot absorb the whole
    /// budget. A round that finishes under its cap has covered the full
    /// tree, so `Exhausted` stays a proof.
    pub fn run_restarting<R: Rng>(&mut self, first_round: usize, rng: &mut R) -> BacktrackResult {
        let mut cap = first_round.max(1);
        loop {
            self.stop = self.limit.min(self.checks.saturating_add(cap));
            let mut chosen = Vec::with_capacity(self.candidates.len());
            match self.descend(&mut chosen, &[]) {
                BacktrackResult::OutOfBudget if self.checks < self.limit => {
                    for list in &mut self.candidates {
                        list.shuffle(rng);
                    }
                    cap = cap.saturating_mul(2);
                }
                other => return other,
            }
        }
    }

    fn descend(&mut self, chosen: &mut Vec<Vector>, prefix: &[Vector]) -> BacktrackResult {
        let k = chosen.len();
        if k == self.candidates.len() {
            let last = self.programs.last().expect("at least one generator");
            return match last.isomorphism(self.target, chosen) {
                Some(m) => BacktrackResult::Found(m),
                None => BacktrackResult::Exhausted,
            };
        }
        for idx in 0..self.candidates[k].len() {
            let h = self.candidates[k][idx].clone();
            if !(self.compatible)(k, &h, chosen) {
                continue;
            }
            if k > 0 {
                if let Some(coset) = self.coset {
                    if !coset(k, &h, self.programs[k - 1].basis(), prefix) {
                        continue;
                    }
                }
            }
            if self.checks >= self.stop {
                return BacktrackResult::OutOfBudget;
            }
            self.checks += 1;
            chosen.push(h);
            let r = match self.programs[k].replay(self.target, chosen) {
                Some(images) => self.descend(chosen, &images),
                None => BacktrackResult::Exhausted,
            };
            chosen.pop();
            match r {
                BacktrackResult::Exhausted => {}
                other => return other,
            }
        }
        BacktrackResult::Exhausted
    }
}

/// Searches for an isomorphism `l1 -> l2`. `Absent` is only returned when
/// the answer is proved: by differing invariants or an exhaustive search.
pub fn find_isomorphism(l1: &LieAlgebra, l2: &LieAlgebra, cfg: &SearchConfig) -> IsoSearch {
    if l1.prime() != l2.prime() {
        return IsoSearch::decided(IsoOutcome::Absent("different fields".into()));
    }
    if l1.dim() != l2.dim() {
        return IsoSearch::decided(IsoOutcome::Absent(format!(
            "dimensions differ: {} vs {}",
            l1.dim(),
            l2.dim()
        )));
    }
    let (f1, f2) = (fingerprint(l1), fingerprint(l2));
    if f1 != f2 {
        return IsoSearch::decided(IsoOutcome::Absent(format!(
            "fingerprints differ: {f1} vs {f2}"
        )));
    }
    let p = l1.prime();
    let n = l1.dim();
    if l1.is_abelian() {
        return IsoSearch::decided(IsoOutcome::Found(Matrix::identity(p, n)));
    }
    let limit = cfg.budget.saturating_mul(CHECKS_PER_BUDGET);
    let mut search = match (
        ElementCensus::compute(l1, ENUMERATION_LIMIT),
        ElementCensus::compute(l2, ENUMERATION_LIMIT),
    ) {
        (Some(c1), Some(c2)) => by_enumeration(l1, l2, &c1, &c2, cfg.seed, limit),
        _ => toral::search(l1, l2, cfg, limit),
    };
    if let IsoOutcome::Found(m) = &search.outcome {
        let verdict = verify_certificate(l1, l2, m);
        if !verdict.is_accepted() {
            search.outcome = IsoOutcome::Unknown(format!("internal: candidate {verdict}"));
        }
    }
    search
}

/// Chooses generators of `l` with small classes: pairs first, then greedy
/// extension.
fn choose_generators(l: &LieAlgebra, census: &ElementCensus) -> Vec<Vector> {
    let p = l.prime();
    let n = l.dim();
    let mut by_size: Vec<u32> = (0..census.class_count() as u32)
        .filter(|&c| census.members(c).iter().all(|&m| m != 0))
        .collect();
    by_size.sort_by_key(|&c| (census.members(c).len(), c));
    let elements: Vec<(usize, Vector)> = by_size
        .iter()
        .flat_map(|&c| {
            let size = census.members(c).len();
            let members = census.members(c);
            let step = (members.len() / 4).max(1);
            members
                .iter()
                .step_by(step)
                .take(4)
                .map(move |&m| (size, Vector::decode(p, n, m)))
        })
        .collect();
    let mut best: Option<(usize, Vec<Vector>)> = None;
    for (s1, g1) in elements.iter().take(64) {
        for (s2, g2) in &elements {
            let cost = s1.saturating_mul(*s2);
            if best.as_ref().is_some_and(|(c, _)| *c <= cost) {
                break;
            }
            if l.subalgebra_closure(&[g1.clone(), g2.clone()]).is_full() {
                best = Some((cost, vec![g1.clone(), g2.clone()]));
                break;
            }
        }
    }
    if let Some((_, gens)) = best {
        return gens;
    }
    let mut gens = vec![elements[0].1.clone()];
    let mut dim = 1;
    while dim < n {
        let mut pick: Option<(usize, Vector)> = None;
        for (_, g) in &elements {
            let mut trial = gens.clone();
            trial.push(g.clone());
            let d = l.subalgebra_closure(&trial).dim();
            if d > pick.as_ref().map_or(dim, |(b, _)| *b) {
                pick = Some((d, g.clone()));
                if d == n {
                    break;
                }
            }
        }
        let (d, g) = pick.unwrap_or_else(|| {
            // Some unit vector always enlarges a proper subalgebra.
            let closure = l.subalgebra_closure(&gens);
            let i = closure.non_pivots()[0];
            let mut trial = gens.clone();
            trial.push(l.unit(i));
            (l.subalgebra_closure(&trial).dim(), l.unit(i))
        });
        gens.push(g);
        dim = d;
    }
    gens
}

fn by_enumeration(
    l1: &LieAlgebra,
    l2: &LieAlgebra,
    c1: &ElementCensus,
    c2: &ElementCensus,
    seed: u64,
    limit: usize,
) -> IsoSearch {
    let mut search = IsoSearch {
        outcome: IsoOutcome::Unknown(String::new()),
        method: SearchMethod::Enumeration,
        checks: 0,
    };
    if c1.histogram() != c2.histogram() {
        search.outcome = IsoOutcome::Absent("element signature census differs".into());
        return search;
    }
    let p = l1.prime();
    let n = l1.dim();
    let gens = choose_generators(l1, c1);
    let target_class =
        |v: &Vector| -> Option<u32> { c2.class_with(c1.signature(c1.class_of(v.encode()))) };
    let candidates: Vec<Vec<Vector>> = gens
        .iter()
        .map(|g| {
            let c = target_class(g).expect("histograms agree");
            c2.members(c)
                .iter()
                .map(|&m| Vector::decode(p, n, m))
                .collect()
        })
        .collect();
    // Signatures of sums and brackets of generator pairs, keyed by (i, k).
    let mut pair_sigs: HashMap<(usize, usize), (Signature, Signature)> = HashMap::new();
    for k in 0..gens.len() {
        for i in 0..k {
            let mut sum = gens[i].clone();
            sum.add_assign(&gens[k]);
            let br = l1.bracket(&gens[i], &gens[k]);
            pair_sigs.insert(
                (i, k),
                (
                    c1.signature(c1.class_of(sum.encode())).clone(),
                    c1.signature(c1.class_of(br.encode())).clone(),
                ),
            );
        }
    }
    let compatible = |k: usize, h: &Vector, chosen: &[Vector]| -> bool {
        chosen.iter().enumerate().all(|(i, hi)| {
            let (s, b) = &pair_sigs[&(i, k)];
            let mut sum = hi.clone();
            sum.add_assign(h);
            let br = l2.bracket(hi, h);
            c2.signature(c2.class_of(sum.encode())) == s
                && c2.signature(c2.class_of(br.encode())) == b
        })
    };
    // x + g_k and phi(x) + h must share a class for every x in the span of
    // the earlier generators' subalgebra (sampled when that is large).
    let coset = |k: usize, h: &Vector, src: &[Vector], img: &[Vector]| -> bool {
        let d = src.len().min(COSET_SPAN);
        let total = (p.get() as u64).pow(d as u32);
        let mut x = gens[k].clone();
        let mut y = h.clone();
        for code in 0..total {
            if code > 0 {
                // Mixed-radix increment: add the basis vectors whose digit
                // changes.
                let mut c = code;
                let mut i = 0;
                loop {
                    x.add_assign(&src[i]);
                    y.add_assign(&img[i]);
                    if c % p.get() as u64 != 0 {
                        break;
                    }
                    // Digit wrapped from p-1 to 0: that also added p times.
                    c /= p.get() as u64;
                    i += 1;
                }
            }
            let sx = c1.signature(c1.class_of(x.encode()));
            let sy = c2.signature(c2.class_of(y.encode()));
            if sx != sy {
                return false;
            }
        }
        true
    };
    let mut bt = Backtrack::new(l1, l2, &gens, candidates, &compatible, limit);
    bt.coset = Some(&coset);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let result = bt.run_restarting(FIRST_ROUND, &mut rng);
    search.checks = bt.checks;
    search.outcome = match result {
        BacktrackResult::Found(m) => IsoOutcome::Found(m),
        BacktrackResult::Exhausted => IsoOutcome::Absent(format!(
            "no image of a {}-element generating tuple extends ({} partial images replayed)",
            gens.len(),
            bt.checks
        )),
        BacktrackResult::OutOfBudget => {
            IsoOutcome::Unknown(format!("budget of {limit} replays exhausted"))
        }
    };
    search
}

/// Signature of `x` in `l`, sharing the engine across calls.
pub(crate) struct Signer<'a> {
    pub algebra: &'a LieAlgebra,
    engine: SignatureEngine,
}

impl<'a> Signer<'a> {
    pub fn new(algebra: &'a LieAlgebra) -> Self {
        Signer {
            algebra,
            engine: SignatureEngine::new(algebra),
        }
    }

    pub fn sign(&self, x: &Vector) -> Signature {
        self.engine.signature(self.algebra, x)
    }
}
