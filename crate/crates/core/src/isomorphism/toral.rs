//! Search for algebras too large to enumerate: fix a split torus in each
//! algebra, match the tori by their weight-space dimensions, and take the
//! remaining generators from weight spaces. A failure says nothing about
//! other tori, so only `Found` or `Unknown` come out of here.

use std::collections::HashMap;

use rand::Rng;

use super::census::Signature;
use super::search::{Backtrack, BacktrackResult, IsoOutcome, IsoSearch, SearchMethod, Signer};
use crate::field::Prime;
use crate::lie::LieAlgebra;
use crate::linalg::{EchelonBuilder, Matrix, Subspace, Vector};
use crate::search::SearchConfig;

/// Weight spaces larger than this are not enumerated for generator images.
const MAX_WEIGHT_SPACE: usize = 14;
/// Torus identifications tried per search.
const MAX_TORUS_MAPS: usize = 4096;

/// Solves `ad s = m` for the unique `s` (the centre must be trivial).
struct InnerSolver {
    n: usize,
    system: Matrix,
}

impl InnerSolver {
    fn new(l: &LieAlgebra) -> Self {
        let n = l.dim();
        let cols: Vec<Vector> = (0..n).map(|i| flatten(&l.ad_basis(i))).collect();
        InnerSolver {
            n,
            system: Matrix::from_columns(l.prime(), n * n, &cols),
        }
    }

    fn solve(&self, m: &Matrix) -> Option<Vector> {
        let s = self.system.solve(&flatten(m))?;
        debug_assert_eq!(s.len(), self.n);
        Some(s)
    }
}

fn flatten(m: &Matrix) -> Vector {
    let n = m.ncols();
    let mut v = Vector::zeros(m.prime(), m.nrows() * n);
    for r in 0..m.nrows() {
        for (c, x) in m.row(r).support() {
            v.set(r * n + c, x);
        }
    }
    v
}

fn pth_power(m: &Matrix, p: Prime) -> Matrix {
    let mut out = m.clone();
    for _ in 1..p.get() {
        out = out.mul(m);
    }
    out
}

/// Toral elements (`t^[p] = t`) of the torus generated by the semisimple
/// part of `x`.
fn toral_elements(l: &LieAlgebra, solver: &InnerSolver, x: &Vector) -> Vec<Vector> {
    let p = l.prime();
    let n = l.dim();
    let mut s = l.ad(x);
    let mut reach = 1usize;
    while reach < n {
        s = pth_power(&s, p);
        reach *= p.get() as usize;
    }
    let mut orbit = EchelonBuilder::new(p, n);
    let mut span = Vec::new();
    for _ in 0..64 {
        let Some(v) = solver.solve(&s) else {
            return Vec::new();
        };
        if orbit.insert(v.clone()).is_none() {
            break;
        }
        span.push(v);
        s = pth_power(&s, p);
    }
    if span.is_empty() {
        return Vec::new();
    }
    // p-map on span coordinates, then its fixed points.
    let space = Subspace::span(p, n, span.iter().cloned());
    let basis = space.basis().to_vec();
    let f = basis.len();
    let mut cols = Vec::with_capacity(f);
    for b in &basis {
        let Some(img) = solver.solve(&pth_power(&l.ad(b), p)) else {
            return Vec::new();
        };
        let Some(c) = space.coordinates(&img) else {
            return Vec::new();
        };
        cols.push(c);
    }
    let mut fixed = Matrix::from_columns(p, f, &cols);
    fixed.add_identity_scaled(p.neg(1));
    fixed
        .kernel()
        .basis()
        .iter()
        .map(|c| space.from_coordinates(c))
        .collect()
}

/// Greedy maximal split torus: toral elements of random elements of the
/// current centraliser.
fn find_torus<R: Rng>(
    l: &LieAlgebra,
    solver: &InnerSolver,
    rng: &mut R,
    trials: usize,
) -> Vec<Vector> {
    let p = l.prime();
    let n = l.dim();
    let mut torus = EchelonBuilder::new(p, n);
    let mut basis: Vec<Vector> = Vec::new();
    let mut idle = 0;
    for _ in 0..trials {
        let current = Subspace::span(p, n, basis.iter().cloned());
        let cent = l.centralizer(&current);
        let coords = Vector::random(p, cent.dim(), rng);
        let x = cent.from_coordinates(&coords);
        let mut grew = false;
        for t in toral_elements(l, solver, &x) {
            if torus.insert(t.clone()).is_some() {
                basis.push(t);
                grew = true;
            }
        }
        idle = if grew { 0 } else { idle + 1 };
        if idle >= 12 && !basis.is_empty() {
            break;
        }
    }
    basis
}

/// Simultaneous eigenspaces of `ad t_i`, keyed by eigenvalue tuple.
fn weight_spaces(l: &LieAlgebra, torus: &[Vector]) -> Vec<(Vec<u8>, Subspace)> {
    let p = l.prime();
    let mut parts = vec![(Vec::new(), l.full_space())];
    for t in torus {
        let ad = l.ad(t);
        let mut next = Vec::new();
        for (w, v) in parts {
            for lambda in 0..p.get() {
                let mut m = ad.clone();
                m.add_identity_scaled(p.neg(lambda));
                let piece = m.kernel().intersect(&v);
                if !piece.is_zero() {
                    let mut w2 = w.clone();
                    w2.push(lambda);
                    next.push((w2, piece));
                }
            }
        }
        parts = next;
    }
    parts
}

fn all_vectors(p: Prime, len: usize) -> impl Iterator<Item = Vector> {
    let total = (p.get() as u64).pow(len as u32);
    (1..total).map(move |c| Vector::decode(p, len, c))
}

/// Weight of a target weight space seen through torus images whose
/// coordinates in the target torus basis are the rows of `a`.
fn mapped_weight(p: Prime, a: &[Vector], w: &[u8]) -> Vec<u8> {
    let wv = Vector::from_residues(p, w);
    a.iter().map(|row| row.dot(&wv)).collect()
}

fn weight_profile(p: Prime, a: &[Vector], spaces: &[(Vec<u8>, Subspace)]) -> Vec<(Vec<u8>, usize)> {
    let mut out: Vec<(Vec<u8>, usize)> = spaces
        .iter()
        .map(|(w, s)| (mapped_weight(p, a, w), s.dim()))
        .collect();
    out.sort();
    out
}

/// Coefficient rows for the images of the source torus basis.
fn torus_maps(
    p: Prime,
    sig1: &[Signature],
    t2: &[Vector],
    signer2: &Signer,
    target_profile: &[(Vec<u8>, usize)],
    spaces2: &[(Vec<u8>, Subspace)],
) -> Vec<Vec<Vector>> {
    let r = t2.len();
    let combos: Vec<(Vector, Signature)> = all_vectors(p, r)
        .map(|c| {
            let mut u = Vector::zeros(p, signer2.algebra.dim());
            for (j, x) in c.support() {
                u.add_scaled(&t2[j], x);
            }
            let s = signer2.sign(&u);
            (c, s)
        })
        .collect();
    let mut out = Vec::new();
    let mut rows: Vec<Vector> = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        p: Prime,
        k: usize,
        sig1: &[Signature],
        combos: &[(Vector, Signature)],
        rows: &mut Vec<Vector>,
        target_profile: &[(Vec<u8>, usize)],
        spaces2: &[(Vec<u8>, Subspace)],
        out: &mut Vec<Vec<Vector>>,
    ) {
        if out.len() >= MAX_TORUS_MAPS {
            return;
        }
        if k == sig1.len() {
            if weight_profile(p, rows, spaces2) == target_profile {
                out.push(rows.clone());
            }
            return;
        }
        for (c, s) in combos {
            if *s != sig1[k] {
                continue;
            }
            let mut trial = rows.clone();
            trial.push(c.clone());
            let r = trial.len();
            if super::rank_of(p, c.len(), &trial) < r {
                continue;
            }
            rows.push(c.clone());
            rec(p, k + 1, sig1, combos, rows, target_profile, spaces2, out);
            rows.pop();
        }
    }
    rec(
        p,
        0,
        sig1,
        &combos,
        &mut rows,
        target_profile,
        spaces2,
        &mut out,
    );
    out
}

/// A split torus with its weight decomposition.
struct Torus {
    basis: Vec<Vector>,
    spaces: Vec<(Vec<u8>, Subspace)>,
}

impl Torus {
    fn profile(&self) -> Vec<(Vec<u8>, usize)> {
        let mut out: Vec<(Vec<u8>, usize)> = self
            .spaces
            .iter()
            .map(|(w, s)| (w.clone(), s.dim()))
            .collect();
        out.sort();
        out
    }

    /// Dimensions only: invariant under change of torus basis.
    fn shape(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.spaces.iter().map(|(_, s)| s.dim()).collect();
        d.sort();
        d
    }
}

fn draw_torus<R: Rng>(l: &LieAlgebra, solver: &InnerSolver, rng: &mut R, trials: usize) -> Torus {
    let basis = find_torus(l, solver, rng, trials);
    let spaces = weight_spaces(l, &basis);
    Torus { basis, spaces }
}

/// Torus basis followed by weight vectors, each chosen greedily to enlarge
/// the generated subalgebra the most.
fn choose_generators<R: Rng>(
    l: &LieAlgebra,
    torus: &Torus,
    rng: &mut R,
) -> Option<(Vec<Vector>, Vec<Vec<u8>>)> {
    let p = l.prime();
    let n = l.dim();
    let mut gens = torus.basis.clone();
    let mut weights = Vec::new();
    let mut dim = l.subalgebra_closure(&gens).dim();
    while dim < n {
        let mut best: Option<(usize, usize, Vector, Vec<u8>)> = None;
        for (w, s) in &torus.spaces {
            if s.dim() > MAX_WEIGHT_SPACE {
                continue;
            }
            for _ in 0..6 {
                let v = s.from_coordinates(&Vector::random(p, s.dim(), rng));
                if v.is_zero() {
                    continue;
                }
                let mut trial = gens.clone();
                trial.push(v.clone());
                let d = l.subalgebra_closure(&trial).dim();
                let better = match &best {
                    None => d > dim,
                    Some((bd, bs, _, _)) => d > *bd || (d == *bd && s.dim() < *bs),
                };
                if better {
                    best = Some((d, s.dim(), v, w.clone()));
                }
            }
        }
        let (d, _, v, w) = best?;
        gens.push(v);
        weights.push(w);
        dim = d;
    }
    Some((gens, weights))
}

pub(crate) fn search(
    l1: &LieAlgebra,
    l2: &LieAlgebra,
    cfg: &SearchConfig,
    limit: usize,
) -> IsoSearch {
    let mut result = IsoSearch {
        outcome: IsoOutcome::Unknown(String::new()),
        method: SearchMethod::Toral,
        checks: 0,
    };
    if !l1.center().is_zero() {
        result.outcome = IsoOutcome::Unknown("toral search needs a trivial centre".into());
        return result;
    }
    let p = l1.prime();
    let n = l1.dim();
    let mut rng = cfg.rng();
    let trials = cfg.budget.max(1);
    let (s1, s2) = (InnerSolver::new(l1), InnerSolver::new(l2));

    // Source torus: the largest of a few draws.
    let mut t1 = draw_torus(l1, &s1, &mut rng, trials);
    for _ in 0..3 {
        let t = draw_torus(l1, &s1, &mut rng, trials);
        if t.basis.len() > t1.basis.len() {
            t1 = t;
        }
    }
    let r = t1.basis.len();
    if r == 0 {
        result.outcome = IsoOutcome::Unknown("no toral elements found".into());
        return result;
    }
    let Some((gens, gen_weights)) = choose_generators(l1, &t1, &mut rng) else {
        result.outcome =
            IsoOutcome::Unknown("weight vectors from small weight spaces do not generate".into());
        return result;
    };
    let profile1 = t1.profile();
    let signer1 = Signer::new(l1);
    let signer2 = Signer::new(l2);
    let sigs: Vec<Signature> = gens.iter().map(|g| signer1.sign(g)).collect();
    let mut pair_sigs: HashMap<(usize, usize), (Signature, Signature)> = HashMap::new();
    for k in 0..gens.len() {
        for i in 0..k {
            let mut sum = gens[i].clone();
            sum.add_assign(&gens[k]);
            let br = l1.bracket(&gens[i], &gens[k]);
            pair_sigs.insert((i, k), (signer1.sign(&sum), signer1.sign(&br)));
        }
    }
    let compatible = |k: usize, h: &Vector, chosen: &[Vector]| -> bool {
        chosen.iter().enumerate().all(|(i, hi)| {
            let (s, b) = &pair_sigs[&(i, k)];
            let mut sum = hi.clone();
            sum.add_assign(h);
            signer2.sign(&sum) == *s && signer2.sign(&l2.bracket(hi, h)) == *b
        })
    };

    let mut tori_tried = 0;
    let mut matchings = 0;
    for _ in 0..trials {
        if result.checks >= limit {
            result.outcome = IsoOutcome::Unknown(format!("budget of {limit} replays exhausted"));
            return result;
        }
        let t2 = draw_torus(l2, &s2, &mut rng, trials);
        if t2.basis.len() != r || t2.shape() != t1.shape() {
            continue;
        }
        tori_tried += 1;
        let maps = torus_maps(p, &sigs[..r], &t2.basis, &signer2, &profile1, &t2.spaces);
        for a in &maps {
            matchings += 1;
            let mut candidates: Vec<Vec<Vector>> = Vec::with_capacity(gens.len());
            for row in a {
                let mut u = Vector::zeros(p, n);
                for (j, x) in row.support() {
                    u.add_scaled(&t2.basis[j], x);
                }
                candidates.push(vec![u]);
            }
            let mut feasible = true;
            for (k, w) in gen_weights.iter().enumerate() {
                let Some((_, space)) = t2
                    .spaces
                    .iter()
                    .find(|(w2, _)| mapped_weight(p, a, w2) == *w)
                else {
                    feasible = false;
                    break;
                };
                let list: Vec<Vector> = all_vectors(p, space.dim())
                    .map(|c| space.from_coordinates(&c))
                    .filter(|v| signer2.sign(v) == sigs[r + k])
                    .collect();
                if list.is_empty() {
                    feasible = false;
                    break;
                }
                candidates.push(list);
            }
            if !feasible {
                continue;
            }
            let mut bt = Backtrack::new(
                l1,
                l2,
                &gens,
                candidates,
                &compatible,
                limit.saturating_sub(result.checks),
            );
            let found = bt.run();
            result.checks += bt.checks;
            match found {
                BacktrackResult::Found(m) => {
                    result.outcome = IsoOutcome::Found(m);
                    return result;
                }
                BacktrackResult::OutOfBudget => {
                    result.outcome =
                        IsoOutcome::Unknown(format!("budget of {limit} replays exhausted"));
                    return result;
                }
                BacktrackResult::Exhausted => {}
            }
        }
    }
    result.outcome = IsoOutcome::Unknown(format!(
        "no isomorphism carries the chosen rank-{r} torus onto any of {tori_tried} target tori \
         ({matchings} torus matchings tried)"
    ));
    result
}
