//! Adjoint-module analysis: ideals are the submodules of the adjoint
//! module, so irreducibility, radicals, minimal ideals and simple
//! constituents all reduce to module computations.

mod meataxe;

pub use meataxe::{
    composition_series, find_proper_submodule, minimal_submodules, projective_points, ChopOutcome,
    CompositionFactor, CompositionSeries, EnvelopingElement, Module, NortonCertificate,
};

use rand::Rng;

use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::linalg::{EchelonBuilder, Matrix, Subquotient, Subspace, Vector};
use crate::search::SearchConfig;

/// Default cap on the points spun by [`minimal_ideals`].
pub const DEFAULT_POINT_LIMIT: usize = 1 << 12;

/// The adjoint representation `x -> ad x` on the basis of `L`.
#[derive(Clone, Debug)]
pub struct AdjointRep<'a> {
    algebra: &'a LieAlgebra,
    ad: Vec<Matrix>,
}

pub fn adjoint_rep(algebra: &LieAlgebra) -> AdjointRep<'_> {
    let ad = (0..algebra.dim()).map(|i| algebra.ad_basis(i)).collect();
    AdjointRep { algebra, ad }
}

impl<'a> AdjointRep<'a> {
    pub fn algebra(&self) -> &'a LieAlgebra {
        self.algebra
    }

    /// `ad e_i`, acting on columns.
    pub fn generator(&self, i: usize) -> &Matrix {
        &self.ad[i]
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.ad
    }

    pub fn traces(&self) -> Vec<u8> {
        self.ad.iter().map(Matrix::trace).collect()
    }

    /// The adjoint module on all `ad e_i`.
    pub fn module(&self) -> Module {
        Module::new(self.algebra.prime(), self.algebra.dim(), self.ad.clone())
    }
}

/// A small set generating `L` as a Lie algebra: two random elements, topped
/// up greedily with basis vectors outside the generated subalgebra.
pub fn lie_generating_set<R: Rng + ?Sized>(l: &LieAlgebra, rng: &mut R) -> Vec<Vector> {
    let p = l.prime();
    let n = l.dim();
    if n == 0 {
        return Vec::new();
    }
    let mut gens: Vec<Vector> = (0..2.min(n))
        .map(|_| Vector::random(p, n, rng))
        .filter(|v| !v.is_zero())
        .collect();
    let mut closure = l.subalgebra_closure(&gens);
    for i in 0..n {
        if closure.is_full() {
            break;
        }
        let e = l.unit(i);
        if !closure.contains(&e) {
            gens.push(e);
            closure = l.subalgebra_closure(&gens);
        }
    }
    gens
}

/// The adjoint module on `ad g` for a Lie generating set `g`; it has the
/// same submodules as the module on all `ad e_i`, because `ad` turns
/// brackets into commutators.
#[derive(Clone, Debug)]
pub struct GeneratedAdjoint {
    pub generators: Vec<Vector>,
    pub module: Module,
}

pub fn generated_adjoint<R: Rng + ?Sized>(l: &LieAlgebra, rng: &mut R) -> GeneratedAdjoint {
    let generators = lie_generating_set(l, rng);
    let module = Module::new(
        l.prime(),
        l.dim(),
        generators.iter().map(|g| l.ad(g)).collect(),
    );
    GeneratedAdjoint { generators, module }
}

/// Certificate that the adjoint module is irreducible.
#[derive(Clone, Debug)]
pub struct SimplicityWitness {
    pub generators: Vec<Vector>,
    pub certificate: NortonCertificate,
}

impl SimplicityWitness {
    /// Checks that the generators generate `L` and that the certificate
    /// holds for their adjoint action.
    pub fn verify(&self, l: &LieAlgebra) -> bool {
        if !l.subalgebra_closure(&self.generators).is_full() {
            return false;
        }
        let m = Module::new(
            l.prime(),
            l.dim(),
            self.generators.iter().map(|g| l.ad(g)).collect(),
        );
        self.certificate.verify(&m)
    }
}

#[derive(Clone, Debug)]
pub enum NotSimple {
    Zero,
    Abelian,
    /// A proper nonzero ideal.
    ProperIdeal(Subspace),
}

#[derive(Clone, Debug)]
pub enum SimplicityVerdict {
    Simple(SimplicityWitness),
    NotSimple(NotSimple),
    Unknown { trials: usize },
}

impl SimplicityVerdict {
    pub fn is_simple(&self) -> bool {
        matches!(self, SimplicityVerdict::Simple(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, SimplicityVerdict::Unknown { .. })
    }
}

/// Simple means nonzero, nonabelian, with irreducible adjoint module.
pub fn is_simple(l: &LieAlgebra, cfg: &SearchConfig) -> SimplicityVerdict {
    if l.dim() == 0 {
        return SimplicityVerdict::NotSimple(NotSimple::Zero);
    }
    if l.is_abelian() {
        return SimplicityVerdict::NotSimple(NotSimple::Abelian);
    }
    let mut rng = cfg.rng();
    let adj = generated_adjoint(l, &mut rng);
    match meataxe::chop(&adj.module, cfg.budget, &mut rng) {
        ChopOutcome::Irreducible(certificate) => SimplicityVerdict::Simple(SimplicityWitness {
            generators: adj.generators,
            certificate,
        }),
        ChopOutcome::Reducible(ideal) => {
            SimplicityVerdict::NotSimple(NotSimple::ProperIdeal(ideal))
        }
        ChopOutcome::Unknown { trials } => SimplicityVerdict::Unknown { trials },
    }
}

/// Largest nilpotent ideal: the elements acting as zero on every
/// composition factor of the adjoint module.
pub fn nilradical(l: &LieAlgebra, cfg: &SearchConfig) -> Result<Subspace> {
    let mut rng = cfg.rng();
    nilradical_with(l, cfg.budget, &mut rng)
}

fn nilradical_with<R: Rng + ?Sized>(
    l: &LieAlgebra,
    budget: usize,
    rng: &mut R,
) -> Result<Subspace> {
    let p = l.prime();
    let n = l.dim();
    if n == 0 {
        return Ok(Subspace::zero(p, 0));
    }
    let adj = generated_adjoint(l, rng);
    let series = meataxe::composition_series_with(&adj.module, budget, rng)?;
    let ads: Vec<Matrix> = (0..n).map(|j| l.ad_basis(j)).collect();
    // Row (factor, r, c) of the constraint matrix holds entry (r, c) of the
    // induced action of every ad e_j.
    let mut constraints = EchelonBuilder::new(p, n);
    'factors: for f in &series.factors {
        let induced: Vec<Matrix> = ads.iter().map(|a| f.section.induced(a)).collect();
        let d = f.dim();
        for r in 0..d {
            for c in 0..d {
                let mut row = Vector::zeros(p, n);
                for (j, m) in induced.iter().enumerate() {
                    let x = m.get(r, c);
                    if x != 0 {
                        row.set(j, x);
                    }
                }
                constraints.insert(row);
                if constraints.is_full() {
                    break 'factors;
                }
            }
        }
    }
    Ok(constraints.into_subspace().annihilator())
}

/// Largest solvable ideal, as the limit of pulled-back nilradicals of
/// successive quotients.
pub fn solvable_radical(l: &LieAlgebra, cfg: &SearchConfig) -> Result<Subspace> {
    let mut rng = cfg.rng();
    solvable_radical_with(l, cfg.budget, &mut rng)
}

fn solvable_radical_with<R: Rng + ?Sized>(
    l: &LieAlgebra,
    budget: usize,
    rng: &mut R,
) -> Result<Subspace> {
    let mut radical = l.zero_space();
    loop {
        let q = l.quotient(&radical)?;
        let n = nilradical_with(&q.algebra, budget, rng)?;
        if n.is_zero() {
            return Ok(radical);
        }
        radical = q.map.pull_back(&n);
    }
}

/// Minimal nonzero ideals.
pub fn minimal_ideals(
    l: &LieAlgebra,
    cfg: &SearchConfig,
    point_limit: usize,
) -> Result<Vec<Subspace>> {
    let mut rng = cfg.rng();
    let adj = generated_adjoint(l, &mut rng);
    minimal_submodules(&adj.module, cfg, point_limit)
}

#[derive(Clone, Debug)]
pub struct Constituent {
    pub algebra: LieAlgebra,
    /// Steps from the input algebra to this constituent.
    pub provenance: Vec<String>,
    pub witness: SimplicityWitness,
}

#[derive(Clone, Debug)]
pub struct ConstituentReport {
    pub dim: usize,
    pub perfect_core_dim: usize,
    pub radical_dim: usize,
    pub constituents: Vec<Constituent>,
}

impl ConstituentReport {
    pub fn constituent_dims(&self) -> Vec<usize> {
        self.constituents.iter().map(|c| c.algebra.dim()).collect()
    }
}

/// Simple constituents: the perfect core modulo its solvable radical,
/// split along minimal ideals until every piece is simple.
pub fn simple_constituents(l: &LieAlgebra, cfg: &SearchConfig) -> Result<ConstituentReport> {
    let mut rng = cfg.rng();
    let core_space = l.perfect_core();
    let core = l.restrict(&core_space)?;
    let radical = solvable_radical_with(&core, cfg.budget, &mut rng)?;
    let mut constituents = Vec::new();
    let q = core.quotient(&radical)?.algebra;
    let provenance = vec![
        format!("perfect core (dim {})", core.dim()),
        format!("modulo solvable radical (dim {})", radical.dim()),
    ];
    split_semisimple(&q, provenance, cfg.budget, &mut rng, &mut constituents)?;
    Ok(ConstituentReport {
        dim: l.dim(),
        perfect_core_dim: core.dim(),
        radical_dim: radical.dim(),
        constituents,
    })
}

fn constituents_of<R: Rng + ?Sized>(
    l: &LieAlgebra,
    mut provenance: Vec<String>,
    budget: usize,
    rng: &mut R,
    out: &mut Vec<Constituent>,
) -> Result<()> {
    let core_space = l.perfect_core();
    let core = l.restrict(&core_space)?;
    let radical = solvable_radical_with(&core, budget, rng)?;
    if core.dim() != l.dim() {
        provenance.push(format!("perfect core (dim {})", core.dim()));
    }
    if !radical.is_zero() {
        provenance.push(format!("modulo solvable radical (dim {})", radical.dim()));
    }
    let q = core.quotient(&radical)?.algebra;
    split_semisimple(&q, provenance, budget, rng, out)
}

/// `q` has zero solvable radical.
fn split_semisimple<R: Rng + ?Sized>(
    q: &LieAlgebra,
    provenance: Vec<String>,
    budget: usize,
    rng: &mut R,
    out: &mut Vec<Constituent>,
) -> Result<()> {
    if q.dim() == 0 {
        return Ok(());
    }
    let adj = generated_adjoint(q, rng);
    let mut ideal = match meataxe::chop(&adj.module, budget, rng) {
        ChopOutcome::Irreducible(certificate) => {
            out.push(Constituent {
                algebra: q.clone(),
                provenance,
                witness: SimplicityWitness {
                    generators: adj.generators,
                    certificate,
                },
            });
            return Ok(());
        }
        ChopOutcome::Reducible(s) => s,
        ChopOutcome::Unknown { trials } => {
            return Err(Error::BudgetExhausted(format!(
            "no verdict on the adjoint module of a {}-dimensional algebra after {trials} trials",
            q.dim()
        )))
        }
    };
    // Descend to a minimal ideal.
    loop {
        let inside = Subquotient::new(&q.zero_space(), &ideal);
        let m = adj.module.subquotient(&inside);
        match meataxe::chop(&m, budget, rng) {
            ChopOutcome::Reducible(s) => ideal = inside.pull_back(&s),
            ChopOutcome::Irreducible(_) => break,
            ChopOutcome::Unknown { trials } => {
                return Err(Error::BudgetExhausted(format!(
                    "no verdict on a {}-dimensional ideal after {trials} trials",
                    ideal.dim()
                )))
            }
        }
    }
    let mut below = provenance.clone();
    below.push(format!("minimal ideal (dim {})", ideal.dim()));
    constituents_of(&q.restrict(&ideal)?, below, budget, rng, out)?;
    let mut above = provenance;
    above.push(format!("modulo minimal ideal (dim {})", ideal.dim()));
    constituents_of(&q.quotient(&ideal)?.algebra, above, budget, rng, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Prime;

    fn sl2(p: Prime) -> LieAlgebra {
        let m2 = p.neg(2);
        LieAlgebra::from_entries(
            p,
            vec!["e".into(), "h".into(), "f".into()],
            [(0, 1, 0, m2), (0, 2, 1, 1), (1, 2, 2, m2)],
        )
        .unwrap()
    }

    /// Upper triangular 2x2 matrices: basis h = E11, z = E22, e = E12.
    fn borel(p: Prime) -> LieAlgebra {
        // [h, e] = e, [z, e] = -e
        LieAlgebra::from_entries(
            p,
            vec!["h".into(), "z".into(), "e".into()],
            [(0, 2, 2, 1), (1, 2, 2, p.neg(1))],
        )
        .unwrap()
    }

    #[test]
    fn sl2_is_simple_in_odd_characteristic() {
        for p in [3u8, 5, 7] {
            let l = sl2(Prime::new(p).unwrap());
            match is_simple(&l, &SearchConfig::default()) {
                SimplicityVerdict::Simple(w) => assert!(w.verify(&l)),
                other => panic!("p={p}: {other:?}"),
            }
        }
    }

    #[test]
    fn abelian_and_zero_are_not_simple() {
        let p = Prime::TWO;
        assert!(matches!(
            is_simple(&LieAlgebra::abelian(p, 0), &SearchConfig::default()),
            SimplicityVerdict::NotSimple(NotSimple::Zero)
        ));
        assert!(matches!(
            is_simple(&LieAlgebra::abelian(p, 1), &SearchConfig::default()),
            SimplicityVerdict::NotSimple(NotSimple::Abelian)
        ));
    }

    #[test]
    fn radicals_of_a_solvable_algebra() {
        let p = Prime::new(5).unwrap();
        let b = borel(p);
        let cfg = SearchConfig::default();
        assert_eq!(solvable_radical(&b, &cfg).unwrap().dim(), 3);
        // The nilradical is spanned by e and the centre h + z.
        let n = nilradical(&b, &cfg).unwrap();
        assert_eq!(n.dim(), 2);
        assert!(n.contains(&Vector::from_residues(p, &[0, 0, 1])));
        assert!(n.contains(&Vector::from_residues(p, &[1, 1, 0])));
        assert!(simple_constituents(&b, &cfg)
            .unwrap()
            .constituents
            .is_empty());
    }

    #[test]
    fn direct_sums() {
        let p = Prime::new(3).unwrap();
        let cfg = SearchConfig::default();
        let s = sl2(p);
        let sum = LieAlgebra::direct_sum(&s, &LieAlgebra::abelian(p, 2));
        assert_eq!(solvable_radical(&sum, &cfg).unwrap().dim(), 2);
        let r = simple_constituents(&sum, &cfg).unwrap();
        assert_eq!(r.perfect_core_dim, 3);
        assert_eq!(r.constituent_dims(), vec![3]);

        let two = LieAlgebra::direct_sum(&s, &s);
        assert!(matches!(
            is_simple(&two, &cfg),
            SimplicityVerdict::NotSimple(NotSimple::ProperIdeal(_))
        ));
        let r = simple_constituents(&two, &cfg).unwrap();
        assert_eq!(r.constituent_dims(), vec![3, 3]);
        assert_eq!(r.radical_dim, 0);
        let mins = minimal_ideals(&two, &cfg, DEFAULT_POINT_LIMIT).unwrap();
        assert_eq!(mins.len(), 2);
    }
}
