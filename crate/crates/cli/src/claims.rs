//! Verification suites: each instance is a list of checks whose status is
//! pass, unknown (budget ran out) or contradiction (an instance of the
//! claim is false).

use std::fmt;

use cartan_core::cartan::{build, CartanAlgebra, CartanFamily, FamilyKind, SpecialBasis};
use cartan_core::isomorphism::{certify, phi_special_witt, IsoCertificate, IsoOutcome};
use cartan_core::structure::{is_simple, solvable_radical, NotSimple, SimplicityVerdict};
use cartan_core::{
    verify_certificate, AlgebraDescriptor, LieAlgebra, Matrix, Prime, SearchConfig, Vector,
};

use crate::report::{Format, Grid};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Pass,
    Unknown,
    Contradiction,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Contradiction => 1,
            Status::Unknown => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Unknown => "unknown",
            Status::Contradiction => "CONTRADICTION",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Suite {
    Witt,
    Special,
    Hamilton,
    Conjecture1,
    Conjecture2,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Witt => "witt",
            Suite::Special => "special",
            Suite::Hamilton => "hamilton",
            Suite::Conjecture1 => "conjecture1",
            Suite::Conjecture2 => "conjecture2",
        }
    }
}

/// Instance parameters; absent ones select the suite's default instances.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClaimParams {
    pub l: Option<u32>,
    pub n: Option<usize>,
    pub m: Option<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub claim: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct ClaimReport {
    pub suite: Suite,
    pub instance: String,
    pub checks: Vec<Check>,
    /// Isomorphisms found along the way.
    pub certificates: Vec<IsoCertificate>,
}

impl ClaimReport {
    fn new(suite: Suite, instance: impl Into<String>) -> Self {
        ClaimReport {
            suite,
            instance: instance.into(),
            checks: Vec::new(),
            certificates: Vec::new(),
        }
    }

    fn check(&mut self, claim: impl Into<String>, status: Status, detail: impl Into<String>) {
        self.checks.push(Check {
            claim: claim.into(),
            status,
            detail: detail.into(),
        });
    }

    fn expect(&mut self, claim: impl Into<String>, holds: bool, detail: impl Into<String>) {
        let status = if holds {
            Status::Pass
        } else {
            Status::Contradiction
        };
        self.check(claim, status, detail);
    }

    pub fn status(&self) -> Status {
        self.checks
            .iter()
            .map(|c| c.status)
            .max()
            .unwrap_or(Status::Pass)
    }

    /// Every check that did not pass, as one line each.
    pub fn failures(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| c.status != Status::Pass)
            .map(|c| format!("{} {}: {} ({})", self.instance, c.status, c.claim, c.detail))
            .collect()
    }
}

pub fn overall(reports: &[ClaimReport]) -> Status {
    reports
        .iter()
        .map(ClaimReport::status)
        .max()
        .unwrap_or(Status::Pass)
}

pub fn render_reports(reports: &[ClaimReport], format: Format) -> String {
    let mut grid = Grid::new(&["suite", "instance", "claim", "status", "detail"]);
    for r in reports {
        for c in &r.checks {
            grid.push(vec![
                r.suite.name().to_string(),
                r.instance.clone(),
                c.claim.clone(),
                c.status.to_string(),
                c.detail.clone(),
            ]);
        }
    }
    grid.render(format, "Claim verification")
}

/// Default instances per suite, as `(n, m)`.
fn default_instances(suite: Suite) -> Vec<Vec<u32>> {
    match suite {
        Suite::Witt => vec![vec![2], vec![3], vec![4], vec![5]],
        Suite::Special => vec![vec![2, 2], vec![2, 3], vec![3, 2], vec![1, 2], vec![1, 3]],
        Suite::Hamilton => vec![
            vec![1, 1, 1, 1],
            vec![2, 1, 1, 1],
            vec![2, 2],
            vec![1, 2],
            vec![2, 3],
        ],
        Suite::Conjecture1 => vec![vec![1, 1, 1], vec![2, 1, 1]],
        Suite::Conjecture2 => vec![vec![1, 1, 1], vec![1, 2, 1], vec![1, 2, 2]],
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn instances(suite: Suite, params: &ClaimParams) -> Result<Vec<Vec<u32>>, CliError> {
    let m = match (suite, params.l, &params.m) {
        (_, Some(_), Some(_)) => return Err(usage("give either --l or --m, not both")),
        (Suite::Witt, Some(l), None) => Some(vec![l]),
        (_, Some(_), None) => return Err(usage("--l applies to the witt suite only")),
        (_, None, m) => m.clone(),
    };
    let Some(m) = m else {
        if params.n.is_some() {
            return Err(usage("--n needs --m"));
        }
        return Ok(default_instances(suite));
    };
    if let Some(n) = params.n {
        if n != m.len() {
            return Err(usage(format!("--n {n} but --m has {} entries", m.len())));
        }
    }
    if m.contains(&0) {
        return Err(usage("entries of --m must be positive"));
    }
    let arity_ok = match suite {
        Suite::Witt => m.len() == 1,
        Suite::Special => m.len() == 2,
        Suite::Hamilton => m.len() >= 2 && m.len() % 2 == 0,
        Suite::Conjecture1 => m.len() == 3,
        Suite::Conjecture2 => m.len() >= 3 && m.len() % 2 == 1,
    };
    if !arity_ok {
        return Err(usage(format!(
            "suite {} does not take {} parameters",
            suite.name(),
            m.len()
        )));
    }
    Ok(vec![m])
}

/// Runs `suite` on the requested instances (or its defaults).
pub fn verify_claims(
    suite: Suite,
    params: &ClaimParams,
    cfg: &SearchConfig,
) -> Result<Vec<ClaimReport>, CliError> {
    instances(suite, params)?
        .into_iter()
        .map(|m| match suite {
            Suite::Witt => witt(m[0], cfg),
            Suite::Special => special(m[0], m[1], cfg),
            Suite::Hamilton => hamilton(&m, cfg),
            Suite::Conjecture1 => conjecture1(&m, cfg),
            Suite::Conjecture2 => conjecture2(&m, cfg),
        })
        .collect()
}

fn family(kind: FamilyKind, m: &[u32]) -> Result<CartanFamily, CliError> {
    CartanFamily::new(kind, m, Prime::TWO).map_err(|e| usage(e.to_string()))
}

fn construct(kind: FamilyKind, m: &[u32], derived: bool) -> Result<CartanAlgebra, CliError> {
    let a = build(&family(kind, m)?).map_err(|e| usage(e.to_string()))?;
    if derived {
        a.derived().map_err(|e| usage(e.to_string()))
    } else {
        Ok(a)
    }
}

fn internal(e: cartan_core::Error) -> CliError {
    CliError::Internal(e.to_string())
}

/// Status and detail of a simplicity claim, re-verifying any witness.
fn simplicity(l: &LieAlgebra, cfg: &SearchConfig) -> (Status, String) {
    match is_simple(l, cfg) {
        SimplicityVerdict::Simple(w) if w.verify(l) => (
            Status::Pass,
            format!(
                "adjoint module irreducible ({} generators, certificate verified)",
                w.generators.len()
            ),
        ),
        SimplicityVerdict::Simple(_) => (Status::Unknown, "witness failed re-verification".into()),
        SimplicityVerdict::NotSimple(NotSimple::Zero) => {
            (Status::Contradiction, "the algebra is zero".into())
        }
        SimplicityVerdict::NotSimple(NotSimple::Abelian) => (
            Status::Contradiction,
            format!("the algebra is abelian of dimension {}", l.dim()),
        ),
        SimplicityVerdict::NotSimple(NotSimple::ProperIdeal(i)) => (
            Status::Contradiction,
            format!("proper ideal of dimension {} found", i.dim()),
        ),
        SimplicityVerdict::Unknown { trials } => (
            Status::Unknown,
            format!("no verdict within {trials} trials"),
        ),
    }
}

/// Status and detail of an isomorphism claim.
fn isomorphism_check(
    report: &mut ClaimReport,
    claim: String,
    source: (&LieAlgebra, AlgebraDescriptor),
    target: (&LieAlgebra, AlgebraDescriptor),
    cfg: &SearchConfig,
) {
    let (search, cert) = certify(source.0, target.0, source.1, target.1, cfg);
    let method = format!("{:?}", search.method).to_lowercase();
    let (status, detail) = match &search.outcome {
        IsoOutcome::Found(m) => {
            let verdict = verify_certificate(source.0, target.0, m);
            if verdict.is_accepted() {
                (
                    Status::Pass,
                    format!("certificate found by {method} search and verified"),
                )
            } else {
                (
                    Status::Unknown,
                    format!("search returned a matrix that was {verdict}"),
                )
            }
        }
        IsoOutcome::Absent(why) => (
            Status::Contradiction,
            format!("no isomorphism exists: {why}"),
        ),
        IsoOutcome::Unknown(why) => (Status::Unknown, format!("{method} search undecided: {why}")),
    };
    report.check(claim, status, detail);
    report.certificates.extend(cert);
}

fn witt(l: u32, cfg: &SearchConfig) -> Result<ClaimReport, CliError> {
    if l < 2 {
        return Err(usage("the witt suite needs l >= 2"));
    }
    let w = construct(FamilyKind::W, &[l], false)?;
    let wd = w.derived().map_err(internal)?;
    let mut r = ClaimReport::new(Suite::Witt, wd.name());
    r.expect(
        "dim W' = dim W - 1",
        wd.dim() + 1 == w.dim(),
        format!("dim W = {}, dim W' = {}", w.dim(), wd.dim()),
    );
    let (status, detail) = simplicity(wd.algebra(), cfg);
    r.check("W' is simple", status, detail);
    Ok(r)
}

fn special(m1: u32, m2: u32, cfg: &SearchConfig) -> Result<ClaimReport, CliError> {
    let s = construct(FamilyKind::S, &[m1, m2], false)?;
    let sd = s.derived().map_err(internal)?;
    let mut r = ClaimReport::new(Suite::Special, sd.name());
    if m1 > 1 && m2 > 1 {
        r.expect(
            "dim S' = dim S - 1",
            sd.dim() + 1 == s.dim(),
            format!("dim S = {}, dim S' = {}", s.dim(), sd.dim()),
        );
        let w = SpecialBasis::Z((1 << m1) - 2, (1 << m2) - 2);
        let v = w.element(s.shape()).to_vector();
        let (in_s, in_sd) = (s.subspace().contains(&v), sd.subspace().contains(&v));
        r.expect(
            format!("{w} lies in S but not in S'"),
            in_s && !in_sd,
            format!("in S: {in_s}, in S': {in_sd}"),
        );
        let (status, detail) = simplicity(sd.algebra(), cfg);
        r.check("S' is simple", status, detail);
    } else if m1 == 1 && m2 > 1 {
        special_quotient(&mut r, &sd, m2, cfg)?;
    } else {
        return Err(usage(format!(
            "special: m = ({m1},{m2}) is covered by neither part; use m1, m2 > 1 or m1 = 1 < m2"
        )));
    }
    Ok(r)
}

fn special_quotient(
    r: &mut ClaimReport,
    sd: &CartanAlgebra,
    m2: u32,
    cfg: &SearchConfig,
) -> Result<(), CliError> {
    let phi = phi_special_witt(m2, Prime::TWO).map_err(internal)?;
    let tau = (1usize << m2) - 1;
    let violation = phi.first_bracket_violation();
    r.expect(
        "phi is a homomorphism",
        violation.is_none(),
        match violation {
            None => "brackets preserved on every basis pair".to_string(),
            Some((i, j)) => format!("bracket of basis pair ({i}, {j}) not preserved"),
        },
    );
    r.expect(
        "phi is surjective",
        phi.is_surjective(),
        format!("rank {} onto dim {}", phi.matrix.rank(), phi.target.dim()),
    );
    let radical = solvable_radical(phi.source.algebra(), cfg).map_err(internal)?;
    r.expect(
        "ker phi is the solvable radical",
        phi.kernel == radical && radical.dim() == tau,
        format!(
            "dim ker = {}, dim radical = {}, 2^m2 - 1 = {tau}",
            phi.kernel.dim(),
            radical.dim()
        ),
    );
    let q = phi.source.algebra().quotient(&radical).map_err(internal)?;
    let n = q.algebra.dim();
    let cols: Vec<Vector> = (0..n)
        .map(|i| phi.apply(&q.map.lift(&Vector::unit(Prime::TWO, n, i))))
        .collect();
    let induced = Matrix::from_columns(Prime::TWO, phi.target.dim(), &cols);
    let verdict = verify_certificate(&q.algebra, phi.target.algebra(), &induced);
    r.expect(
        "phi induces S'/N = W(1,(m2))'",
        verdict.is_accepted(),
        format!("induced map {verdict}"),
    );
    let wd = construct(FamilyKind::W, &[m2], true)?;
    isomorphism_check(
        r,
        format!("search finds S'/N = {}", wd.name()),
        (
            &q.algebra,
            AlgebraDescriptor::Label(format!("{}/N", sd.name())),
        ),
        (wd.algebra(), family_descriptor(&wd)),
        cfg,
    );
    Ok(())
}

fn family_descriptor(a: &CartanAlgebra) -> AlgebraDescriptor {
    AlgebraDescriptor::Family {
        family: a.family().clone(),
        derived: a.name().chars().filter(|&c| c == '\'').count() as u32,
    }
}

fn hamilton(m: &[u32], cfg: &SearchConfig) -> Result<ClaimReport, CliError> {
    let h = construct(FamilyKind::H, m, false)?;
    let mut r = ClaimReport::new(Suite::Hamilton, h.name());
    if m.len() > 2 {
        let expected = (1usize << m.iter().sum::<u32>()) - 2;
        r.expect(
            "dim H = 2^(m1+...+mn) - 2",
            h.dim() == expected,
            format!("dim H = {}, formula {expected}", h.dim()),
        );
        let (status, detail) = simplicity(h.algebra(), cfg);
        r.check("H is simple", status, detail);
    } else {
        let sd = construct(FamilyKind::S, m, true)?;
        r.expect(
            format!("H = {} inside W", sd.name()),
            h.subspace() == sd.subspace(),
            format!("dim H = {}, dim S' = {}", h.dim(), sd.dim()),
        );
    }
    Ok(r)
}

fn conjecture1(m: &[u32], cfg: &SearchConfig) -> Result<ClaimReport, CliError> {
    let hm = [m[0], m[1], m[2], 1];
    let h = construct(FamilyKind::H, &hm, false)?;
    let s = construct(FamilyKind::S, m, false)?;
    let mut r = ClaimReport::new(Suite::Conjecture1, format!("{} vs {}", h.name(), s.name()));
    isomorphism_check(
        &mut r,
        format!("{} = {}", h.name(), s.name()),
        (h.algebra(), family_descriptor(&h)),
        (s.algebra(), family_descriptor(&s)),
        cfg,
    );
    Ok(r)
}

fn conjecture2(m: &[u32], cfg: &SearchConfig) -> Result<ClaimReport, CliError> {
    let n = m.len();
    let k = construct(FamilyKind::K, m, false)?;
    let kd = k.derived().map_err(internal)?;
    let mut r = ClaimReport::new(Suite::Conjecture2, kd.name());
    let rad = solvable_radical(kd.algebra(), cfg).map_err(internal)?;
    let q = kd.algebra().quotient(&rad).map_err(internal)?.algebra;
    let sizes = format!(
        "dim K = {}, dim K' = {}, dim N(K') = {}, dim K'/N(K') = {}",
        k.dim(),
        kd.dim(),
        rad.dim(),
        q.dim()
    );
    if q.dim() == 0 {
        r.check(
            "K'/N(K') is simple",
            Status::Contradiction,
            format!("{sizes}: the quotient is zero"),
        );
    } else {
        let (status, detail) = simplicity(&q, cfg);
        r.check("K'/N(K') is simple", status, format!("{sizes}; {detail}"));
    }

    let h = construct(FamilyKind::H, &m[..n - 1], false)?;
    let hrad = solvable_radical(h.algebra(), cfg).map_err(internal)?;
    let hq = h.algebra().quotient(&hrad).map_err(internal)?.algebra;
    let quotient_label = format!("{}/N", kd.name());
    isomorphism_check(
        &mut r,
        format!("K'/N(K') = {}/N (dim {})", h.name(), hq.dim()),
        (&q, AlgebraDescriptor::Label(quotient_label.clone())),
        (&hq, AlgebraDescriptor::Label(format!("{}/N", h.name()))),
        cfg,
    );
    if n == 3 && m[0] == 1 {
        let wd = construct(FamilyKind::W, &[m[1]], true)?;
        isomorphism_check(
            &mut r,
            format!("K'/N(K') = {} (dim {})", wd.name(), wd.dim()),
            (&q, AlgebraDescriptor::Label(quotient_label)),
            (wd.algebra(), family_descriptor(&wd)),
            cfg,
        );
    }
    Ok(r)
}
