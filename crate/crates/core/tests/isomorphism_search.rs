use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cartan_core::cartan::{build, CartanAlgebra, CartanFamily, SpecialBasis};
use cartan_core::divided_power::MultiIndex;
use cartan_core::isomorphism::{
    find_isomorphism, fingerprint, killing_form, phi_special_witt, verify_certificate,
    CertificateVerdict, IsoOutcome, SearchMethod,
};
use cartan_core::structure::solvable_radical;
use cartan_core::{LieAlgebra, Matrix, Prime, SearchConfig, Vector};

fn gf2() -> Prime {
    Prime::new(2).unwrap()
}

fn algebra(spec: &str) -> CartanAlgebra {
    let derived = spec.ends_with('\'');
    let family: CartanFamily = spec.trim_end_matches('\'').parse().unwrap();
    let a = build(&family).unwrap();
    if derived {
        a.derived().unwrap()
    } else {
        a
    }
}

fn random_invertible(p: Prime, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    loop {
        let m = Matrix::random(p, n, n, rng);
        if m.is_invertible() {
            return m;
        }
    }
}

fn expect_found(l1: &LieAlgebra, l2: &LieAlgebra, cfg: &SearchConfig) -> Matrix {
    let s = find_isomorphism(l1, l2, cfg);
    match s.outcome {
        IsoOutcome::Found(m) => {
            assert_eq!(verify_certificate(l1, l2, &m), CertificateVerdict::Accepted);
            m
        }
        other => panic!("expected an isomorphism, got {other:?}"),
    }
}

#[test]
fn identity_on_witt_derived() {
    let a = algebra("W(1,(2))'");
    let id = Matrix::identity(gf2(), 3);
    assert!(verify_certificate(a.algebra(), a.algebra(), &id).is_accepted());
    expect_found(a.algebra(), a.algebra(), &SearchConfig::default());
}

#[test]
fn singular_matrix_is_rejected() {
    let a = algebra("W(1,(2))'");
    let z = Matrix::zeros(gf2(), 3, 3);
    assert_eq!(
        verify_certificate(a.algebra(), a.algebra(), &z),
        CertificateVerdict::NotInvertible
    );
    let wrong = Matrix::identity(gf2(), 2);
    assert!(matches!(
        verify_certificate(a.algebra(), a.algebra(), &wrong),
        CertificateVerdict::DimensionMismatch { .. }
    ));
}

#[test]
fn rejection_names_the_first_bad_pair() {
    let a = algebra("W(1,(2))'");
    // Swapping two basis vectors of a non-symmetric algebra breaks a bracket.
    let p = gf2();
    let swap = Matrix::from_residues(p, 3, &[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]);
    match verify_certificate(a.algebra(), a.algebra(), &swap) {
        CertificateVerdict::BracketMismatch { i, j } => assert!(i < j),
        v => panic!("expected a bracket mismatch, got {v:?}"),
    }
}

#[test]
fn coordinate_swap_between_witt_algebras() {
    let a = algebra("W(2,(1,2))");
    let b = algebra("W(2,(2,1))");
    let p = gf2();
    let n = a.dim();
    // X^(a1,a2) D_j  ->  X^(a2,a1) D_{3-j}
    let mut cols = Vec::with_capacity(n);
    for i in 0..n {
        let d = a.to_derivation(&a.algebra().unit(i));
        let (exps, j) = d
            .components()
            .iter()
            .enumerate()
            .find_map(|(j, f)| f.terms().next().map(|(m, _)| (m.clone(), j)))
            .expect("basis vectors are monomials");
        let swapped = MultiIndex::new(vec![exps.as_slice()[1], exps.as_slice()[0]]);
        let image = cartan_core::cartan::DerivationElement::monomial(b.shape(), swapped, 1 - j);
        cols.push(b.from_derivation(&image).unwrap());
    }
    let m = Matrix::from_columns(p, n, &cols);
    assert!(verify_certificate(a.algebra(), b.algebra(), &m).is_accepted());
    expect_found(a.algebra(), b.algebra(), &SearchConfig::default());
}

#[test]
fn fingerprints_separate_witt_from_solvable_special() {
    let w = algebra("W(1,(2))'");
    let s = algebra("S(2,(1,1))");
    assert_eq!(w.dim(), s.dim());
    let (fw, fs) = (fingerprint(w.algebra()), fingerprint(s.algebra()));
    assert_eq!(fw.derived_dims, vec![3]);
    assert_eq!(
        *fs.derived_dims.last().unwrap(),
        fs.derived_dims.iter().copied().min().unwrap()
    );
    assert_ne!(fw, fs);
    let search = find_isomorphism(w.algebra(), s.algebra(), &SearchConfig::default());
    assert!(matches!(search.outcome, IsoOutcome::Absent(_)));
    assert_eq!(search.method, SearchMethod::Invariants);
}

#[test]
fn abelian_killing_rank_is_zero() {
    let a = LieAlgebra::abelian(gf2(), 5);
    assert_eq!(fingerprint(&a).killing_rank, 0);
    assert!(killing_form(&a).is_zero());
}

#[test]
fn random_basis_changes_round_trip() {
    let specs = [
        "W(1,(2))'",
        "W(1,(3))'",
        "W(1,(4))'",
        "W(2,(1,1))",
        "S(2,(1,2))'",
        "S(2,(2,2))'",
        "H(2,(1,3))",
        "H(4,(1,1,1,1))",
        "K(3,(1,2,1))",
        "W(2,(1,2))",
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (t, spec) in specs.iter().enumerate() {
        let a = algebra(spec);
        assert!(a.dim() <= 16);
        let m = random_invertible(gf2(), a.dim(), &mut rng);
        let b = a.algebra().change_basis(&m).unwrap();
        assert_eq!(fingerprint(a.algebra()), fingerprint(&b), "{spec}");
        let cfg = SearchConfig::with_seed(t as u64);
        expect_found(a.algebra(), &b, &cfg);
        expect_found(&b, a.algebra(), &cfg);
    }
}

#[test]
fn random_matrices_fail_between_different_fingerprints() {
    // Both of dimension 7: a simple algebra against a sum of two copies
    // of W(1,(2))' and a line.
    let simple = algebra("W(1,(3))'");
    let small = algebra("W(1,(2))'");
    let sum = LieAlgebra::direct_sum(
        &LieAlgebra::direct_sum(small.algebra(), small.algebra()),
        &LieAlgebra::abelian(gf2(), 1),
    );
    assert_eq!((simple.dim(), sum.dim()), (7, 7));
    assert_ne!(fingerprint(simple.algebra()), fingerprint(&sum));
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let m = random_invertible(gf2(), 7, &mut rng);
        assert!(!verify_certificate(simple.algebra(), &sum, &m).is_accepted());
    }
}

#[test]
fn hamiltonian_equals_special_derived_up_to_isomorphism() {
    let h = algebra("H(2,(2,2))");
    let s = algebra("S(2,(2,2))'");
    expect_found(h.algebra(), s.algebra(), &SearchConfig::default());
}

#[test]
fn hamiltonian_and_special_of_dimension_fourteen() {
    let h = algebra("H(4,(1,1,1,1))");
    let s = algebra("S(3,(1,1,1))");
    let search = find_isomorphism(h.algebra(), s.algebra(), &SearchConfig::default());
    assert_eq!(search.method, SearchMethod::Enumeration);
    let IsoOutcome::Found(m) = search.outcome else {
        panic!("expected a certificate");
    };
    assert!(verify_certificate(h.algebra(), s.algebra(), &m).is_accepted());
}

#[test]
fn non_isomorphic_pairs_are_reported_absent() {
    for (x, y) in [("W(1,(3))'", "S(2,(2,2))'"), ("W(1,(3))'", "H(2,(1,3))")] {
        let (a, b) = (algebra(x), algebra(y));
        let s = find_isomorphism(a.algebra(), b.algebra(), &SearchConfig::default());
        assert!(
            matches!(s.outcome, IsoOutcome::Absent(_)),
            "{x} vs {y}: {:?}",
            s.outcome
        );
    }
}

#[test]
fn restarts_keep_the_search_reproducible() {
    let a = algebra("K(3,(1,2,1))");
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let m = random_invertible(gf2(), a.dim(), &mut rng);
    let b = a.algebra().change_basis(&m).unwrap();
    let cfg = SearchConfig::with_seed(4);
    let first = find_isomorphism(a.algebra(), &b, &cfg);
    let second = find_isomorphism(a.algebra(), &b, &cfg);
    assert!(first.is_found());
    assert_eq!(first.checks, second.checks);
    assert_eq!(first.outcome, second.outcome);
}

#[test]
fn special_to_witt_map() {
    for m2 in [2u32, 3] {
        let phi = phi_special_witt(m2, gf2()).unwrap();
        let tau = (1usize << m2) - 1;
        assert_eq!(phi.first_bracket_violation(), None, "m2 = {m2}");
        assert!(phi.is_surjective());
        assert_eq!(phi.kernel.dim(), tau);
        assert_eq!(phi.target.dim(), tau);
        let radical = solvable_radical(phi.source.algebra(), &SearchConfig::default()).unwrap();
        assert_eq!(phi.kernel, radical);

        // [y_0, x_1] = x_0 maps to [a_0, 0] = 0.
        let shape = phi.source.shape();
        let coords = |b: SpecialBasis| phi.source.from_derivation(&b.element(shape)).unwrap();
        let y0 = coords(SpecialBasis::Y(0));
        let x1 = coords(SpecialBasis::X(1));
        let br = phi.source.algebra().bracket(&y0, &x1);
        assert_eq!(br, coords(SpecialBasis::X(0)));
        assert!(phi.apply(&br).is_zero());

        // The induced map on S'/N is an isomorphism onto W(1,(m2))'.
        let q = phi.source.algebra().quotient(&phi.kernel).unwrap();
        let n = q.algebra.dim();
        let cols: Vec<Vector> = (0..n)
            .map(|i| phi.apply(&q.map.lift(&Vector::unit(gf2(), n, i))))
            .collect();
        let induced = Matrix::from_columns(gf2(), phi.target.dim(), &cols);
        assert!(verify_certificate(&q.algebra, phi.target.algebra(), &induced).is_accepted());
        expect_found(&q.algebra, phi.target.algebra(), &SearchConfig::default());
    }
}

#[test]
fn special_to_witt_map_rejects_bad_parameters() {
    assert!(phi_special_witt(1, gf2()).is_err());
    assert!(phi_special_witt(2, Prime::new(3).unwrap()).is_err());
}
