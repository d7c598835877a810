use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cartan_core::cartan::{build, witt1_element, CartanAlgebra, CartanFamily, SpecialBasis};
use cartan_core::structure::{
    is_simple, minimal_ideals, nilradical, simple_constituents, solvable_radical, NotSimple,
    SimplicityVerdict, DEFAULT_POINT_LIMIT,
};
use cartan_core::{LieAlgebra, SearchConfig, Subspace, Vector};

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

/// Spins random nonzero elements to ideals; each must be everything.
fn spins_confirm_simple(l: &LieAlgebra, seed: u64, spins: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    while done < spins {
        let v = Vector::random(l.prime(), l.dim(), &mut rng);
        if v.is_zero() {
            continue;
        }
        assert!(
            l.ideal_closure([v]).is_full(),
            "a nonzero element spun to a proper ideal"
        );
        done += 1;
    }
}

fn assert_simple(spec: &str) {
    let a = algebra(spec);
    let cfg = SearchConfig::default();
    match is_simple(a.algebra(), &cfg) {
        SimplicityVerdict::Simple(w) => assert!(w.verify(a.algebra()), "{spec}: witness"),
        other => panic!("{spec}: expected simple, got {other:?}"),
    }
    spins_confirm_simple(a.algebra(), 7, 20);
}

#[test]
fn one_variable_witt_derived_is_simple() {
    for l in 2..=5 {
        let spec = format!("W(1,({l}))'");
        assert_simple(&spec);
        assert_eq!(algebra(&spec).dim(), (1 << l) - 1);
    }
}

#[test]
fn special_derived_is_simple_without_ones() {
    for spec in ["S(2,(2,2))'", "S(2,(2,3))'", "S(2,(3,2))'", "S(3,(1,1,1))"] {
        assert_simple(spec);
    }
}

#[test]
fn hamiltonian_in_four_variables_is_simple() {
    assert_simple("H(4,(1,1,1,1))");
    assert_simple("H(4,(2,1,1,1))");
}

#[test]
fn witt_in_several_variables_is_simple() {
    for spec in ["W(2,(1,1))", "W(2,(1,2))", "W(3,(1,1,1))"] {
        assert_simple(spec);
    }
}

#[test]
fn one_variable_witt_is_not_simple() {
    // The derived algebra is a proper ideal.
    let a = algebra("W(1,(3))");
    match is_simple(a.algebra(), &SearchConfig::default()) {
        SimplicityVerdict::NotSimple(NotSimple::ProperIdeal(i)) => {
            assert!(a.algebra().is_ideal(&i));
            assert!(!i.is_zero() && !i.is_full());
        }
        other => panic!("expected a proper ideal, got {other:?}"),
    }
}

#[test]
fn solvable_special_algebra() {
    let a = algebra("S(2,(1,1))");
    assert!(a.algebra().is_solvable());
    let r = solvable_radical(a.algebra(), &SearchConfig::default()).unwrap();
    assert!(r.is_full());
}

fn check_radical(l: &LieAlgebra, r: &Subspace) {
    assert!(l.is_ideal(r), "radical is an ideal");
    let ra = l.restrict(r).unwrap();
    assert!(ra.is_solvable(), "radical is solvable");
    let q = l.quotient(r).unwrap().algebra;
    let cfg = SearchConfig::with_seed(3);
    let rq = solvable_radical(&q, &cfg).unwrap();
    assert!(rq.is_zero(), "quotient by the radical is semisimple");
}

#[test]
fn special_with_a_one_has_witt_sized_radical() {
    let cfg = SearchConfig::default();
    for m2 in [2u32, 3] {
        let a = algebra(&format!("S(2,(1,{m2}))'"));
        let tau = (1usize << m2) - 1;
        assert_eq!(a.dim(), 2 * tau);
        let r = solvable_radical(a.algebra(), &cfg).unwrap();
        assert_eq!(r.dim(), tau, "m2 = {m2}");
        check_radical(a.algebra(), &r);
        // The radical is spanned by the x_j.
        for j in 0..tau as u32 {
            let x = a
                .from_derivation(&SpecialBasis::X(j).element(a.shape()))
                .unwrap();
            assert!(r.contains(&x), "x_{j} in the radical");
        }
        let report = simple_constituents(a.algebra(), &cfg).unwrap();
        assert_eq!(report.constituent_dims(), vec![tau]);
    }
}

#[test]
fn radical_invariants_on_mixed_instances() {
    let cfg = SearchConfig::default();
    for spec in ["H(2,(1,2))", "K(3,(1,2,1))", "W(1,(3))", "S(2,(1,2))"] {
        let a = algebra(spec);
        let r = solvable_radical(a.algebra(), &cfg).unwrap();
        check_radical(a.algebra(), &r);
        let n = nilradical(a.algebra(), &cfg).unwrap();
        assert!(a.algebra().is_ideal(&n));
        assert!(r.contains_subspace(&n), "{spec}: nilradical inside radical");
        // Nilpotent: the lower central series of N reaches zero.
        let na = a.algebra().restrict(&n).unwrap();
        let lcs = na.series(cartan_core::SeriesKind::LowerCentral, &na.full_space());
        assert!(lcs.last().unwrap().is_zero() || na.dim() == 0, "{spec}");
    }
}

#[test]
fn constituents_are_simple_and_idempotent() {
    let cfg = SearchConfig::default();
    for spec in ["S(2,(1,2))'", "K(3,(1,2,1))", "H(2,(1,3))"] {
        let a = algebra(spec);
        let report = simple_constituents(a.algebra(), &cfg).unwrap();
        assert!(!report.constituents.is_empty(), "{spec}");
        for c in &report.constituents {
            assert!(c.witness.verify(&c.algebra), "{spec}: constituent witness");
            let again = simple_constituents(&c.algebra, &cfg).unwrap();
            assert_eq!(again.radical_dim, 0);
            assert_eq!(again.constituent_dims(), vec![c.algebra.dim()]);
        }
    }
}

#[test]
fn contact_constituents() {
    let cfg = SearchConfig::default();
    let expected = [
        ("K(3,(1,2,1))", vec![3]),
        ("K(3,(1,2,2))", vec![3]),
        ("K(3,(2,2,2))", vec![14]),
    ];
    for (spec, dims) in expected {
        let a = algebra(spec);
        let report = simple_constituents(a.algebra(), &cfg).unwrap();
        assert_eq!(report.constituent_dims(), dims, "{spec}");
    }
    // The smallest contact algebra collapses.
    let a = algebra("K(3,(1,1,1))");
    assert!(a.algebra().is_abelian());
    let report = simple_constituents(a.algebra(), &cfg).unwrap();
    assert_eq!(report.perfect_core_dim, 0);
    assert!(report.constituents.is_empty());
}

#[test]
fn adjoint_lowering_in_one_variable_witt() {
    // ad a_0 = [D, -] lowers a_i to a_{i-1}.
    let a = algebra("W(1,(2))'");
    let shape = a.shape();
    let coords = |i| a.from_derivation(&witt1_element(shape, i)).unwrap();
    let ad0 = a.algebra().ad(&coords(0));
    assert_eq!(
        ad0.mul_vec(&coords(0)),
        Vector::zeros(a.algebra().prime(), 3)
    );
    for i in 1..3 {
        assert_eq!(ad0.mul_vec(&coords(i)), coords(i - 1), "a_{i}");
    }
}

#[test]
fn minimal_ideals_of_special_with_a_one() {
    let a = algebra("S(2,(1,2))'");
    let ideals =
        minimal_ideals(a.algebra(), &SearchConfig::default(), DEFAULT_POINT_LIMIT).unwrap();
    let shape = a.shape();
    let xs: Vec<Vector> = (0..3)
        .map(|j| {
            a.from_derivation(&SpecialBasis::X(j).element(shape))
                .unwrap()
        })
        .collect();
    let x_span = Subspace::span(a.algebra().prime(), a.dim(), xs.clone());
    assert!(!ideals.is_empty());
    for i in &ideals {
        assert!(a.algebra().is_ideal(i));
        assert!(
            x_span.contains_subspace(i),
            "minimal ideals lie in the kernel of the Witt map"
        );
    }
    // The x_j span an abelian ideal.
    assert!(a.algebra().is_ideal(&x_span));
    assert!(a.algebra().restrict(&x_span).unwrap().is_abelian());
    let closure = a.algebra().ideal_closure([xs[0].clone()]);
    assert!(x_span.contains_subspace(&closure));
}
