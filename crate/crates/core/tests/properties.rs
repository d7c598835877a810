use std::collections::HashSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cartan_core::cartan::{build, CartanFamily};
use cartan_core::{fingerprint, Matrix, Prime, Subspace, Vector};

fn gf2() -> Prime {
    Prime::new(2).unwrap()
}

/// Every vector in the span of `rows`, as bit codes.
fn span_codes(rows: &[Vector]) -> HashSet<u64> {
    let mut set = HashSet::from([0u64]);
    for r in rows {
        let c = r.encode();
        let shifted: Vec<u64> = set.iter().map(|x| x ^ c).collect();
        set.extend(shifted);
    }
    set
}

fn rows_from(bits: &[u64], cols: usize) -> Vec<Vector> {
    bits.iter()
        .map(|&b| Vector::decode(gf2(), cols, b & ((1 << cols) - 1)))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, ..ProptestConfig::default() })]

    #[test]
    fn rank_kernel_and_inverse_match_enumeration(
        cols in 1usize..=12,
        bits in proptest::collection::vec(any::<u64>(), 1..=12),
    ) {
        let rows = rows_from(&bits, cols);
        let m = Matrix::from_rows(gf2(), cols, rows.clone());
        let span = span_codes(&rows);
        prop_assert_eq!(1usize << m.rank(), span.len());

        let kernel: Vec<u64> = (0..1u64 << cols)
            .filter(|&x| m.mul_vec(&Vector::decode(gf2(), cols, x)).is_zero())
            .collect();
        let k = m.kernel();
        prop_assert_eq!(1usize << k.dim(), kernel.len());
        for v in k.basis() {
            prop_assert!(m.mul_vec(v).is_zero());
        }

        if m.nrows() == cols {
            match m.inverse() {
                Some(inv) => prop_assert_eq!(m.mul(&inv), Matrix::identity(gf2(), cols)),
                None => prop_assert!(kernel.len() > 1),
            }
        }
    }

    #[test]
    fn sum_and_intersection_match_enumeration(
        cols in 1usize..=12,
        a in proptest::collection::vec(any::<u64>(), 0..=8),
        b in proptest::collection::vec(any::<u64>(), 0..=8),
    ) {
        let (ra, rb) = (rows_from(&a, cols), rows_from(&b, cols));
        let sa = Subspace::span(gf2(), cols, ra.clone());
        let sb = Subspace::span(gf2(), cols, rb.clone());
        let (sum, meet) = sa.sum_and_intersection(&sb);
        let (ea, eb) = (span_codes(&ra), span_codes(&rb));
        let both: Vec<Vector> = ra.iter().chain(&rb).cloned().collect();
        prop_assert_eq!(1usize << sum.dim(), span_codes(&both).len());
        prop_assert_eq!(1usize << meet.dim(), ea.intersection(&eb).count());
        for v in meet.basis() {
            prop_assert!(ea.contains(&v.encode()) && eb.contains(&v.encode()));
        }
    }
}

fn residues(m: &Matrix) -> Vec<Vec<u8>> {
    m.rows().iter().map(Vector::to_residues).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    /// The word-parallel GF(2) kernels against the byte-per-entry ones,
    /// across word boundaries.
    #[test]
    fn packed_and_dense_elimination_agree(
        rows in 1usize..=40,
        cols in 1usize..=150,
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let packed = Matrix::random(gf2(), rows, cols, &mut rng);
        let dense = packed.to_dense();
        let (rp, rd) = (packed.rref(), dense.rref());
        prop_assert_eq!(rp.rank, rd.rank);
        prop_assert_eq!(&rp.pivots, &rd.pivots);
        prop_assert_eq!(residues(&rp.matrix), residues(&rd.matrix));
        prop_assert_eq!(packed.kernel().dim(), dense.kernel().dim());
        let other = Matrix::random(gf2(), cols, 1 + seed as usize % 20, &mut rng);
        prop_assert_eq!(
            residues(&packed.mul(&other)),
            residues(&dense.mul(&other.to_dense()))
        );
    }
}

fn instances() -> Vec<(&'static str, bool)> {
    vec![
        ("W(1,(2))", true),
        ("W(1,(3))", true),
        ("W(1,(4))", true),
        ("W(2,(1,1))", false),
        ("S(2,(1,2))", true),
        ("S(2,(2,2))", true),
        ("H(2,(1,3))", false),
        ("H(2,(2,2))", false),
        ("H(4,(1,1,1,1))", false),
        ("K(3,(1,2,1))", false),
    ]
}

#[test]
fn fingerprints_survive_basis_changes() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for (spec, derive) in instances() {
        let family: CartanFamily = spec.parse().unwrap();
        let mut a = build(&family).unwrap();
        if derive {
            a = a.derived().unwrap();
        }
        let l = a.algebra();
        assert!(l.dim() <= 16, "{spec}");
        let f = fingerprint(l);
        for _ in 0..10 {
            let m = loop {
                let m = Matrix::random(gf2(), l.dim(), l.dim(), &mut rng);
                if m.is_invertible() {
                    break m;
                }
            };
            let moved = l.change_basis(&m).unwrap();
            assert!(moved.validate().is_valid());
            assert_eq!(fingerprint(&moved), f, "{spec}");
        }
    }
}
