use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cartan_core::structure::is_simple;
use cartan_core::{build, find_isomorphism, CartanFamily, LieAlgebra, Matrix, Prime, SearchConfig};

fn family(s: &str) -> CartanFamily {
    s.parse().unwrap()
}

/// `S(2,(2,2))'` style names: each trailing prime takes a derived algebra.
fn algebra(s: &str) -> LieAlgebra {
    let body = s.trim_end_matches('\'');
    let mut a = build(&family(body)).unwrap();
    for _ in body.len()..s.len() {
        a = a.derived().unwrap();
    }
    a.into_algebra()
}

fn rank(c: &mut Criterion) {
    let mut g = c.benchmark_group("rank");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in [64, 256, 1024] {
        let m = Matrix::random(Prime::TWO, n, n, &mut rng);
        g.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| m.rank())
        });
    }
    g.finish();
}

fn construct(c: &mut Criterion) {
    let mut g = c.benchmark_group("build");
    for s in [
        "W(2,(2,2))",
        "S(3,(2,1,1))",
        "H(4,(2,1,1,1))",
        "K(3,(1,2,2))",
    ] {
        let f = family(s);
        g.bench_function(s, |b| b.iter(|| build(black_box(&f)).unwrap()));
    }
    g.finish();
}

fn simplicity(c: &mut Criterion) {
    let mut g = c.benchmark_group("is_simple");
    g.sample_size(10);
    let cfg = SearchConfig::default();
    for s in ["W(1,(5))'", "H(4,(1,1,1,1))", "H(4,(2,1,1,1))"] {
        let l = algebra(s);
        g.bench_function(s, |b| b.iter(|| is_simple(black_box(&l), &cfg)));
    }
    g.finish();
}

fn isomorphism(c: &mut Criterion) {
    let mut g = c.benchmark_group("find_isomorphism");
    g.sample_size(10);
    let cfg = SearchConfig::default();
    let pairs = [
        ("H(2,(2,2))", "S(2,(2,2))'"),
        ("H(4,(1,1,1,1))", "S(3,(1,1,1))"),
    ];
    for (x, y) in pairs {
        let (a, b) = (algebra(x), algebra(y));
        g.bench_function(format!("{x} vs {y}"), |bench| {
            bench.iter(|| find_isomorphism(&a, &b, &cfg))
        });
    }
    g.finish();
}

criterion_group!(benches, rank, construct, simplicity, isomorphism);
criterion_main!(benches);
