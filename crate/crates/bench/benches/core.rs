use criterion::{criterion_group, criterion_main, Criterion};
use mdlogic::linsolve::lp_feasible;
use mdlogic::{entail, zeroone, Limits};
use mdlogic_bench::{chain_system, forall_exists, some_p, strong_square};
use std::hint::black_box;

fn simplex(c: &mut Criterion) {
    for n in [4, 8, 16] {
        let cs = chain_system(n);
        c.bench_function(&format!("simplex/chain-{n}"), |b| b.iter(|| lp_feasible(n, black_box(&cs))));
    }
}

fn entailment(c: &mut Criterion) {
    let lim = Limits::default();
    for m in [2, 3] {
        let (ps, g) = forall_exists(m);
        c.bench_function(&format!("entail/forall-exists-m{m}"), |b| {
            b.iter(|| entail(black_box(&ps), &g, &lim).unwrap())
        });
    }
    let (ps, g) = strong_square();
    c.bench_function("entail/strong-square", |b| b.iter(|| entail(black_box(&ps), &g, &lim).unwrap()));
}

fn enumeration(c: &mut Criterion) {
    let classical = some_p("classical");
    c.bench_function("zeroone/exact-classical-n10", |b| {
        b.iter(|| zeroone::exact_fraction(&classical, black_box(10)).unwrap())
    });
    let l3 = some_p("l3");
    c.bench_function("zeroone/exact-l3-n8", |b| b.iter(|| zeroone::exact_fraction(&l3, black_box(8)).unwrap()));
}

criterion_group!(benches, simplex, entailment, enumeration);
criterion_main!(benches);
