use std::hint::black_box;

use credpool::fixing::{fix_d1, fix_d2, fix_sed};
use credpool::oracle::{grid_minimize, Domain};
use credpool::pooling::linear_pool;
use credpool::theoremlab::certify::weighted_divergence;
use credpool::theoremlab::section9::carmen_donal;
use credpool::wcap::{wcap_d1, wcap_general};
use credpool::{Direction, Generator};
use credpool_bench::profiles;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn fixing(c: &mut Criterion) {
    let mut group = c.benchmark_group("fix");
    for m in [2, 4, 8] {
        let pooled: Vec<_> =
            profiles(32, m, 3).iter().map(|p| (p.agenda().clone(), linear_pool(p))).collect();
        group.bench_with_input(BenchmarkId::new("sed", m), &pooled, |b, cases| {
            b.iter(|| cases.iter().map(|(a, x)| fix_sed(a, x).unwrap()[0]).sum::<f64>())
        });
        group.bench_with_input(BenchmarkId::new("power3_from", m), &pooled, |b, cases| {
            let gen = Generator::Power(3.0);
            b.iter(|| cases.iter().map(|(a, x)| fix_d1(&gen, a, x).unwrap().objective).sum::<f64>())
        });
        group.bench_with_input(BenchmarkId::new("power3_to", m), &pooled, |b, cases| {
            let gen = Generator::Power(3.0);
            b.iter(|| cases.iter().map(|(a, x)| fix_d2(&gen, a, x).unwrap().objective).sum::<f64>())
        });
    }
    group.finish();
}

fn approximation(c: &mut Criterion) {
    let cases = profiles(32, 4, 3);
    c.bench_function("wcap_d1/power3", |b| {
        let gen = Generator::Power(3.0);
        b.iter(|| cases.iter().map(|p| wcap_d1(&gen, p).unwrap().objective).sum::<f64>())
    });
    let p = carmen_donal();
    c.bench_function("wcap_general/gkl_disjunction", |b| {
        b.iter(|| wcap_general(&Generator::Gkl, black_box(&p), Direction::From).unwrap().objective)
    });
}

fn oracle(c: &mut Criterion) {
    let p = &profiles(1, 3, 2)[0];
    let gen = Generator::Gkl;
    c.bench_function("grid_minimize/simplex3", |b| {
        b.iter(|| {
            grid_minimize(|x| weighted_divergence(&gen, p, x, Direction::To), Domain::Simplex(3), 1e-2)
                .unwrap()
                .value
        })
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = fixing, approximation, oracle
}
criterion_main!(benches);
