use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use tba_core::{operator_count, par, Operator, PointDomain, TransformKind};

fn involutive(d: PointDomain, i: u64) -> bool {
    let f = Operator::at_index(d, i).unwrap();
    TransformKind::ALL.iter().all(|&k| f.transform(k).transform(k) == f)
}

fn cube(d: PointDomain, i: u64) -> bool {
    Operator::at_index(d, i).unwrap().cube_check()
}

fn scans(c: &mut Criterion) {
    let mut group = c.benchmark_group("operator_scans");
    group.sample_size(10);
    for n in [2usize, 3] {
        let d = PointDomain::new(n).unwrap();
        // n = 3 has 2^24 operators; a prefix keeps one iteration short.
        let len = operator_count(d).unwrap().min(1 << 18);
        for (name, check) in [("cube", cube as fn(PointDomain, u64) -> bool), ("involution", involutive)] {
            group.bench_with_input(BenchmarkId::new(format!("{name}/par"), n), &len, |b, &len| {
                b.iter(|| black_box(par::count(0..len, |i| check(d, i))))
            });
            group.bench_with_input(BenchmarkId::new(format!("{name}/seq"), n), &len, |b, &len| {
                b.iter(|| black_box(par::count_seq(0..len, |i| check(d, i))))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, scans);
criterion_main!(benches);
