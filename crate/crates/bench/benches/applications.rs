use criterion::{criterion_group, criterion_main, Criterion};
use rsgraph::channel::{build_schedule, partition_two, simulate, Policy};
use rsgraph::code_graph::enumerate_cover;
use rsgraph::lintest::{estimate_soundness, fwht, walsh_correlation, BooleanFunction};
use rsgraph::Limits;
use rsgraph_bench::pinned_code_graph;
use std::hint::black_box;

fn walsh(c: &mut Criterion) {
    let f = BooleanFunction::random(16, 1).unwrap();
    c.bench_function("walsh correlation m=16", |b| {
        b.iter(|| walsh_correlation(black_box(&f)).unwrap())
    });
    let signs: Vec<i64> = (0..1 << 16)
        .map(|i| if i % 3 == 0 { -1 } else { 1 })
        .collect();
    c.bench_function("fwht 2^16", |b| {
        b.iter(|| {
            let mut v = signs.clone();
            fwht(black_box(&mut v));
            v
        })
    });
}

fn channel(c: &mut Criterion) {
    let p = pinned_code_graph();
    let cp = partition_two(&p, &Limits::unlimited()).unwrap();
    let schedule = build_schedule(&cp, Policy::Sequential);
    c.bench_function("simulate two-channel schedule N=81", |b| {
        b.iter(|| simulate(black_box(&schedule), 81).unwrap())
    });
}

fn lintest(c: &mut Criterion) {
    let cc = enumerate_cover(&pinned_code_graph(), &Limits::unlimited()).unwrap();
    let f = BooleanFunction::and_padded(8).unwrap();
    c.bench_function("graph test 1000 trials", |b| {
        b.iter(|| estimate_soundness(&cc.graph, black_box(&f), 1000, 3).unwrap())
    });
}

criterion_group!(benches, walsh, channel, lintest);
criterion_main!(benches);
