use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mivor_bench::{fitted, DROPWAVE};
use mivor_core::mipt::select_mipt;
use mivor_core::voronoi::exploit;
use mivor_core::{mc_pool, tplhd, RngStream};

fn design(c: &mut Criterion) {
    let mut group = c.benchmark_group("tplhd");
    for (points, dim) in [(100, 2), (500, 2), (51, 1)] {
        group.bench_function(BenchmarkId::new(format!("{dim}d"), points), |b| b.iter(|| tplhd(points, dim)));
    }
    group.finish();
}

fn select(c: &mut Criterion) {
    let model = fitted(DROPWAVE, 60);
    let samples = model.data().points().to_vec();
    let pool = mc_pool(100 * 2 * samples.len(), 2, &mut RngStream::new(7, 2)).unwrap();
    c.bench_function("mipt/60", |b| b.iter(|| select_mipt(&pool, &samples).unwrap()));
    c.bench_function("exploit/60", |b| b.iter(|| exploit(&model, &pool).unwrap()));
}

criterion_group!(benches, design, select);
criterion_main!(benches);
