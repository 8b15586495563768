use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use polyunfold::batch::fuzz_sequential;
use polyunfold::gen::GenConfig;

fn batch(c: &mut Criterion) {
    let cfg = GenConfig::default();
    let mut g = c.benchmark_group("fuzz");
    g.sample_size(10);
    for n in [50u64, 200] {
        g.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, &n| b.iter(|| fuzz_sequential(&cfg, n)));
        #[cfg(feature = "parallel")]
        g.bench_with_input(BenchmarkId::new("parallel", n), &n, |b, &n| {
            b.iter(|| polyunfold::batch::fuzz_parallel(&cfg, n))
        });
    }
    g.finish();
}

criterion_group!(benches, batch);
criterion_main!(benches);
