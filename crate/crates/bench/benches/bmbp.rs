use balpack::generate::bench_instance;
use balpack::solve_bmbp;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

fn two_stage(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_bmbp");
    group.sample_size(10);
    for n in [1_000usize, 10_000, 100_000, 1_000_000] {
        let instance = bench_instance(n, 0, 1, 1000).unwrap();
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &instance, |b, inst| {
            b.iter(|| solve_bmbp(inst).unwrap())
        });
    }
    group.finish();
}

fn fractional_capacity(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_bmbp_fractional");
    group.sample_size(10);
    let base = bench_instance(100_000, 3, 1, 1000).unwrap();
    let instance = balpack::Instance::new(base.input_sizes().to_vec(), balpack::Rational::new(3005, 3)).unwrap();
    group.bench_function("100000", |b| b.iter(|| solve_bmbp(&instance).unwrap()));
    group.finish();
}

criterion_group!(benches, two_stage, fractional_capacity);
criterion_main!(benches);
