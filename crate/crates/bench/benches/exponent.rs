use criterion::{black_box, criterion_group, criterion_main, Criterion};
use nuclear_levy::char_func::nth_root_triplet;
use nuclear_levy::{cf_levy, lk_exponent};
use nuclear_levy_bench::{reference_triplet, test_function};

fn exponent(c: &mut Criterion) {
    let t = reference_triplet(8);
    let phi = test_function(8);
    c.bench_function("lk_exponent/d8", |b| b.iter(|| lk_exponent(black_box(&t), black_box(&phi)).unwrap()));
    c.bench_function("cf_levy/d8", |b| b.iter(|| cf_levy(black_box(&t), 0.7, black_box(&phi)).unwrap()));
    c.bench_function("nth_root_triplet/4", |b| b.iter(|| nth_root_triplet(black_box(&t), 4).unwrap()));
    c.bench_function("shell_decomposition/k12", |b| b.iter(|| t.levy.shell_decomposition(t.r, black_box(12)).unwrap()));
}

criterion_group!(benches, exponent);
criterion_main!(benches);
