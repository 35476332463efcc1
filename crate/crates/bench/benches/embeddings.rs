use braidq::constructions::{cayley_embed, example27, semidirect_embed, SemidirectSpec, Variant};
use braidq::FinGroup;
use criterion::{criterion_group, criterion_main, Criterion};

fn embeddings(c: &mut Criterion) {
    let mut group = c.benchmark_group("embed");
    group.sample_size(10);
    group.bench_function("cayley_z7_k3", |b| b.iter(|| cayley_embed(&FinGroup::cyclic(7), "Z7", 3).unwrap()));
    group.bench_function("frobenius_21_k2", |b| {
        b.iter(|| semidirect_embed(&SemidirectSpec::new(7, 3, 2).unwrap(), 2).unwrap())
    });
    group.bench_function("semidirect_55_k3", |b| {
        b.iter(|| semidirect_embed(&SemidirectSpec::new(11, 5, 3).unwrap(), 3).unwrap())
    });
    group.bench_function("example27_b", |b| b.iter(|| example27(Variant::B).unwrap()));
    group.finish();
}

criterion_group!(benches, embeddings);
criterion_main!(benches);
