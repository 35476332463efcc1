use braidq::quotient::{q_mul, q_of_word, q_order};
use braidq_bench::sweep_word;
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn word_evaluation(c: &mut Criterion) {
    let mut group = c.benchmark_group("q_of_word");
    for &(n, k) in &[(6usize, 2u8), (6, 3), (11, 3)] {
        let w = sweep_word(n, 200);
        group.bench_with_input(BenchmarkId::from_parameter(format!("n{n}_k{k}")), &w, |b, w| {
            b.iter(|| q_of_word(black_box(w), k).unwrap())
        });
    }
    group.finish();
}

fn multiplication(c: &mut Criterion) {
    let g = q_of_word(&sweep_word(9, 60), 3).unwrap();
    let h = q_of_word(&sweep_word(9, 45), 3).unwrap();
    c.bench_function("q_mul_n9_k3", |b| b.iter(|| q_mul(black_box(&g), black_box(&h)).unwrap()));
    let x = q_of_word(&braidq::BraidWord::parse(9, "s2 s1^-1 s5 s4^-1").unwrap(), 2).unwrap();
    c.bench_function("q_order_n9_k2", |b| b.iter(|| q_order(black_box(&x))));
}

criterion_group!(benches, word_evaluation, multiplication);
criterion_main!(benches);
