use braidq::quotient::q_of_word;
use braidq_bench::sweep_word;

#[test]
fn bench_inputs_evaluate_in_both_classes() {
    for n in [6, 9, 11] {
        let w = sweep_word(n, 200);
        let q2 = q_of_word(&w, 2).unwrap();
        let q3 = q_of_word(&w, 3).unwrap();
        assert_eq!(q2.perm(), q3.perm());
        assert_eq!(q2.pure_part().a(), q3.pure_part().a());
    }
}
