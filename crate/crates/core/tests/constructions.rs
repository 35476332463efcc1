use braidq::cert::check_cert;
use braidq::constructions::{
    affine_perm_rep, cayley_embed, example27, orbit_o, prime_power_spec, semidirect_embed, torsion_element, SemidirectSpec,
    Variant,
};
use braidq::groups::{orbit_basis, BasisLabel, FinGroup, Level};
use braidq::quotient::{q_order, Order};
use braidq::{Error, Obstruction};

#[test]
fn cayley_z5_class_three() {
    let cert = cayley_embed(&FinGroup::cyclic(5), "Z5", 3).unwrap();
    assert_eq!(cert.order(), 5);
    let report = check_cert(&cert.to_json()).unwrap();
    assert_eq!((report.n, report.k), (5, 3));
}

#[test]
fn cayley_z9_class_two() {
    let cert = cayley_embed(&FinGroup::cyclic(9), "Z9", 2).unwrap();
    assert_eq!(cert.order(), 9);
    check_cert(&cert.to_json()).unwrap();
}

#[test]
fn frobenius_group_of_order_21() {
    let cert = semidirect_embed(&SemidirectSpec::new(7, 3, 2).unwrap(), 2).unwrap();
    assert_eq!((cert.order(), cert.degree, cert.k), (21, 7, 2));
    check_cert(&cert.to_json()).unwrap();
}

#[test]
fn hypothesis_violation_names_l() {
    match semidirect_embed(&SemidirectSpec::new(9, 3, 4).unwrap(), 2) {
        Err(Error::Obstruction(Obstruction::Hypothesis(msg))) => assert!(msg.contains("l = 1") && msg.contains("= 3")),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn even_order_rejected_at_class_two() {
    let spec = SemidirectSpec::new(5, 2, 4).unwrap();
    assert!(matches!(semidirect_embed(&spec, 2), Err(Error::Obstruction(_))));
}

#[test]
fn prime_power_family_embeds() {
    let spec = prime_power_spec(7, 1, 3).unwrap();
    let cert = semidirect_embed(&spec, 2).unwrap();
    assert_eq!(cert.order(), 21);
    let spec = prime_power_spec(5, 2, 1).unwrap();
    assert!(affine_perm_rep(&spec).injective);
}

#[test]
fn torsion_examples() {
    let x = torsion_element(5, 3, 5).unwrap().unwrap();
    assert_eq!(q_order(&x), Order::Finite(5));
    assert!(torsion_element(4, 2, 2).unwrap().is_none());
    let y = torsion_element(3, 2, 3).unwrap().unwrap();
    assert_eq!(q_order(&y), Order::Finite(3));
}

#[test]
fn order_27_variant_a() {
    let ex = example27(Variant::A).unwrap();
    assert!(ex.checks.iter().all(|c| c.passed));
    assert_eq!(ex.cert.order(), 27);
    check_cert(&ex.cert.to_json()).unwrap();
}

#[test]
fn order_27_variant_b() {
    let ex = example27(Variant::B).unwrap();
    assert!(ex.checks.iter().all(|c| c.passed));
    assert_eq!(ex.cert.order(), 27);
    check_cert(&ex.cert.to_json()).unwrap();
}

#[test]
fn orbit_of_a12_is_o() {
    let a = braidq::Perm::parse(9, "(1,2,3)(4,5,6)").unwrap();
    let b = braidq::Perm::parse(9, "(1,4,7,3,5,8,2,6,9)").unwrap();
    let (_, rep) = braidq::groups::from_perm_gens(9, &[a, b]).unwrap();
    let basis = orbit_basis(&rep, Level::Pairs).unwrap();
    let first: Vec<_> = basis.orbits[0].members.clone();
    let expected: Vec<_> = orbit_o().into_iter().map(BasisLabel::Pair).collect();
    let mut sorted_first = first.clone();
    sorted_first.sort();
    let mut sorted_expected = expected;
    sorted_expected.sort();
    assert_eq!(sorted_first, sorted_expected);
}

fn s_n_orders(n: usize) -> std::collections::BTreeSet<u64> {
    use num_integer::Integer;
    fn go(left: usize, max: usize, lcm: u64, out: &mut std::collections::BTreeSet<u64>) {
        if left == 0 {
            out.insert(lcm);
            return;
        }
        for part in 1..=left.min(max) {
            go(left - part, part, lcm.lcm(&(part as u64)), out);
        }
    }
    let mut out = std::collections::BTreeSet::new();
    go(n, n, 1, &mut out);
    out
}

#[test]
fn class_two_torsion_is_odd_torsion_of_s_n() {
    for n in 2..=6 {
        let orders = s_n_orders(n);
        for m in 2..=7 {
            let found = torsion_element(n, 2, m).unwrap().is_some();
            assert_eq!(found, m % 2 == 1 && orders.contains(&m), "n={n}, m={m}");
        }
    }
}

#[test]
fn class_three_has_no_two_or_three_torsion() {
    for n in 2..=5 {
        for m in [2, 3] {
            assert!(torsion_element(n, 3, m).unwrap().is_none(), "n={n}, m={m}");
        }
    }
}

#[test]
fn torsion_rejects_small_orders() {
    assert!(torsion_element(4, 2, 1).is_err());
    assert!(torsion_element(4, 4, 3).is_err());
}

#[test]
fn certificate_rejects_every_single_integer_mutation() {
    let cert = cayley_embed(&FinGroup::cyclic(3), "Z3", 2).unwrap().to_json();
    let mut paths = Vec::new();
    collect_integers(&cert, &mut Vec::new(), &mut paths);
    assert!(!paths.is_empty());
    for path in paths {
        let mut v = cert.clone();
        let slot = path.iter().fold(&mut v, |acc, key| match key {
            Key::Field(f) => &mut acc[f.as_str()],
            Key::Index(i) => &mut acc[*i],
        });
        let old = slot.as_i64().unwrap();
        *slot = serde_json::Value::from(old + 1);
        assert!(check_cert(&v).is_err(), "mutation at {path:?} accepted");
    }
}

#[derive(Clone, Debug)]
enum Key {
    Field(String),
    Index(usize),
}

fn collect_integers(v: &serde_json::Value, at: &mut Vec<Key>, out: &mut Vec<Vec<Key>>) {
    match v {
        serde_json::Value::Number(x) if x.is_i64() || x.is_u64() => out.push(at.clone()),
        serde_json::Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                at.push(Key::Index(i));
                collect_integers(x, at, out);
                at.pop();
            }
        }
        serde_json::Value::Object(m) => {
            for (k, x) in m {
                at.push(Key::Field(k.clone()));
                collect_integers(x, at, out);
                at.pop();
            }
        }
        _ => {}
    }
}
