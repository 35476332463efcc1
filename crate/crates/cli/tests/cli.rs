use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn braidq(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_braidq")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn order_of_a_quoted_word() {
    let (code, out, _) = braidq(&["order", "--n", "9", "--k", "2", "s5 s4^-1 s7 s8^-1"]);
    assert_eq!((code, out.trim()), (0, "3"));
}

#[test]
fn generators_have_infinite_order() {
    let (code, out, _) = braidq(&["order", "--n", "3", "--k", "2", "s1"]);
    assert_eq!((code, out.trim()), (0, "infinite"));
}

#[test]
fn unmet_hypothesis_exits_with_two() {
    let (code, _, err) = braidq(&["embed", "semidirect", "--n", "9", "--m", "3", "--t", "4", "--k", "2"]);
    assert_eq!(code, 2);
    assert!(err.contains("gcd(4^1 − 1, 9) = 3"), "{err}");
}

#[test]
fn gcd_obstructions_exit_with_two() {
    for (file, k) in [("z2.json", "2"), ("z3.json", "3"), ("s3.json", "2")] {
        let (code, _, err) = braidq(&["embed", "cayley", "--group", &fixture(file), "--k", k]);
        assert_eq!(code, 2, "{file}: {err}");
        assert!(err.contains("coprime to k!"));
    }
}

#[test]
fn missing_torsion_exits_with_two() {
    let (code, _, err) = braidq(&["torsion", "--n", "5", "--k", "3", "--order", "3"]);
    assert_eq!(code, 2);
    assert!(err.contains("order 3"));
    let (code, out, _) = braidq(&["torsion", "--n", "5", "--k", "3", "--order", "5"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["k"], 3);
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(braidq(&["order", "--n", "3", "--k", "4", "s1"]).0, 1);
    assert_eq!(braidq(&["frobnicate"]).0, 1);
    assert_eq!(braidq(&["order", "--n", "3", "--k", "2", "s7"]).0, 1);
    assert_eq!(braidq(&["check-cert", "/nonexistent/cert.json"]).0, 1);
    assert_eq!(braidq(&["--help"]).0, 0);
}

#[test]
fn emitted_certificates_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<Vec<String>> = vec![
        vec!["embed".into(), "cayley".into(), "--group".into(), fixture("z5.json"), "--k".into(), "3".into()],
        vec!["embed".into(), "cayley".into(), "--group".into(), fixture("z3xz3.json"), "--k".into(), "2".into()],
        vec!["embed".into(), "semidirect".into(), "--n".into(), "7".into(), "--m".into(), "3".into(), "--t".into(), "2".into(), "--k".into(), "2".into()],
        vec!["embed".into(), "prime-power".into(), "--p".into(), "7".into(), "--r".into(), "1".into(), "--d1".into(), "3".into(), "--k".into(), "2".into()],
        vec!["verify".into(), "example27".into(), "--variant".into(), "a".into()],
        vec!["verify".into(), "example27".into(), "--variant".into(), "b".into()],
    ];
    for (i, args) in runs.iter().enumerate() {
        let path = dir.path().join(format!("cert{i}.json"));
        let mut full: Vec<&str> = args.iter().map(String::as_str).collect();
        let p = path.display().to_string();
        full.extend(["--out", &p]);
        let (code, _, err) = braidq(&full);
        assert_eq!(code, 0, "{args:?}: {err}");
        let (code, out, err) = braidq(&["check-cert", &p]);
        assert_eq!(code, 0, "{args:?}: {err}");
        assert_eq!(serde_json::from_str::<Value>(&out).unwrap()["accepted"], true);
    }
}

#[test]
fn example27_variant_a_accepts_t5() {
    let (code, out, _) = braidq(&["--pretty", "verify", "example27", "--variant", "a", "--t", "5"]);
    assert_eq!(code, 0);
    assert!(out.contains("t = 5 normalised to t = 4"));
    assert!(out.contains("products        729  ok"));
    assert_eq!(braidq(&["verify", "example27", "--variant", "a", "--t", "8"]).0, 1);
}

#[test]
fn output_is_deterministic() {
    let args = ["embed", "semidirect", "--n", "7", "--m", "3", "--t", "2", "--k", "2"];
    let (_, first, _) = braidq(&args);
    let (_, second, _) = braidq(&args);
    assert!(!first.is_empty());
    assert_eq!(first, second);
}

#[test]
fn orbits_of_the_heisenberg_group() {
    let (code, out, _) = braidq(&["orbits", "--n", "9", "--gens", "(1,4,7)(2,5,8)(3,6,9); (4,5,6)(7,9,8)"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["group_order"], 27);
    let sizes: Vec<u64> = v["orbits"].as_array().unwrap().iter().map(|o| o["size"].as_u64().unwrap()).collect();
    assert_eq!(sizes, vec![9, 27]);
}

#[test]
fn word_nf_reports_the_central_term() {
    let (code, out, _) = braidq(&["word", "nf", "--n", "3", "--k", "3", "s1^2 s2^2 s1^-2"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["a"]["A2,3"], 1);
    assert_eq!(v["c"]["a1,2,3"], 1);
}

fn integer_paths(v: &Value, at: &mut Vec<Value>, out: &mut Vec<Vec<Value>>) {
    match v {
        Value::Number(x) if x.is_i64() || x.is_u64() => out.push(at.clone()),
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                at.push(Value::from(i));
                integer_paths(x, at, out);
                at.pop();
            }
        }
        Value::Object(m) => {
            for (k, x) in m {
                at.push(Value::from(k.clone()));
                integer_paths(x, at, out);
                at.pop();
            }
        }
        _ => {}
    }
}

#[test]
fn check_cert_rejects_mutated_integers() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = braidq(&["embed", "semidirect", "--n", "7", "--m", "3", "--t", "2", "--k", "2"]);
    assert_eq!(code, 0);
    let cert: Value = serde_json::from_str(&out).unwrap();
    let mut paths = Vec::new();
    integer_paths(&cert, &mut Vec::new(), &mut paths);
    // every integer in the group and transcript, and a spread of image entries
    let chosen: Vec<&Vec<Value>> = paths.iter().enumerate().filter(|(i, p)| p[0] != "images" || i % 7 == 0).map(|(_, p)| p).collect();
    assert!(chosen.len() > 20);
    for path in chosen {
        let mut v = cert.clone();
        let mut slot = &mut v;
        for key in path {
            slot = match key {
                Value::String(s) => &mut slot[s.as_str()],
                Value::Number(i) => &mut slot[i.as_u64().unwrap() as usize],
                _ => unreachable!(),
            };
        }
        *slot = Value::from(slot.as_i64().unwrap() + 1);
        let file = dir.path().join("mutated.json");
        std::fs::write(&file, serde_json::to_string(&v).unwrap()).unwrap();
        let (code, _, _) = braidq(&["check-cert", &file.display().to_string()]);
        assert_eq!(code, 1, "mutation at {path:?} accepted");
    }
}
