use std::process::{Command, Output, Stdio};
use std::io::Write;

use serde_json::Value;

fn locus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_locus")).args(args).output().expect("binary runs")
}

fn locus_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_locus"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn decide(n: u64, elems: &[&str], extra: &[&str]) -> (i32, Value, Vec<u8>) {
    let n = n.to_string();
    let mut args = vec!["decide", "--n", &n];
    for e in elems {
        args.extend(["--elem", e]);
    }
    args.extend(extra);
    let out = locus(&args);
    let doc = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), doc, out.stdout)
}

#[test]
fn verdicts_and_exit_codes() {
    let cases: &[(u64, &[&str], i32, &str)] = &[
        (3, &["2", "3", "6", "18"], 0, "hyperplane_cover"),
        (8, &["16"], 0, "wang_exception"),
        (6, &["-27", "4"], 0, "exceptional_form"),
        (6, &["4", "9", "36", "324"], 0, "lifted"),
        (6, &["4", "8"], 1, "pair_criterion"),
        (9, &["8", "5", "10", "50"], 1, "component_failure"),
        (2, &["2", "3", "5"], 1, "component_failure"),
    ];
    for &(n, elems, code, kind) in cases {
        let (got, doc, _) = decide(n, elems, &[]);
        assert_eq!(got, code, "{elems:?} at {n}");
        assert_eq!(doc["certificate"]["kind"], kind, "{elems:?} at {n}: {doc}");
    }
}

#[test]
fn inconclusive_sets_carry_scan_evidence() {
    let (code, doc, _) = decide(4, &["2", "3", "5"], &[]);
    assert_eq!(code, 2);
    assert_eq!(doc["status"], "inconclusive");
}

#[test]
fn evidence_attaches_least_failing_prime() {
    let (code, doc, _) = decide(3, &["2", "3", "12"], &["--evidence"]);
    assert_eq!(code, 1);
    assert_eq!(doc["counterexample"], 7);
}

#[test]
fn sieve_lists_failing_primes() {
    let out = locus(&["sieve", "--n", "3", "--elem", "2", "--elem", "3", "--elem", "12", "--hi", "50"]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["failing_primes"], serde_json::json!([7, 37]));
}

#[test]
fn certificates_round_trip_through_verification() {
    for (n, elems) in [(3u64, &["2", "3", "6", "18"][..]), (6, &["4", "8"]), (9, &["8", "5", "10", "50"]), (8, &["16"])] {
        let (_, _, raw) = decide(n, elems, &[]);
        let out = locus_stdin(&["verify-certificate", "--file", "-"], &raw);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(doc["valid"], true);
    }
}

#[test]
fn tampered_certificates_are_rejected() {
    let (_, mut doc, _) = decide(6, &["4", "8"], &[]);
    doc["status"] = "holds".into();
    let out = locus_stdin(&["verify-certificate", "--file", "-"], doc.to_string().as_bytes());
    assert_ne!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["valid"], false);

    // swapping an element makes the covering certificate describe another set
    let (_, mut doc, _) = decide(3, &["2", "3", "6", "18"], &[]);
    doc["elements"][3] = "5/1".into();
    let out = locus_stdin(&["verify-certificate", "--file", "-"], doc.to_string().as_bytes());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    let a = decide(9, &["8", "5", "10", "50"], &["--evidence"]).2;
    let b = decide(9, &["8", "5", "10", "50"], &["--evidence"]).2;
    assert_eq!(a, b);
    let mc = ["--monte-carlo", "--ceiling", "10", "--samples", "500", "--seed", "7"];
    let a = decide(3, &["2", "3", "5", "7"], &mc).2;
    let b = decide(3, &["2", "3", "5", "7"], &mc).2;
    assert_eq!(a, b);
}

#[test]
fn bad_input_exits_with_three() {
    assert_eq!(decide(3, &["0"], &[]).0, 3);
    assert_eq!(decide(3, &["1/0"], &[]).0, 3);
    assert_eq!(decide(3, &["abc"], &[]).0, 3);
    assert_eq!(locus(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(locus(&["decide", "--n", "3"]).status.code(), Some(3));
    assert_eq!(locus(&["oracle", "--n", "6", "--elem", "2"]).status.code(), Some(3));
}

#[test]
fn oversized_enumerations_exit_with_four() {
    let primes = ["2", "3", "5", "7", "11", "13"];
    assert_eq!(decide(9, &primes, &["--ceiling", "100"]).0, 4);
}

#[test]
fn generated_families_feed_back_into_decide() {
    let out = locus(&["generate", "square-triple", "--p1", "3", "--p2", "5"]);
    assert!(out.status.success());
    let elems: Vec<String> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(elems.len(), 3);
    let refs: Vec<&str> = elems.iter().map(String::as_str).collect();
    assert_eq!(decide(2, &refs, &[]).0, 0);

    let out = locus(&["generate", "cubic-quad", "--a", "2", "--b", "3"]);
    let elems: Vec<String> = serde_json::from_slice(&out.stdout).unwrap();
    let refs: Vec<&str> = elems.iter().map(String::as_str).collect();
    assert_eq!(decide(3, &refs, &[]).0, 0);

    assert_eq!(locus(&["generate", "cubic-quad", "--a", "1", "--b", "2"]).status.code(), Some(3));
}

#[test]
fn oracle_agrees_on_a_small_set() {
    let out = locus(&["oracle", "--n", "3", "--elem", "2", "--elem", "3", "--elem", "6", "--elem", "18"]);
    assert_eq!(out.status.code(), Some(0));
    let out = locus(&["oracle", "--n", "3", "--elem", "2", "--elem", "3", "--elem", "12"]);
    assert_eq!(out.status.code(), Some(1));
}
