use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_betweentl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), v)
}

#[test]
fn sat_finds_the_shortest_model() {
    let (code, v) = json(&["sat", "--alphabet", "ab", "--formula", "F[#{a}=2 & #{b}=0] true", "--no-timing"]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["satisfiable"], true);
    assert_eq!(v["outputs"]["model"], "aaaa");
}

#[test]
fn unsatisfiable_is_a_successful_run() {
    let (code, v) = json(&["model", "--alphabet", "ab", "--formula", "a & !a", "--no-timing"]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["satisfiable"], false);
    assert_eq!(v["outputs"]["model"], Value::Null);
}

#[test]
fn classify_ab_star() {
    let (code, v) = json(&["classify", "--regex", "(ab)*", "--alphabet", "ab"]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["in_DA"]["value"], false);
    assert_eq!(v["outputs"]["in_MeDA"]["value"], true);
    assert_eq!(v["outputs"]["monoid_size"], 6);
}

#[test]
fn classify_reads_a_dfa_file() {
    let dir = std::env::temp_dir().join(format!("betweentl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("dfa.json");
    std::fs::write(
        &path,
        r#"{"states":["0","1"],"alphabet":["a","b"],"delta":{"0":{"a":"1"},"1":{"b":"0"}},"initial":"0","finals":["0"]}"#,
    )
    .unwrap();
    let arg = format!("@{}", path.display());
    let (code, v) = json(&["classify", "--dfa", &arg, "--alphabet", "ab", "--no-timing"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["outputs"]["monoid_size"], 6);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn corpus_translations_suite_passes() {
    let (code, v) = json(&["corpus", "--suite", "translations", "--no-timing"]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["failures"], 0);
    assert_eq!(v["outputs"]["cases"], 200);
}

#[test]
fn output_is_deterministic_without_timing() {
    for args in [
        &["corpus", "--suite", "tl", "--count", "20", "--seed", "7", "--no-timing"][..],
        &["translate", "--alphabet", "ab", "--formula", "F[#\"ab\">0 & #\"ba\"=0] a", "--no-timing"][..],
        &["corpus", "--suite", "a-words", "--alphabet", "abc", "--count", "5", "--no-timing"][..],
    ] {
        let (a, b) = (run(args), run(args));
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
        assert!(!String::from_utf8_lossy(&a.stdout).contains("wall_ms"));
    }
    let s1 = run(&["corpus", "--suite", "tl", "--count", "5", "--seed", "1", "--no-timing"]).stdout;
    let s2 = run(&["corpus", "--suite", "tl", "--count", "5", "--seed", "2", "--no-timing"]).stdout;
    assert_ne!(s1, s2);
}

#[test]
fn budget_overrun_has_its_own_exit_code() {
    let (code, v) = json(&["models", "--alphabet", "ab", "--formula", "a", "--max-len", "20", "--max-words", "100"]);
    assert_eq!(code, 3);
    assert_eq!(v["status"], "budget-exceeded");
    assert_eq!(v["outputs"]["partial"]["complete_up_to"], 5);
    assert_eq!(v["outputs"]["partial"]["count"], 31);
}

#[test]
fn domain_and_usage_errors() {
    let (code, v) = json(&["parse", "--alphabet", "ab", "--formula", "F[#{c}=0] a"]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "error");
    assert_eq!(run(&["parse", "--alphabet", "ab"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let (code, _) = json(&["translate", "--alphabet", "ab", "--formula", "exists x. a(x)", "--logic", "fo2"]);
    assert_eq!(code, 2);
}

#[test]
fn games_factorize_and_expand() {
    let (_, v) = json(&["game", "--alphabet", "ab", "--left", "ab", "--right", "ba", "--rounds", "1"]);
    assert_eq!(v["outputs"]["equivalent"], true);
    let (_, v) = json(&["game", "--alphabet", "ab", "--left", "ab", "--right", "ba", "--rounds", "2", "--strategy"]);
    assert_eq!(v["outputs"]["equivalent"], false);
    assert!(v["outputs"]["strategy"].is_object());
    let (_, v) = json(&[
        "factorize",
        "--alphabet",
        "abcd",
        "--word",
        "adccdccadcaaaaddccdcccdbcdcaacabcbbd",
        "--order",
        "a;a,b;a,c;a,b,c;a,d;a,b,d;a,c,d",
    ]);
    assert_eq!(v["outputs"]["final"], "adccdccadcaaaaddccdcccdbcdc·aacabcbbd");
    let (_, v) = json(&["expand", "--alphabet", "ab", "--word", "ababba", "--k", "3"]);
    assert_eq!(v["outputs"]["expanded"][0], "**a");
    assert_eq!(v["outputs"]["expanded"][5], "bba");
    let (code, v) = json(&["expand", "--alphabet", "ab", "--formula", "exists x. exists y. x<y & fac(\"ab\")(x,y)"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["outputs"]["k"], 2);
}

#[test]
fn eval_models_and_tiling() {
    let (_, v) = json(&["eval", "--alphabet", "ab", "--formula", "F b", "--word", "aab"]);
    assert_eq!(v["outputs"]["positions"], serde_json::json!([1, 2]));
    let (_, v) = json(&["models", "--alphabet", "ab", "--formula", "a & !F true", "--max-len", "3"]);
    assert_eq!(v["outputs"]["models"], serde_json::json!(["a"]));
    let inst = r#"{"tiles":["t"],"horizontal":[],"vertical":[["t","t"]],"start":"t","finish":"t","n":1}"#;
    let (code, v) = json(&["tiling", "--instance", inst, "--bound", "8"]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["satisfiable"], Value::Null);
}
