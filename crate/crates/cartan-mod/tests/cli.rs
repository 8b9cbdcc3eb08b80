use std::path::Path;
use std::process::Command;

use cartan_core::grading::verify_grading;
use cartan_mod::json::parse_grading;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cartan-mod"))
}

fn run(args: &[&str]) -> (i32, String) {
    let out = bin().args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let (code, s) = run(args);
    (code, serde_json::from_str(&s).unwrap_or_else(|e| panic!("bad json ({e}): {s}")))
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn info_reports_dimension_and_support() {
    let (code, v) = run_json(&["info", "--kind", "W", "--p", "5", "--n", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["dim"], 5);
    assert_eq!(v["canonical_support"], serde_json::json!([-1, 0, 1, 2, 3]));
    assert_eq!(v["schema"], "cartan-mod/1");
}

#[test]
fn verify_h2_passes() {
    let (code, v) = run_json(&["verify", "--kind", "H2", "--p", "5", "--n", "1,1", "--trials", "20"]);
    assert_eq!(code, 0);
    assert_eq!(v["ok"], true);
    assert_eq!(v["dim"], 23);
    assert_eq!(v["checks"]["axioms"]["failures"], 0);
    assert_eq!(v["checks"]["simple"], true);
}

#[test]
fn standardize_swap_is_certified_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let gens = write(dir.path(), "swap.json", r#"["1->2, 2->1"]"#);
    let args = ["standardize", "--kind", "W", "--p", "5", "--n", "1,1", "--gens", &gens, "--seed", "11"];
    let (code, first) = run(&args);
    assert_eq!(code, 0);
    let (_, second) = run(&args);
    assert_eq!(first, second);
    let v: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["isomorphic"], true);
    assert_eq!(v["conjugation"]["certificates"]["in_torus"], true);
    assert_eq!(v["conjugation"]["certificates"]["in_aut_group"], true);
    for key in ["original", "standard"] {
        let gr = parse_grading(&v[key]).unwrap();
        assert!(verify_grading(&gr).ok);
        assert_eq!(gr.dims().iter().map(|d| d.1).collect::<Vec<_>>(), vec![25, 25]);
    }
}

#[test]
fn verify_is_reproducible_under_seed() {
    let args = ["verify", "--kind", "K1", "--p", "5", "--n", "1,1,1", "--seed", "3", "--trials", "10"];
    assert_eq!(run(&args), run(&args));
}

#[test]
fn emitted_gradings_reingest() {
    let cases: [&[&str]; 3] = [
        &["grade", "--kind", "W", "--p", "5", "--n", "1", "--hom", "e1->1"],
        &["grade", "--kind", "H2", "--p", "5", "--n", "1,1", "--group", "Z x Z/4", "--hom", "e1->(1,1), e2->(-1,3)"],
        &["grade", "--kind", "K1", "--p", "5", "--n", "1,1,1", "--group", "Z/3", "--hom", "e1->1, e2->2, e3->0"],
    ];
    for args in cases {
        let (code, v) = run_json(args);
        assert_eq!(code, 0, "{args:?}");
        assert_eq!(v["certificate"]["ok"], true);
        let gr = parse_grading(&v["grading"]).unwrap();
        assert!(verify_grading(&gr).ok);
        assert_eq!(gr.total_dim(), v["grading"]["dim"].as_u64().unwrap() as usize);
        assert!(gr.source_hom.is_some());
    }
}

#[test]
fn linear_generators_are_diagonalized() {
    let dir = tempfile::tempdir().unwrap();
    // trace 0 and determinant 1 over F_5: symplectic of order 4, not monomial
    let gens = write(dir.path(), "rot.json", r#"[{"tuple": ["x1 + 3*x2", "x1 + 4*x2"]}]"#);
    let (code, v) = run_json(&["diagonalize", "--kind", "H2", "--p", "5", "--n", "1,1", "--gens", &gens]);
    assert_eq!(code, 0, "{v}");
    let c = &v["conjugation"]["certificates"];
    assert_eq!(c["in_torus"], true);
    assert_eq!(c["in_aut_group"], true);
    assert!(c["form_multiplier"].is_array());
    assert!(verify_grading(&parse_grading(&v["grading"]).unwrap()).ok);
}

#[test]
fn out_flag_and_text_format() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("info.txt");
    let (code, stdout) =
        run(&["info", "--kind", "S1", "--p", "5", "--n", "1,1,1", "--format", "text", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let body = std::fs::read_to_string(out).unwrap();
    // dim S(3;1)^(1) = (m - 1)(p^3 - 1)
    assert!(body.contains("dim: 248\n"), "{body}");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // module error: the hom violates the pairing relations
    let (code, v) = run_json(&["grade", "--kind", "H2", "--p", "5", "--n", "1,1,1,1", "--hom", "e1->1"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "RelationViolation");
    // module error: generators do not commute
    let gens = write(dir.path(), "nc.json", r#"["1->2, 2->1", "1->1:2"]"#);
    let (code, v) = run_json(&["diagonalize", "--kind", "W", "--p", "5", "--n", "1,1", "--gens", &gens]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "NonCommuting");
    // malformed input
    let bad = write(dir.path(), "bad.json", "[1->2");
    let (code, v) = run_json(&["diagonalize", "--kind", "W", "--p", "5", "--n", "1,1", "--gens", &bad]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "MalformedInput");
    let (code, _) = run_json(&["grade", "--kind", "W", "--p", "5", "--n", "1", "--hom", "f1->1"]);
    assert_eq!(code, 2);
    let (code, v) = run_json(&["info", "--kind", "H2", "--p", "3", "--n", "1,2"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "ExcludedConfiguration");
    let (code, _) = run(&["info", "--kind", "W", "--p", "4", "--n", "1"]);
    assert_eq!(code, 2);
}
