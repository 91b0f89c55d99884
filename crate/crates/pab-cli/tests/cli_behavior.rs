//! Exit-code contract, output determinism, and format behavior of the
//! installed `pab` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pab_core::{catalog_family, parse_presentation, render_presentation};

fn pab() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pab"));
    cmd.env_remove("PAB_MAX_ENUM");
    cmd
}

fn run(args: &[&str]) -> Output {
    pab().args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn write_catalog(dir: &Path, name: &str, family: &str, p: u64, size: u64) -> PathBuf {
    let pres = catalog_family(family, p, size).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, render_presentation(&pres)).unwrap();
    path
}

#[test]
fn compare_agrees_on_modular_group() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_catalog(dir.path(), "m34.pab", "modular", 3, 4);
    let out = run(&["compare", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("G^ab[paper]: Z_9 x Z_3"));
    assert!(text.contains("G^ab[census]: Z_9 x Z_3"));
    assert!(text.contains("agreement: yes"));
}

#[test]
fn abelianize_rejects_even_prime_with_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("even.pab");
    std::fs::write(&path, "prime 2\ngen x 4\ngen y 2\nderived pow x\ncomm y x 1\n").unwrap();
    let out = run(&["abelianize", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("EvenPrime"), "stderr was: {}", err);
}

#[test]
fn lemmas_pass_exhaustively_on_heisenberg_five() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_catalog(dir.path(), "h5.pab", "heisenberg", 5, 0);
    let out = run(&["lemmas", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("pairs checked: 15625 (exhaustive)"));
    assert!(text.contains("lemmas: pass"));
}

#[test]
fn validate_reports_violations_with_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trivial.pab");
    std::fs::write(&path, "prime 3\ngen x 3\ngen y 3\nderived free\n").unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout_of(&out).contains("DerivedTrivial"));

    let good = write_catalog(dir.path(), "heis.pab", "heisenberg", 3, 0);
    let out = run(&["validate", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("valid"));
}

#[test]
fn missing_file_and_unknown_family_are_invalid_input() {
    let out = run(&["abelianize", "/nonexistent/file.pab"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["catalog", "--family", "dihedral", "--p", "3", "--size", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["compare"]);
    assert_eq!(out.status.code(), Some(2), "no files is invalid input");
}

#[test]
fn catalog_emit_round_trips() {
    let out = run(&[
        "catalog",
        "--family",
        "extraspecial_exp_p",
        "--p",
        "5",
        "--size",
        "2",
        "--emit",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let reparsed = parse_presentation(&stdout_of(&out)).unwrap();
    assert_eq!(reparsed, catalog_family("extraspecial_exp_p", 5, 2).unwrap());
}

#[test]
fn identical_invocations_produce_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_catalog(dir.path(), "m54.pab", "modular", 5, 4);
    let args = [
        "compare",
        "--json",
        "--seed",
        "11",
        file.to_str().unwrap(),
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);

    // Sampled lemma checks are pinned by the seed as well.
    let big = write_catalog(dir.path(), "m39.pab", "modular", 3, 9);
    let args = ["lemmas", "--seed", "5", "--sample", "2000", big.to_str().unwrap()];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert!(stdout_of(&first).contains("sampled, rng chacha8, seed 5"));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn census_is_skipped_beyond_the_cap_with_a_notice() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_catalog(dir.path(), "m36.pab", "modular", 3, 6);
    let out = run(&[
        "compare",
        "--json",
        "--max-enum",
        "100",
        file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "remaining methods still agree");
    let value: serde_json::Value = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    assert!(value["methods"].get("census").is_none());
    assert!(value["methods"].get("paper").is_some());
    assert_eq!(value["agreement"], serde_json::json!(true));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("census skipped"));
}

#[test]
fn census_only_request_beyond_cap_exits_with_cap_code() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_catalog(dir.path(), "m36.pab", "modular", 3, 6);
    let out = run(&[
        "abelianize",
        "--method",
        "census",
        "--max-enum",
        "100",
        file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn max_enum_env_variable_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_catalog(dir.path(), "m36.pab", "modular", 3, 6);
    let out = pab()
        .env("PAB_MAX_ENUM", "100")
        .args(["abelianize", "--method", "census", file.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn json_report_shape() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_catalog(dir.path(), "heis.pab", "heisenberg", 3, 0);
    let out = run(&["compare", "--json", file.to_str().unwrap()]);
    let value: serde_json::Value = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    for field in [
        "group_order",
        "prime",
        "case",
        "frattini_ab",
        "methods",
        "agreement",
        "generalized_extraspecial",
        "violations",
    ] {
        assert!(value.get(field).is_some(), "missing field {}", field);
    }
    assert_eq!(value["group_order"], "27");
    assert_eq!(value["case"], "II");
    assert_eq!(value["generalized_extraspecial"], serde_json::json!(true));
    assert_eq!(value["methods"]["direct"], serde_json::json!(["3", "3"]));
}

#[test]
fn batch_mode_processes_files_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_catalog(dir.path(), "a.pab", "heisenberg", 3, 0);
    let b = write_catalog(dir.path(), "b.pab", "modular", 3, 4);
    let out = run(&["compare", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let pos_a = text.find("a.pab").unwrap();
    let pos_b = text.find("b.pab").unwrap();
    assert!(pos_a < pos_b);
}

#[test]
fn classify_lines() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_catalog(dir.path(), "m33.pab", "modular", 3, 3);
    let out = run(&["classify", file.to_str().unwrap()]);
    let text = stdout_of(&out);
    assert!(text.contains("case: I"));
    assert!(text.contains("generalized extraspecial: yes"));

    let file = write_catalog(dir.path(), "m34.pab", "modular", 3, 4);
    let out = run(&["classify", file.to_str().unwrap()]);
    assert!(stdout_of(&out).contains("generalized extraspecial: no"));
}

#[test]
fn frattini_ab_reports_type_and_case() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_catalog(dir.path(), "m34.pab", "modular", 3, 4);
    let out = run(&["frattini-ab", file.to_str().unwrap()]);
    let text = stdout_of(&out);
    assert!(text.contains("frattini(G^ab): Z_3"));
    assert!(text.contains("case: I"));
}
