//! End-to-end tests for the `tricolor` binary: output and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR")))
}

fn tricolor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tricolor"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn check_reports_well_formed_with_exit_0() {
    let out = tricolor(&["check", fixture("boston.tdag").to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{out:?}");
    assert_eq!(stdout(&out).trim(), "well-formed");
}

#[test]
fn check_reports_violations_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.tdag");
    std::fs::write(&bad, "root r\nnode r color=red\nnode x color=yellow\narc r f x color=red\n").unwrap();
    let out = tricolor(&["check", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1, "{out:?}");
    assert!(stdout(&out).contains("W2"), "{out:?}");
}

#[test]
fn parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.tdag");
    std::fs::write(&bad, "root r\nnode r color=mauve\n").unwrap();
    let out = tricolor(&["check", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2, "{out:?}");
    let missing = dir.path().join("missing.tdag");
    let out = tricolor(&["check", missing.to_str().unwrap()]);
    assert_eq!(code(&out), 2, "{out:?}");
}

#[test]
fn unify_conflicting_green_atoms_is_indefinite() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.tdag");
    let b = dir.path().join("b.tdag");
    std::fs::write(&a, "root r\nnode r color=red\nnode x color=green label=*A\narc r num x color=green\n")
        .unwrap();
    std::fs::write(&b, "root r\nnode r color=red\nnode x color=green label=*B\narc r num x color=green\n")
        .unwrap();
    let out = tricolor(&["unify", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(code(&out), 1, "{out:?}");
    assert!(stdout(&out).starts_with("indefinite:"), "{out:?}");
}

#[test]
fn unify_compatible_tdags_prints_the_join() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.tdag");
    let b = dir.path().join("b.tdag");
    std::fs::write(&a, "root r\nnode r color=red\nnode x color=green label=*A\narc r num x color=green\n")
        .unwrap();
    std::fs::write(&b, "root r\nnode r color=red\nnode x color=red label=*A\narc r num x color=red\n")
        .unwrap();
    let out = tricolor(&["unify", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{out:?}");
    // Red absorbs green on the shared atom.
    assert!(stdout(&out).contains("color=red label=*A"), "{out:?}");
}

#[test]
fn subsume_failure_exits_1() {
    let wish = fixture("wish_en.tdag");
    let aruku = fixture("aruku_ja.tdag");
    let out = tricolor(&["subsume", wish.to_str().unwrap(), aruku.to_str().unwrap()]);
    assert_eq!(code(&out), 1, "{out:?}");
    assert_eq!(stdout(&out).trim(), "does not subsume");
    // Reflexive case passes.
    let out = tricolor(&["subsume", wish.to_str().unwrap(), wish.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{out:?}");
}

#[test]
fn analyze_and_generate_round() {
    let out = tricolor(&[
        "analyze",
        "--sentence",
        "John wished to walk",
        "--grammar",
        fixture("en.patr").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{out:?}");
    assert!(stdout(&out).contains("# parses: 1"), "{out:?}");

    let out = tricolor(&[
        "generate",
        "--tdag",
        fixture("boston.tdag").to_str().unwrap(),
        "--grammar",
        fixture("ja.patr").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{out:?}");
    assert_eq!(
        stdout(&out).lines().next().unwrap(),
        "Boston deno jimusho ha yobi mashita"
    );
}

#[test]
fn generate_failure_exits_1() {
    let out = tricolor(&[
        "generate",
        "--tdag",
        fixture("wish_en.tdag").to_str().unwrap(),
        "--grammar",
        fixture("ja.patr").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1, "{out:?}");
    assert!(stdout(&out).contains("generation failed"), "{out:?}");
}

#[test]
fn translate_boston_end_to_end() {
    let out = tricolor(&[
        "translate",
        "--sentence",
        "The Boston office called",
        "--src",
        fixture("en.patr").to_str().unwrap(),
        "--tgt",
        fixture("ja.patr").to_str().unwrap(),
        "--strategies",
        fixture("strategies.cfg").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{out:?}");
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), "Boston deno jimusho ha yobi mashita");
    assert!(text.contains("verdict: under-generated"), "{text}");
    // Nothing the source requires is violated by the target.
    assert!(text.contains("violated by target (0):"), "{text}");
}

#[test]
fn transfer_replay_and_export_dot() {
    let out = tricolor(&[
        "transfer",
        fixture("boston.tdag").to_str().unwrap(),
        "--replay",
        fixture("boston_transfer.ops").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{out:?}");
    assert!(stdout(&out).contains("operations (2):"), "{out:?}");

    let out = tricolor(&["export-dot", fixture("boston.tdag").to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{out:?}");
    let dot = stdout(&out);
    assert!(dot.starts_with("digraph tdag {"), "{dot}");
    assert!(dot.trim_end().ends_with('}'), "{dot}");
}

#[test]
fn depth_env_variable_is_honored() {
    // A depth budget of 1 cannot finish any derivation.
    let out = Command::new(env!("CARGO_BIN_EXE_tricolor"))
        .env("TRICOLOR_DEPTH", "1")
        .args([
            "generate",
            "--tdag",
            fixture("boston.tdag").to_str().unwrap(),
            "--grammar",
            fixture("ja.patr").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(code(&out), 1, "{out:?}");
}
