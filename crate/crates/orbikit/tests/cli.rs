//! CLI behavior: exit codes, flag handling, and robustness against malformed
//! input documents.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_orbikit")
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("spawn orbikit")
}

fn run_doc(command: &str, doc: &str, extra: &[&str]) -> Output {
    let dir = tempdir();
    let path = dir.join("input.json");
    std::fs::write(&path, doc).unwrap();
    let mut args = vec![command, "--in", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn tempdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("orbikit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn exit_0_on_success() {
    let out = run(&["schur", "--in", golden("klein_schur.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!out.stdout.is_empty());
}

#[test]
fn exit_2_on_malformed_json() {
    let out = run_doc("schur", "{ this is not json", &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_2_on_unknown_field() {
    let out = run_doc(
        "schur",
        r#"{"groups": {"K": {"preset": "klein"}}, "bogus": 1, "command": {"name": "schur", "group": "K"}}"#,
        &[],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_3_on_unresolved_name() {
    let out = run_doc(
        "schur",
        r#"{"groups": {"K": {"preset": "klein"}}, "command": {"name": "schur", "group": "missing"}}"#,
        &[],
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn exit_4_on_invalid_group_table() {
    // not associative: entry (1,1) -> 1 instead of 0
    let out = run_doc(
        "schur",
        r#"{"groups": {"B": {"table": [[0,1],[1,1]]}}, "command": {"name": "schur", "group": "B"}}"#,
        &[],
    );
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn exit_4_on_command_name_mismatch() {
    let out = run(&["schur", "--in", golden("z2_sectors.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn exit_5_on_nerve_cap() {
    let out = run(&[
        "nerve-cohomology",
        "--in",
        golden("z3_nerve.json").to_str().unwrap(),
        "--cap-nerve",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn env_cap_applies_and_flag_overrides_it() {
    let path = golden("z3_nerve.json");
    let capped = Command::new(bin())
        .args(["nerve-cohomology", "--in", path.to_str().unwrap()])
        .env("ORBIKIT_CAP", "2")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(5));
    let overridden = Command::new(bin())
        .args(["nerve-cohomology", "--in", path.to_str().unwrap(), "--cap-nerve", "1000000"])
        .env("ORBIKIT_CAP", "2")
        .output()
        .unwrap();
    assert_eq!(overridden.status.code(), Some(0));
}

#[test]
fn table_format_renders() {
    let out = run(&[
        "schur",
        "--in",
        golden("klein_schur.json").to_str().unwrap(),
        "--format",
        "table",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("schur_multiplier: Z/2"), "table output: {text}");
}

#[test]
fn modulus_flag_changes_nerve_coefficients() {
    let out = run(&[
        "nerve-cohomology",
        "--in",
        golden("z3_nerve.json").to_str().unwrap(),
        "--modulus",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // with Z/3 coefficients every degree of B(Z/3) is Z/3
    assert_eq!(v["payload"]["cohomology"][1]["group"], "Z/3");
}

#[test]
fn stdout_is_valid_json_with_digest() {
    let out = run(&["sectors", "--in", golden("z2_sectors.json").to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["tool"], "orbikit");
    assert!(v["input_digest"].as_str().unwrap().starts_with("sha256:"));
    assert_eq!(v["timing"], "stderr");
}

/// Every mutation of a valid document must exit with a documented code and
/// never crash (codes 101/134/139 would indicate a panic or abort).
#[test]
fn mutated_documents_never_crash() {
    let base = std::fs::read(golden("pauli_validate.json")).unwrap();
    let allowed = [0, 2, 3, 4, 5, 6];
    let dir = tempdir();
    let path = dir.join("fuzz.json");
    let check = |bytes: &[u8], label: String| {
        std::fs::write(&path, bytes).unwrap();
        let out = run(&["validate", "--in", path.to_str().unwrap()]);
        let code = out.status.code();
        assert!(
            code.is_some_and(|c| allowed.contains(&c)),
            "{label}: exit {code:?}, stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    };
    // truncations
    for len in (0..base.len()).step_by(37) {
        check(&base[..len], format!("truncation to {len}"));
    }
    // single-byte substitutions
    for pos in (0..base.len()).step_by(11) {
        for &b in &[b'0', b'9', b'{', b'}', b'"', b' ', 0xFFu8] {
            let mut m = base.clone();
            m[pos] = b;
            check(&m, format!("byte {pos} -> {b:#x}"));
        }
    }
}
