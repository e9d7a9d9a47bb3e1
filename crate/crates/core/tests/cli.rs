use std::path::Path;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn echelon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_echelon"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exit_codes() {
    let r1 = fixture("r1.toml");
    let phi = fixture("r1_phi.toml");
    for cmd in ["validate", "decompose", "modify", "ladder", "invariants"] {
        assert_eq!(echelon(&[cmd, "--in", &r1]).status.code(), Some(0), "{cmd}");
    }
    assert_eq!(echelon(&["extend", "--in", &phi]).status.code(), Some(0));
    assert_eq!(echelon(&["probe", "--in", &phi]).status.code(), Some(0));
    assert_eq!(
        echelon(&["poly", "--in", &fixture("crossed_pair.toml")])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(echelon(&["selftest"]).status.code(), Some(0));

    let bad = fixture("persistence_violation.toml");
    assert_eq!(echelon(&["validate", "--in", &bad]).status.code(), Some(1));
    assert_eq!(echelon(&["modify", "--in", &bad]).status.code(), Some(1));

    assert_eq!(echelon(&["extend", "--in", &r1]).status.code(), Some(2));
    assert_eq!(echelon(&["modify"]).status.code(), Some(2));
    assert_eq!(
        echelon(&["modify", "--in", "/nonexistent.toml"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(echelon(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        echelon(&["modify", "--in", &r1, "--field", "Fp:10"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn hypothesis_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture("r1_phi.toml"))
        .unwrap()
        .replace(r#"phi = ["y", "1"]"#, r#"phi = ["1", "1"]"#);
    let path = dir.path().join("phi.toml");
    std::fs::write(&path, text).unwrap();
    let out = echelon(&["extend", "--in", path.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["report"]["error"], "HypothesisFail");
    assert_eq!(v["report"]["detail"]["i"], 1);
}

#[test]
fn modify_text_and_json() {
    let out = echelon(&["modify", "--in", &fixture("r1.toml")]);
    let text = stdout(&out);
    assert!(
        text.contains("E_1 =\n  [ 1/y  0 ]\n  [   0  1 ]\n"),
        "{text}"
    );

    let out = echelon(&["modify", "--in", &fixture("r2.toml"), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["command", "status", "exit_code", "report"]);
    assert_eq!(v["report"]["ranks"], serde_json::json!([1, 1, 1]));
    assert!(v["report"]["stages"]
        .as_array()
        .unwrap()
        .iter()
        .all(|s| s["closed_form"] == true));
}

#[test]
fn deterministic_reports() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let r2 = fixture("r2.toml");
    for dir in [a.path(), b.path()] {
        let d = dir.to_str().unwrap();
        assert_eq!(
            echelon(&["ladder", "--in", &r2, "--seed", "9", "--trials", "15", "--out", d])
                .status
                .code(),
            Some(0)
        );
        assert_eq!(
            echelon(&[
                "probe",
                "--in",
                &fixture("r1_phi.toml"),
                "--seed",
                "4",
                "--out",
                d
            ])
            .status
            .code(),
            Some(0)
        );
        assert_eq!(
            echelon(&["gen", "--seed", "12", "--rank", "4", "--length", "3", "--out", d])
                .status
                .code(),
            Some(0)
        );
    }
    for f in [
        "ladder.json",
        "ladder.txt",
        "probe.json",
        "probe.txt",
        "gen.json",
        "gen.txt",
        "datum.toml",
    ] {
        let x = std::fs::read(a.path().join(f)).unwrap();
        let y = std::fs::read(b.path().join(f)).unwrap();
        assert_eq!(x, y, "{f}");
    }
}

fn gen_then(dir: &Path, seed: &str, field: &str) -> String {
    let d = dir.to_str().unwrap();
    assert_eq!(
        echelon(&["gen", "--seed", seed, "--field", field, "--out", d])
            .status
            .code(),
        Some(0)
    );
    dir.join("datum.toml").to_str().unwrap().to_string()
}

#[test]
fn generated_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (seed, field) in [("1", "Q"), ("2", "Fp:101"), ("3", "Q")] {
        let path = gen_then(dir.path(), seed, field);
        for cmd in ["validate", "decompose", "modify", "invariants"] {
            assert_eq!(
                echelon(&[cmd, "--in", &path]).status.code(),
                Some(0),
                "{cmd} on seed {seed}"
            );
        }
    }
}

#[test]
fn field_override() {
    let out = echelon(&[
        "modify",
        "--in",
        &fixture("r2.toml"),
        "--field",
        "Fp:7",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("1/y^2"));
}

#[test]
fn parse_errors_carry_locations() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    let text = std::fs::read_to_string(fixture("r1.toml"))
        .unwrap()
        .replace(r#""xy"]"#, r#""x y^"]"#);
    std::fs::write(&path, text).unwrap();
    let out = echelon(&["validate", "--in", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stdout(&out).contains("datum[0].filtration[0][1][1]"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn selftest_lists_checks() {
    let text = stdout(&echelon(&["selftest"]));
    assert_eq!(
        text.lines().filter(|l| l.starts_with("ok")).count(),
        6,
        "{text}"
    );
}
