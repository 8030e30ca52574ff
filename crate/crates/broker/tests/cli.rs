use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name]
        .iter()
        .collect();
    p.display().to_string()
}

fn oncredit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oncredit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn agree_prints_configuration() {
    let o = oncredit(&["agree", &fixture("toys.contract")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("agreement on {a,b,c}"));
    let o = oncredit(&["agree", &fixture("toys_standard.contract")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn agree_composes_files() {
    let o = oncredit(&[
        "agree",
        &fixture("alice.contract"),
        &fixture("bob.contract"),
        &fixture("carl.contract"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("{a,b,c}"));
}

#[test]
fn check_decides_configurations() {
    let toys = fixture("toys.contract");
    assert_eq!(
        oncredit(&["check", &toys, "--state", "a"]).status.code(),
        Some(1)
    );
    let o = oncredit(&["check", &toys, "--state", "a,b,c", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["configuration"], true);
    let order: Vec<&str> = v["witness"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["event"].as_str().unwrap())
        .collect();
    assert_eq!(order, ["c", "b", "a"]);
    assert_eq!(
        oncredit(&["check", &toys, "--state", "-"]).status.code(),
        Some(0)
    );
    assert_eq!(
        oncredit(&["check", &toys, "--state", "a", "--credit", "a"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn reach_lists_events() {
    let o = oncredit(&["reach", &fixture("toys.contract")]);
    assert_eq!(stdout(&o), "a\nb\nc\n");
    let o = oncredit(&["reach", &fixture("toys_standard.contract"), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["reachable"], serde_json::json!([]));
    let o = oncredit(&["reach", &fixture("toys_standard.contract"), "--credit", "c"]);
    assert_eq!(stdout(&o), "a\nb\nc\n");
}

#[test]
fn duties_and_theorem3() {
    let toys = fixture("toys.contract");
    let o = oncredit(&["duties", &toys, "--state", "b,c", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["culpable"], serde_json::json!(["A"]));
    assert_eq!(v["duties"]["A"], serde_json::json!(["a"]));
    let o = oncredit(&["duties", &toys, "--participant", "C"]);
    assert!(stdout(&o).contains("C: c (culpable)"));
    let o = oncredit(&["theorem3", &fixture("chain.contract")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "ok\n");
    assert_eq!(
        oncredit(&["theorem3", &fixture("toys_standard.contract")])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn encode_and_prove() {
    let toys = fixture("toys.contract");
    let o = oncredit(&["encode", &toys]);
    assert!(stdout(&o).starts_with("(A says ((B says b) -> a))"));
    let o = oncredit(&["prove", &toys, "--goal", "c", "--print-proof"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("cimpl-L"));
    let o = oncredit(&["prove", &fixture("toys_standard.contract"), "--goal", "c"]);
    assert_eq!(o.status.code(), Some(1));
    let o = oncredit(&[
        "prove",
        &fixture("toys_standard.contract"),
        "--goal",
        "a",
        "--hyp",
        "c",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = oncredit(&[
        "prove",
        "--formula",
        "a /\\ b",
        "--context",
        "(a -->> b) /\\ (b -->> a)",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = oncredit(&[
        "prove",
        "--formula",
        "a",
        "--context",
        "b -> a",
        "--context",
        "a -> b",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sessions() {
    let toys = fixture("toys.contract");
    let o = oncredit(&["session", &toys]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("verdict: all fulfilled\n"));
    let o = oncredit(&["session", &toys, "--strategy", "C=dishonest-after:0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("culpable: C"));
    let a = oncredit(&["session", &toys, "--strategy", "A=lazy", "--json"]);
    let b = oncredit(&["session", &toys, "--strategy", "A=lazy", "--json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn broker_finds_subsets() {
    let o = oncredit(&[
        "broker",
        &fixture("alice.contract"),
        &fixture("bob.contract"),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = oncredit(&[
        "broker",
        &fixture("alice.contract"),
        &fixture("bob.contract"),
        &fixture("carl.contract"),
        &fixture("chain.contract"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("configuration {a,a0,a1,a2,a3,b,c}"));
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.contract");
    std::fs::write(&bad, "participant A\nevent a @ Z\n").unwrap();
    let o = oncredit(&["agree", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("bad.contract:2:"), "{err}");

    let toys = fixture("toys.contract");
    assert_eq!(
        oncredit(&["check", &toys, "--state", "zz"]).status.code(),
        Some(2)
    );
    assert_eq!(
        oncredit(&["session", &toys, "--strategy", "Q=honest"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        oncredit(&["session", &toys, "--strategy", "C=sneaky"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        oncredit(&["session", &fixture("toys_standard.contract")])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        oncredit(&["agree", "/nonexistent/file"]).status.code(),
        Some(2)
    );
    assert_eq!(oncredit(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        oncredit(&["prove", "--formula", "a /\\"]).status.code(),
        Some(2)
    );
    let clash = dir.path().join("clash.contract");
    std::fs::write(&clash, "participant B\nevent a @ B\n").unwrap();
    assert_eq!(
        oncredit(&["agree", &toys, clash.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn validate_warns() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("w.contract");
    std::fs::write(&f, "participant A\nparticipant B\nevent a @ A\nenable a |- a\nenable - ||- a\nenable a ||- a\nok A : a\n").unwrap();
    let o = oncredit(&["validate", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("B has no goal"));
    assert!(out.contains("can never fire"));
    assert!(out.contains("subsumed"));
}
