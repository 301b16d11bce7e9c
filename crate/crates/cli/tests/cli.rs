use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(rel)
}

/// `folast` with a clean FOLAST_* environment and the exemplar script.
fn folast() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_folast"));
    for (k, _) in std::env::vars() {
        if k.starts_with("FOLAST_") {
            cmd.env_remove(k);
        }
    }
    cmd.arg("--script").arg(fixture("scripts/exemplars.jsonl"));
    cmd
}

fn run(cmd: &mut Command) -> (i32, String, String) {
    let Output { status, stdout, stderr } = cmd.output().unwrap();
    (status.code().unwrap(), String::from_utf8(stdout).unwrap(), String::from_utf8(stderr).unwrap())
}

const COFFEE: &str = "All people who regularly drink coffee are dependent on caffeine.";

#[test]
fn translate_prints_ast_and_target() {
    let (code, out, _) = run(folast().args(["translate", COFFEE]));
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    let ast: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(ast["quantifier"], "ForAll");
    assert_eq!(lines[1], "∀x (Drink(x) → Dependent(x))");

    let (code, out, _) = run(folast().args(["--target", "smtlib2", "translate", "Alice loves Bob."]));
    assert_eq!(code, 0);
    assert!(out.contains("(declare-fun Love (Object Object) Bool)"));
    assert!(out.contains("(assert (Love Alice Bob))"));
}

#[test]
fn translate_segments_documents() {
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("doc.txt");
    std::fs::write(&doc, "Alice is tall. Alice loves Bob.\n").unwrap();
    let out_file = dir.path().join("out/translations.json");
    let (code, out, _) = run(folast().arg("--out").arg(&out_file).arg("translate").arg("--file").arg(&doc));
    assert_eq!(code, 0);
    assert!(out.contains("Tall(Alice)") && out.contains("Love(Alice, Bob)"), "{out}");
    let written: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out_file).unwrap()).unwrap();
    assert_eq!(written.as_array().unwrap().len(), 2);
    assert!(written[0]["trace"]["steps"].is_array());
}

#[test]
fn environment_fills_flags_and_flags_win() {
    let (_, out, _) = run(folast().env("FOLAST_TARGET", "smtlib2").args(["translate", "Alice is tall."]));
    assert!(out.contains("(assert (Tall Alice))"), "{out}");
    let (_, out, _) =
        run(folast().env("FOLAST_TARGET", "smtlib2").args(["--target", "fol", "translate", "Alice is tall."]));
    assert!(out.lines().any(|l| l == "Tall(Alice)"), "{out}");

    let mut cmd = Command::new(env!("CARGO_BIN_EXE_folast"));
    cmd.env("FOLAST_SCRIPT", fixture("scripts/exemplars.jsonl")).args(["translate", "Alice is tall."]);
    assert_eq!(run(&mut cmd).0, 0);
}

#[test]
fn classify_socrates() {
    let dir = tempfile::tempdir().unwrap();
    let out_file = dir.path().join("prediction.json");
    let (code, out, _) = run(folast()
        .arg("--out")
        .arg(&out_file)
        .args(["classify", "--cross-check", "--premises"])
        .arg(fixture("socrates_premises.txt"))
        .args(["--hypothesis", "Socrates is mortal."]));
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("entailment"));
    assert!(out.contains("premises_unsat=false"));
    assert!(out.contains("oracle: no countermodel up to size 3"));
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out_file).unwrap()).unwrap();
    assert_eq!(doc["prediction"]["label"], "entailment");
    assert_eq!(doc["prediction"]["traces"].as_array().unwrap().len(), 3);

    let (code, out, _) = run(folast()
        .args(["classify", "--premises"])
        .arg(fixture("socrates_premises.txt"))
        .args(["--hypothesis", "Socrates is not mortal."]));
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("contradiction"));
}

#[test]
fn bench_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = run(folast().arg("--out").arg(dir.path()).arg("bench").arg(fixture("datasets/bench4.jsonl")));
    assert_eq!(code, 0);
    assert!(out.contains("syntax rate            0.9000"), "{out}");
    assert!(out.contains("invalid nodes               1"), "{out}");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["syntax_rate"], 0.9);
    assert_eq!(report["accuracy"], 0.75);
    assert_eq!(report["error_counts"]["invalid_nodes"], 1);
    assert!(dir.path().join("report.txt").exists());
    assert!(dir.path().join("traces/instance-00003.json").exists());
}

#[test]
fn validate_documents() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    std::fs::write(&good, r#"{"kind":"atomic","relation":"Tall","args":[{"kind":"constant","name":"Alice"}]}"#)
        .unwrap();
    let (code, out, _) = run(folast().arg("validate").arg(&good));
    assert_eq!(code, 0);
    assert_eq!(serde_json::from_str::<serde_json::Value>(&out).unwrap()["ok"], true);

    let free = dir.path().join("free.json");
    std::fs::write(&free, r#"{"kind":"atomic","relation":"Tall","args":[{"kind":"variable","name":"x"}]}"#).unwrap();
    let (code, out, _) = run(folast().arg("validate").arg(&free));
    assert_eq!(code, 1);
    assert_eq!(serde_json::from_str::<serde_json::Value>(&out).unwrap()["ok"], false);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad_data = dir.path().join("bad.jsonl");
    std::fs::write(&bad_data, "{\"premises\": [\"A.\"], \"hypothesis\": \"B.\", \"label\": \"uncertain\"}\n{oops\n")
        .unwrap();
    let premises = fixture("socrates_premises.txt");

    let cases: Vec<(i32, Command, &str)> = vec![
        (
            1,
            {
                let mut c = folast();
                c.args(["translate", "Sophia is kind"]);
                c
            },
            "invalid node",
        ),
        (
            1,
            {
                let mut c = folast();
                c.args(["translate", "Every cat sleeps."]);
                c
            },
            "missing node",
        ),
        (
            1,
            {
                let mut c = folast();
                c.args(["--bogus-flag", "translate", "x"]);
                c
            },
            "--bogus-flag",
        ),
        (
            1,
            {
                let mut c = folast();
                c.args(["bench", "/nonexistent/data.jsonl"]);
                c
            },
            "cannot read",
        ),
        (
            1,
            {
                let mut c = folast();
                c.arg("bench").arg(&bad_data);
                c
            },
            "line 2",
        ),
        (
            1,
            {
                let mut c = folast();
                c.args(["--backend", "http", "translate", "Alice sings."]);
                c
            },
            "--endpoint",
        ),
        (
            1,
            {
                let mut c = folast();
                c.args(["--timeout-ms", "0", "translate", "Alice sings."]);
                c
            },
            "positive",
        ),
        (
            1,
            {
                let mut c = Command::new(env!("CARGO_BIN_EXE_folast"));
                c.env_remove("FOLAST_SCRIPT").args(["translate", "Alice sings."]);
                c
            },
            "--script",
        ),
        (
            1,
            {
                let mut c = folast();
                c.arg("validate").arg(fixture("datasets/bench4.jsonl"));
                c
            },
            "decoding",
        ),
        (
            2,
            {
                let mut c = folast();
                c.args(["translate", "Never scripted."]);
                c
            },
            "no scripted response",
        ),
        (
            2,
            {
                let mut c = folast();
                c.args(["--solver-cmd", "no-such-solver-9", "classify", "--premises"])
                    .arg(&premises)
                    .args(["--hypothesis", "Socrates is mortal."]);
                c
            },
            "not found",
        ),
        (
            2,
            {
                let mut c = folast();
                c.args(["--solver-cmd", "no-such-solver-9", "bench"]).arg(fixture("datasets/bench4.jsonl"));
                c
            },
            "not found",
        ),
        // exhausted transport retries count as a missing node, not an outage
        (
            1,
            {
                let mut c = folast();
                c.args([
                    "--backend",
                    "http",
                    "--endpoint",
                    "http://127.0.0.1:9/v1",
                    "--model",
                    "m",
                    "--timeout-ms",
                    "500",
                    "classify",
                    "--premises",
                ])
                .arg(&premises)
                .args(["--hypothesis", "Socrates is mortal."]);
                c
            },
            "missing node: transport failure",
        ),
    ];
    for (expected, mut cmd, needle) in cases {
        let (code, _, err) = run(&mut cmd);
        assert_eq!(code, expected, "{cmd:?}\n{err}");
        assert!(err.contains(needle), "{cmd:?}: {err}");
    }
}
