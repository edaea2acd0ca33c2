use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_noetherian"))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn schema(name: &str) -> Value {
    let p = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../docs/schema")
        .join(name);
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn assert_valid(schema_name: &str, doc: &Value) {
    let v = jsonschema::validator_for(&schema(schema_name)).unwrap();
    let errors: Vec<String> = v.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");
}

struct Files {
    _dir: tempfile::TempDir,
    f3: PathBuf,
    identity: PathBuf,
    duplicate: PathBuf,
    dir: PathBuf,
}

fn files() -> Files {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_path_buf();
    Files {
        f3: write(&path, "f3.json", r#"{"table":[2,0,1],"tail_offset":3}"#),
        identity: write(&path, "id.json", r#"{"table":[],"tail_offset":0}"#),
        duplicate: write(&path, "dup.json", r#"{"table":[2,0,2],"tail_offset":3}"#),
        dir: path,
        _dir: dir,
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn chain_reports_are_schema_valid() {
    let fx = files();
    for cmd in ["flat-chain", "sharp-chain"] {
        for inj in [&fx.f3, &fx.identity] {
            let out = run(&["verify", cmd, "--injection", s(inj), "--stages", "8"]);
            assert_eq!(
                out.status.code(),
                Some(0),
                "{}",
                String::from_utf8_lossy(&out.stderr)
            );
            let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
            assert_valid("chain-report.schema.json", &doc);
            assert_eq!(doc["steps"].as_array().unwrap().len(), 8);
        }
    }
}

#[test]
fn schema_rejects_foreign_documents() {
    let doc = serde_json::json!({"command": "flat-chain", "ok": true});
    let v = jsonschema::validator_for(&schema("chain-report.schema.json")).unwrap();
    assert!(!v.is_valid(&doc));
}

#[test]
fn malformed_inputs_exit_2() {
    let fx = files();
    let out = run(&["verify", "flat-chain", "--injection", s(&fx.duplicate)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("twice"));
    let missing = fx.dir.join("missing.json");
    assert_eq!(
        run(&["verify", "sharp-chain", "--injection", s(&missing)])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["verify", "flat-chain"]).status.code(), Some(2));
    let unwritable = fx.dir.join("no/such/dir/out.json");
    let out = run(&[
        "export",
        "truestages",
        "--injection",
        s(&fx.f3),
        "--out",
        s(&unwritable),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["export", "xi", "--injection", s(&fx.f3), "--format", "text"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn true_stage_export() {
    let fx = files();
    let out = run(&["export", "truestages", "--injection", s(&fx.f3), "--stages", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(
        doc,
        serde_json::json!([[], [], [1], [1, 2], [1, 2, 3], [1, 2, 3, 4]])
    );
}

#[test]
fn xi_export_of_the_identity_is_a_chain() {
    let fx = files();
    let out = run(&[
        "export",
        "xi",
        "--injection",
        s(&fx.identity),
        "--stages",
        "4",
        "--format",
        "dot",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let dot = String::from_utf8(out.stdout).unwrap();
    let solid = dot
        .lines()
        .filter(|l| l.contains("->") && !l.contains("dashed"))
        .count();
    assert_eq!(solid, 3);
    let json = run(&["export", "xi", "--injection", s(&fx.identity), "--stages", "4"]);
    let doc: Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(doc["less"].as_array().unwrap().len(), 6);
}

#[test]
fn exports_are_deterministic() {
    let fx = files();
    let a = fx.dir.join("a.json");
    let b = fx.dir.join("b.json");
    for out in [&a, &b] {
        let st = run(&[
            "export",
            "chain",
            "--injection",
            s(&fx.f3),
            "--mode",
            "sharp",
            "--out",
            s(out),
        ]);
        assert_eq!(st.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let order = write(
        &fx.dir,
        "order.json",
        r#"{"kind":"finite","elements":4,"le":[[0,1],[2,3]]}"#,
    );
    let args = [
        "verify",
        "translate",
        "--order",
        s(&order),
        "--samples",
        "40",
        "--seed",
        "7",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let doc: Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_valid("check-report.schema.json", &doc);
    assert_eq!(doc["seed"], 7);
}

#[test]
fn other_verifications() {
    let fx = files();
    let omega_star = write(&fx.dir, "ostar.json", r#"{"kind":"omega_star"}"#);
    let out = run(&["verify", "round-trip", "--order", s(&omega_star), "--len", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_valid("check-report.schema.json", &doc);
    assert_eq!(doc["details"]["strict_steps"], 6);

    let out = run(&[
        "verify",
        "copy-position",
        "--injection",
        s(&fx.f3),
        "--stages",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["verify", "decode", "--injection", s(&fx.f3), "--limit", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(
        doc["details"]["in_range"],
        serde_json::json!([0, 1, 2, 6, 7, 8, 9])
    );

    let omega = write(
        &fx.dir,
        "omega.json",
        r#"{"kind":"finite","elements":3,"le":[[0,1],[1,2]]}"#,
    );
    let out = run(&["search", "bad", "--order", s(&omega), "--len", "4"]);
    assert_eq!(out.status.code(), Some(1));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["verdict"], "exhausted");
}
