//! The JSON artifacts of a full CLI run validate against the schemas in
//! `docs/schemas`.

use std::path::Path;
use std::process::Command;

use serde_json::Value;
use simgcf::dataset::two_block;

fn schema(name: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../docs/schemas")
        .join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn check(validator: &jsonschema::Validator, doc: &Value, what: &str) {
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{what}: {errors:?}\n{doc:#}");
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn run(args: &[&str]) {
    let out = Command::new(env!("CARGO_BIN_EXE_simgcf")).args(args).output().unwrap();
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn cli_artifacts_match_the_schemas() {
    let tmp = tempfile::tempdir().unwrap();
    let root = tmp.path();
    let raw = root.join("raw.tsv");
    let text: String = two_block(40, 30, 10, 8)
        .unwrap()
        .interactions()
        .iter()
        .map(|(u, i)| format!("u{u}\ti{i}\n"))
        .collect();
    std::fs::write(&raw, text).unwrap();
    let p = |name: &str| root.join(name).to_str().unwrap().to_owned();

    run(&["prepare", "--input", &p("raw.tsv"), "--out", &p("split")]);
    run(&["fit-filter", "--quadrant", "III", "--out", &p("filter.json")]);
    run(&[
        "fit-filter",
        "--basis",
        "monomial",
        "--coefficients",
        "1,0.5",
        "--no-scaler",
        "--out",
        &p("mono.json"),
    ]);
    run(&[
        "train",
        "--split",
        &p("split"),
        "--out",
        &p("run"),
        "--epochs",
        "2",
        "--dim",
        "8",
        "--batch-size",
        "64",
    ]);
    run(&[
        "evaluate",
        "--split",
        &p("split"),
        "--model",
        &p("run"),
        "--ks",
        "5,20",
        "--json",
        &p("eval.json"),
    ]);
    run(&[
        "evaluate",
        "--split",
        &p("split"),
        "--popularity",
        "--which",
        "validation",
        "--json",
        &p("pop.json"),
    ]);

    check(
        &schema("manifest.schema.json"),
        &read(&root.join("split/manifest.json")),
        "manifest",
    );
    let filter = schema("filter.schema.json");
    for f in ["filter.json", "mono.json", "run/filter.json"] {
        check(&filter, &read(&root.join(f)), f);
    }
    let telemetry = schema("telemetry.schema.json");
    let lines = std::fs::read_to_string(root.join("run/telemetry.jsonl")).unwrap();
    assert_eq!(lines.lines().count(), 2);
    for line in lines.lines() {
        check(&telemetry, &serde_json::from_str(line).unwrap(), "telemetry");
    }
    let report = schema("eval-report.schema.json");
    check(&report, &read(&root.join("eval.json")), "eval");
    check(&report, &read(&root.join("pop.json")), "popularity eval");
}

#[test]
fn schemas_reject_malformed_documents() {
    let report = schema("eval-report.schema.json");
    let bad = serde_json::json!({
        "split": "test",
        "metrics": { "10": { "recall": 1.5, "ndcg": 0.1 } },
        "evaluated_users": 3,
        "timestamp": 0
    });
    assert!(!report.is_valid(&bad));
    let filter = schema("filter.schema.json");
    assert!(!filter
        .is_valid(&serde_json::json!({ "basis": "chebyshev", "degree": 3, "quadrant": "I", "space_flip": false })));
    let manifest = schema("manifest.schema.json");
    assert!(!manifest.is_valid(&serde_json::json!({ "format_version": 2 })));
}
