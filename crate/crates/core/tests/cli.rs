use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use simgcf::dataset::two_block;

fn simgcf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_simgcf")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> Output {
    let out = simgcf(args);
    assert!(
        out.status.success(),
        "simgcf {args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Writes a small two-block interaction file and prepares a split from it.
fn prepared(root: &Path) -> PathBuf {
    let raw = root.join("raw.tsv");
    let text: String = two_block(40, 30, 6, 1)
        .unwrap()
        .interactions()
        .iter()
        .map(|(u, i)| format!("u{u}\ti{i}\n"))
        .collect();
    std::fs::write(&raw, text).unwrap();
    let split = root.join("split");
    ok(&["prepare", "--input", s(&raw), "--out", s(&split), "--seed", "3"]);
    split
}

fn losses(run: &Path) -> Vec<f64> {
    std::fs::read_to_string(run.join("telemetry.jsonl"))
        .unwrap()
        .lines()
        .map(|l| {
            serde_json::from_str::<serde_json::Value>(l).unwrap()["loss"]
                .as_f64()
                .unwrap()
        })
        .collect()
}

#[test]
fn exit_codes() {
    assert_eq!(simgcf(&["--help"]).status.code(), Some(0));
    assert_eq!(simgcf(&[]).status.code(), Some(1));
    assert_eq!(simgcf(&["train", "--bogus"]).status.code(), Some(1));
    assert_eq!(
        simgcf(&["prepare", "--input", "/nonexistent/raw.tsv", "--out", "/tmp/x"])
            .status
            .code(),
        Some(2)
    );
    let corrupt = simgcf(&["analyze", "--case-graph", "--corrupt-signs"]);
    assert_eq!(corrupt.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&corrupt.stderr).contains("parity-signs"));
    assert_eq!(simgcf(&["analyze", "--case-graph"]).status.code(), Some(0));
}

#[test]
fn invalid_config_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.toml");
    std::fs::write(&cfg, "[train]\nlearnin_rate = 0.1\n").unwrap();
    let out = simgcf(&["--config", s(&cfg), "analyze", "--case-graph"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("learnin_rate"));
}

#[test]
fn fit_filter_halves_a_flat_backbone() {
    let out = ok(&[
        "fit-filter",
        "--basis",
        "monomial",
        "--coefficients",
        "1,0,0,0",
        "--mu",
        "1",
        "--alpha",
        "0",
        "--beta",
        "0",
    ]);
    let spec: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let fitted: Vec<f64> = spec["fitted_coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(fitted.len(), 4);
    assert!((fitted[0] - 0.5).abs() < 1e-9, "{fitted:?}");
    assert!(fitted[1..].iter().all(|c| c.abs() < 1e-9), "{fitted:?}");
}

#[test]
fn fit_filter_residual_gate() {
    let out = simgcf(&["fit-filter", "--degree", "1", "--max-residual", "1e-12"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn flags_override_config_keys() {
    let tmp = tempfile::tempdir().unwrap();
    let split = prepared(tmp.path());
    let cfg = tmp.path().join("run.toml");
    std::fs::write(
        &cfg,
        "[train]\nmax_epochs = 5\nbatch_size = 64\nembedding_dim = 8\nearly_stop_patience = 100\n",
    )
    .unwrap();
    let run = tmp.path().join("run");
    ok(&[
        "--config",
        s(&cfg),
        "train",
        "--split",
        s(&split),
        "--out",
        s(&run),
        "--epochs",
        "2",
    ]);
    assert_eq!(losses(&run).len(), 2);
    let saved = std::fs::read_to_string(run.join("config.toml")).unwrap();
    let saved = simgcf::RunConfig::from_toml(&saved).unwrap();
    assert_eq!(saved.train.max_epochs, 2);
    assert_eq!(saved.train.batch_size, 64);
    assert_eq!(saved.train.embedding_dim, 8);
}

#[test]
fn resume_matches_an_uninterrupted_run() {
    let tmp = tempfile::tempdir().unwrap();
    let split = prepared(tmp.path());
    let common = [
        "--batch-size",
        "64",
        "--dim",
        "8",
        "--patience",
        "100",
        "--variant",
        "III",
    ];
    let full = tmp.path().join("full");
    let parts = tmp.path().join("parts");

    let mut args = vec!["train", "--split", s(&split), "--out", s(&full), "--epochs", "4"];
    args.extend(common);
    ok(&args);

    let mut args = vec!["train", "--split", s(&split), "--out", s(&parts), "--epochs", "2"];
    args.extend(common);
    ok(&args);
    let mut args = vec![
        "train",
        "--split",
        s(&split),
        "--out",
        s(&parts),
        "--epochs",
        "4",
        "--resume",
    ];
    args.extend(common);
    ok(&args);

    assert_eq!(losses(&full), losses(&parts));
    assert_eq!(
        std::fs::read(full.join("model.bin")).unwrap(),
        std::fs::read(parts.join("model.bin")).unwrap()
    );

    let mut args = vec![
        "train",
        "--split",
        s(&split),
        "--out",
        s(&parts),
        "--epochs",
        "6",
        "--resume",
    ];
    args.extend(common);
    args.extend(["--sampler-seed", "99"]);
    assert_eq!(simgcf(&args).status.code(), Some(1));
}

#[test]
fn evaluate_and_report() {
    let tmp = tempfile::tempdir().unwrap();
    let split = prepared(tmp.path());
    let pop = tmp.path().join("pop.json");
    ok(&[
        "evaluate",
        "--split",
        s(&split),
        "--popularity",
        "--ks",
        "5,10",
        "--json",
        s(&pop),
    ]);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&pop).unwrap()).unwrap();
    let recall = report["metrics"]["10"]["recall"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&recall));

    let svg = tmp.path().join("bars.svg");
    let named = format!("popularity={}", s(&pop));
    let out = ok(&["report", &named, "--svg", s(&svg)]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("popularity"));
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn analyze_writes_heatmaps_and_json() {
    let tmp = tempfile::tempdir().unwrap();
    let json = tmp.path().join("analysis.json");
    let svgs = tmp.path().join("svg");
    ok(&[
        "analyze",
        "--random",
        "--seed",
        "3",
        "--nodes",
        "12",
        "--json",
        s(&json),
        "--svg",
        s(&svgs),
    ]);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert!(report["checks"].as_array().is_some_and(|c| !c.is_empty()));
    assert!(std::fs::read_dir(&svgs).unwrap().count() > 0);
}
