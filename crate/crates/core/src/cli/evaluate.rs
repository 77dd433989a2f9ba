use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use crate::config::RunConfig;
use crate::dataset::{SplitDataset, SplitKind};
use crate::error::Result;
use crate::evaluation::{evaluate, EvalReport, PopularityModel};
use crate::graph::build_normalized_adjacency;
use crate::propagation::EmbeddingModel;

use super::table::Table;
use super::train::MODEL_FILE;
use super::{require_path, write_atomic, EvaluateArgs};

pub(super) fn run(args: EvaluateArgs, cfg: RunConfig) -> Result<()> {
    let split_dir = require_path(args.split, cfg.data.split_dir.clone(), "--split")?;
    let split = SplitDataset::read_from_dir(&split_dir)?;
    let ks = args.ks.unwrap_or(cfg.eval.ks.clone());
    if args.which == SplitKind::Train {
        log::warn!(
            "evaluating on the train split: every train item is masked, so these numbers are not for model selection"
        );
    }
    let report = if args.popularity {
        evaluate(&PopularityModel::fit(&split), &split, args.which, &ks)?
    } else {
        let mut path: PathBuf = args.model.expect("clap requires --model without --popularity");
        if path.is_dir() {
            path = path.join(MODEL_FILE);
        }
        let mut model = EmbeddingModel::read_checkpoint(BufReader::new(File::open(&path)?), &path)?;
        let adj = build_normalized_adjacency(&split)?;
        model.refresh(&adj)?;
        evaluate(&model, &split, args.which, &ks)?
    };
    if let Some(path) = &args.json {
        write_atomic(path, (serde_json::to_string_pretty(&report)? + "\n").as_bytes())?;
    }
    print!("{}", render(&report));
    Ok(())
}

pub(super) fn render(report: &EvalReport) -> String {
    let mut t = Table::new(["k", "recall", "ndcg"]);
    for (k, m) in &report.metrics {
        t.row([k.to_string(), format!("{:.4}", m.recall), format!("{:.4}", m.ndcg)]);
    }
    format!(
        "split: {} ({} users)\n{}",
        report.split.label(),
        report.evaluated_users,
        t.render()
    )
}
