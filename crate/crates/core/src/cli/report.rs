use std::fs;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::evaluation::EvalReport;
use crate::svg;

use super::table::Table;
use super::{write_atomic, ReportArgs};

pub(super) fn run(args: ReportArgs) -> Result<()> {
    let mut names = Vec::new();
    let mut reports = Vec::new();
    for spec in &args.reports {
        let (name, path) = spec
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected name=path, got {spec:?}")))?;
        let path = PathBuf::from(path);
        let report: EvalReport = serde_json::from_str(&fs::read_to_string(&path)?)?;
        names.push(name.to_string());
        reports.push(report);
    }
    let mut ks: Vec<usize> = reports.iter().flat_map(|r| r.metrics.keys().copied()).collect();
    ks.sort_unstable();
    ks.dedup();
    let metrics: Vec<String> = ks
        .iter()
        .flat_map(|k| [format!("recall@{k}"), format!("ndcg@{k}")])
        .collect();
    let value = |r: &EvalReport, m: usize| -> Option<f64> {
        let k = ks[m / 2];
        if m.is_multiple_of(2) {
            r.recall(k)
        } else {
            r.ndcg(k)
        }
    };

    let mut t = Table::new(std::iter::once("metric".to_string()).chain(names.iter().cloned()));
    for (m, metric) in metrics.iter().enumerate() {
        let cells = reports
            .iter()
            .map(|r| value(r, m).map_or_else(|| "-".to_string(), |v| format!("{v:.4}")));
        t.row(std::iter::once(metric.clone()).chain(cells));
    }
    let splits: Vec<&str> = reports.iter().map(|r| r.split.label()).collect();
    println!("split: {}", splits.join(", "));
    print!("{}", t.render());

    if let Some(path) = &args.svg {
        let values: Vec<Vec<f64>> = reports
            .iter()
            .map(|r| (0..metrics.len()).map(|m| value(r, m).unwrap_or(0.0)).collect())
            .collect();
        write_atomic(
            path,
            svg::metric_bars(&metrics, &names, &values, "evaluation").as_bytes(),
        )?;
    }
    Ok(())
}
