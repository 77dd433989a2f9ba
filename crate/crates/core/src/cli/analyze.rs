use std::fs;

use crate::config::RunConfig;
use crate::dataset::SplitDataset;
use crate::error::{Error, Result};
use crate::graph::build_normalized_adjacency;
use crate::lab::graphs::{case_label, node_name};
use crate::lab::{analyze, build_case_graph, random_bipartite, AnalysisOptions, AnalysisReport};
use crate::svg;

use super::table::Table;
use super::{write_atomic, AnalyzeArgs};

pub(super) fn run(args: AnalyzeArgs, _cfg: RunConfig) -> Result<()> {
    let (adj, case) = if args.case_graph {
        (build_case_graph(), true)
    } else if args.random {
        if args.nodes < 2 {
            return Err(Error::Config("--nodes must be ≥ 2".into()));
        }
        let users = args.nodes / 2;
        (
            random_bipartite(users, args.nodes - users, args.density, args.seed)?,
            false,
        )
    } else if let Some(dir) = &args.split {
        (build_normalized_adjacency(&SplitDataset::read_from_dir(dir)?)?, false)
    } else {
        return Err(Error::Config("choose one of --case-graph, --random or --split".into()));
    };

    let defaults = AnalysisOptions::default();
    let opts = AnalysisOptions {
        alphas: args.coefficients.clone().unwrap_or(defaults.alphas),
        embedding_dim: args.dim.unwrap_or(defaults.embedding_dim),
        embedding_seed: args.embedding_seed.unwrap_or(defaults.embedding_seed),
        corrupt_signs: args.corrupt_signs,
        cap: defaults.cap,
    };
    let report = analyze(&adj, &opts).map_err(|e| match e {
        Error::DenseCapExceeded { nodes, cap } => Error::Config(format!(
            "graph has {nodes} nodes, above the dense cap of {cap}; use a smaller graph"
        )),
        other => other,
    })?;

    let labels: Vec<String> = (0..adj.node_count())
        .map(|v| {
            let name = node_name(v, adj.user_count());
            match case.then(|| case_label(v)).flatten() {
                Some(l) => format!("{l}:{name}"),
                None => name,
            }
        })
        .collect();
    print!("{}", render(&report));

    if let Some(dir) = &args.svg {
        fs::create_dir_all(dir)?;
        for (name, m) in &report.heatmaps {
            let title = format!("{name} (n = {})", opts.alphas.len() - 1);
            write_atomic(
                &dir.join(format!("{name}.svg")),
                svg::heatmap(m, &labels, &title).as_bytes(),
            )?;
        }
    }
    if let Some(path) = &args.json {
        write_atomic(path, (serde_json::to_string_pretty(&report)? + "\n").as_bytes())?;
    }
    report.into_result().map(|_| ())
}

fn render(report: &AnalysisReport) -> String {
    let eig: Vec<String> = report.eigenvalues.iter().map(|l| format!("{l:+.6}")).collect();
    let mut out = format!(
        "graph: {} users, {} items; alphas {:?}{}\neigenvalues: {}\n\n",
        report.user_count,
        report.item_count,
        report.alphas,
        if report.corrupt_signs { " (signs corrupted)" } else { "" },
        eig.join(" ")
    );
    let mut t = Table::new(["check", "value", "tolerance", "result"]);
    for c in &report.checks {
        t.row([
            c.name.clone(),
            format!("{:.3e}", c.value),
            format!("{:.0e}", c.tolerance),
            if c.passed { "pass" } else { "FAIL" }.to_string(),
        ]);
    }
    out.push_str(&t.render());
    out.push('\n');
    let mut p = Table::new(["quadrant", "pairs", "excluded", "sign violations", "decay violations"]);
    for r in &report.parity {
        p.row([
            r.quadrant.to_string(),
            r.pairs.len().to_string(),
            r.excluded.to_string(),
            r.sign_violations().to_string(),
            r.decay_violations.len().to_string(),
        ]);
    }
    out.push_str(&p.render());
    out
}
