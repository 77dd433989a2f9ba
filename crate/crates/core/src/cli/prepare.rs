use crate::config::RunConfig;
use crate::dataset::{load_interactions, split_dataset, write_id_map, SplitRatios};
use crate::error::Result;

use super::table::Table;
use super::{require_path, PrepareArgs};

pub(super) fn run(args: PrepareArgs, mut cfg: RunConfig) -> Result<()> {
    if let Some(f) = args.format {
        cfg.data.format = f;
    }
    if let Some(seed) = args.seed {
        cfg.split.seed = seed;
    }
    if let Some(r) = &args.ratios {
        cfg.split.ratios = SplitRatios::new(r[0], r[1], r[2])?;
    }
    let input = require_path(args.input, cfg.data.input.clone(), "--input")?;
    let out = require_path(args.out, cfg.data.split_dir.clone(), "--out")?;

    let ds = load_interactions(&input, cfg.data.format)?;
    let split = split_dataset(&ds, cfg.split.ratios, cfg.split.seed)?;
    split.write_to_dir(&out)?;
    write_id_map(ds.user_ids(), &out.join("users.tsv"))?;
    write_id_map(ds.item_ids(), &out.join("items.tsv"))?;
    log::info!("wrote split to {}", out.display());

    let counts = split.counts();
    let mut t = Table::new([
        "users",
        "items",
        "interactions",
        "sparsity",
        "train",
        "validation",
        "test",
    ]);
    t.row([
        ds.user_count().to_string(),
        ds.item_count().to_string(),
        ds.interactions().len().to_string(),
        format!("{:.5}", ds.sparsity()),
        counts.train.to_string(),
        counts.validation.to_string(),
        counts.test.to_string(),
    ]);
    print!("{}", t.render());
    Ok(())
}
