use std::fs::{self, File, OpenOptions};
use std::io::{BufReader, BufWriter, Write};

use crate::config::RunConfig;
use crate::dataset::SplitDataset;
use crate::error::{Error, Result};
use crate::filters::{sample_points, FilterSpec};
use crate::graph::build_normalized_adjacency;
use crate::presets::Preset;
use crate::training::{TrainState, Trainer};

use super::{require_path, write_atomic, TrainArgs};

pub(super) const MODEL_FILE: &str = "model.bin";
pub(super) const STATE_FILE: &str = "state.bin";
pub(super) const TELEMETRY_FILE: &str = "telemetry.jsonl";
pub(super) const FILTER_FILE: &str = "filter.json";
pub(super) const CONFIG_FILE: &str = "config.toml";

fn apply_overrides(args: &TrainArgs, cfg: &mut RunConfig) -> Result<()> {
    args.filter.apply(cfg)?;
    if let Some(q) = args.variant {
        let preset = Preset::variant(q).ok_or_else(|| Error::Config(format!("--variant takes I or III, got {q}")))?;
        cfg.filter.preset = Some(preset);
    }
    if let Some(p) = args.ablation {
        cfg.filter.preset = Some(p);
    }
    let t = &mut cfg.train;
    if let Some(v) = args.epochs {
        t.max_epochs = v;
    }
    if let Some(v) = args.lr {
        t.learning_rate = v;
    }
    if let Some(v) = args.batch_size {
        t.batch_size = v;
    }
    if let Some(v) = args.dim {
        t.embedding_dim = v;
    }
    if let Some(v) = args.reg {
        t.reg_weight = v;
    }
    if let Some(v) = args.patience {
        t.early_stop_patience = v;
    }
    if let Some(v) = args.init_seed {
        t.init_seed = v;
    }
    if let Some(v) = args.sampler_seed {
        t.sampler_seed = v;
    }
    cfg.validate()
}

fn load_filter(args: &TrainArgs, cfg: &RunConfig) -> Result<FilterSpec> {
    match &args.filter_file {
        Some(path) => {
            let mut spec: FilterSpec = serde_json::from_str(&fs::read_to_string(path)?)?;
            if spec.propagation_coefficients.is_none() {
                spec.fit(&sample_points(cfg.filter.fit_points, cfg.filter.sample))?;
            }
            spec.validate()?;
            Ok(spec)
        }
        None => cfg.filter.fitted_spec(),
    }
}

pub(super) fn run(args: TrainArgs, mut cfg: RunConfig) -> Result<()> {
    apply_overrides(&args, &mut cfg)?;
    let split_dir = require_path(args.split.clone(), cfg.data.split_dir.clone(), "--split")?;
    let out = require_path(args.out.clone(), cfg.output_dir.clone(), "--out")?;
    fs::create_dir_all(&out)?;

    let filter = load_filter(&args, &cfg)?;
    let split = SplitDataset::read_from_dir(&split_dir)?;
    let adj = build_normalized_adjacency(&split)?;

    let state_path = out.join(STATE_FILE);
    let mut trainer = if args.resume {
        let state = TrainState::read(BufReader::new(File::open(&state_path)?), &state_path)?;
        Trainer::resume(&split, &adj, &filter, cfg.train.clone(), state)?
    } else {
        Trainer::new(&split, &adj, &filter, cfg.train.clone())?
    };
    write_atomic(
        &out.join(FILTER_FILE),
        (serde_json::to_string_pretty(&filter)? + "\n").as_bytes(),
    )?;
    write_atomic(&out.join(CONFIG_FILE), cfg.to_toml()?.as_bytes())?;

    let telemetry_path = out.join(TELEMETRY_FILE);
    let mut telemetry = BufWriter::new(if args.resume {
        OpenOptions::new().create(true).append(true).open(&telemetry_path)?
    } else {
        File::create(&telemetry_path)?
    });
    let cutoff = format!("recall@{}", cfg.train.eval_cutoff);
    while !trainer.finished() {
        let record = trainer.run_epoch()?;
        writeln!(telemetry, "{}", serde_json::to_string(&record)?)?;
        telemetry.flush()?;
        let mut buf = Vec::new();
        trainer.state().write(&mut buf)?;
        write_atomic(&state_path, &buf)?;
        log::info!(
            "epoch {:>3}  loss {:.5}  val {cutoff} {:.4}{}",
            record.epoch,
            record.loss,
            record.metrics.get(&cutoff).copied().unwrap_or(f64::NAN),
            if record.improved { "  *" } else { "" }
        );
    }
    let outcome = trainer.into_outcome()?;
    let mut buf = Vec::new();
    outcome.model.write_checkpoint(&mut buf)?;
    write_atomic(&out.join(MODEL_FILE), &buf)?;
    match outcome.best_epoch {
        Some(e) => println!("best epoch {e}: validation {cutoff} = {:.4}", outcome.best_metric),
        None => println!("no epochs run; saved the initial model"),
    }
    println!("run directory: {}", out.display());
    Ok(())
}
