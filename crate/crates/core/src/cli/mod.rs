//! `simgcf` command-line interface.

mod analyze;
mod evaluate;
mod fit;
mod prepare;
mod report;
mod table;
mod train;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::RunConfig;
use crate::dataset::{InputFormat, SplitKind};
use crate::error::{Error, Result};
use crate::filters::{Basis, Quadrant};
use crate::presets::Preset;

#[derive(Debug, Parser)]
#[command(name = "simgcf", version, about = "Spectral graph collaborative filtering")]
pub struct Cli {
    /// TOML run configuration; command-line flags override its keys.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Repeat for more log output on stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Split a raw interaction file and write the split artifacts.
    Prepare(PrepareArgs),
    /// Fit monomial coefficients to a (scaled) filter and export them.
    FitFilter(FitFilterArgs),
    /// Train embeddings with BPR and early stopping on validation recall.
    Train(TrainArgs),
    /// Compute Recall@k and NDCG@k for a checkpoint or the popularity baseline.
    Evaluate(EvaluateArgs),
    /// Run the dense spectral checks on a small graph.
    Analyze(AnalyzeArgs),
    /// Tabulate several evaluation reports side by side.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct PrepareArgs {
    /// Raw `user<sep>item` interaction file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<InputFormat>,
    /// Output directory for split files and manifest.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Train, validation and test fractions.
    #[arg(long, value_delimiter = ',', num_args = 3)]
    pub ratios: Option<Vec<f64>>,
}

#[derive(Debug, Args, Default)]
pub struct FilterArgs {
    /// Named filter preset; overrides basis, quadrant and space flip.
    #[arg(long = "preset", value_enum)]
    pub preset: Option<Preset>,
    #[arg(long, value_enum)]
    pub basis: Option<Basis>,
    /// Polynomial order `n`.
    #[arg(long)]
    pub degree: Option<usize>,
    /// Jacobi parameter `a`.
    #[arg(long)]
    pub a: Option<f64>,
    /// Jacobi parameter `b`.
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long, value_enum)]
    pub quadrant: Option<Quadrant>,
    /// Monomial backbone coefficients `α₀,…,αₙ`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub coefficients: Option<Vec<f64>>,
    /// Scaler amplitude `μ`.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    /// Scaler steepness `α`.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Scaler shift `β`.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Fit the bare backbone without the scaler.
    #[arg(long)]
    pub no_scaler: bool,
    #[arg(long)]
    pub space_flip: Option<bool>,
    /// Number of sample points for the least-squares fit.
    #[arg(long)]
    pub fit_points: Option<usize>,
    /// Sample fit points at random with this seed instead of uniformly.
    #[arg(long)]
    pub sample_seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct FitFilterArgs {
    #[command(flatten)]
    pub filter: FilterArgs,
    /// Where to write the fitted filter JSON (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write a `λ f g f′ f″` sample table.
    #[arg(long)]
    pub waveform: Option<PathBuf>,
    /// Write the waveform as SVG.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Fail when the fit RMSE exceeds this.
    #[arg(long)]
    pub max_residual: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Split directory written by `prepare`.
    #[arg(long)]
    pub split: Option<PathBuf>,
    /// Pre-fitted filter JSON from `fit-filter`.
    #[arg(long, conflicts_with_all = ["variant", "ablation"])]
    pub filter_file: Option<PathBuf>,
    /// Main model in quadrant I or III (III implies the space flip).
    #[arg(long, value_enum, conflicts_with = "ablation")]
    pub variant: Option<Quadrant>,
    /// Ablation preset.
    #[arg(long, value_enum)]
    pub ablation: Option<Preset>,
    #[command(flatten)]
    pub filter: FilterArgs,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long)]
    pub batch_size: Option<usize>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub reg: Option<f64>,
    #[arg(long)]
    pub patience: Option<usize>,
    #[arg(long)]
    pub init_seed: Option<u64>,
    #[arg(long)]
    pub sampler_seed: Option<u64>,
    /// Run directory for checkpoint, state and telemetry.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Continue from the state saved in the run directory.
    #[arg(long)]
    pub resume: bool,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub split: Option<PathBuf>,
    /// Checkpoint file or run directory.
    #[arg(long, required_unless_present = "popularity")]
    pub model: Option<PathBuf>,
    /// Evaluate the train-frequency baseline instead of a checkpoint.
    #[arg(long)]
    pub popularity: bool,
    #[arg(long, value_enum, default_value = "test")]
    pub which: SplitKind,
    #[arg(long, value_delimiter = ',')]
    pub ks: Option<Vec<usize>>,
    /// Write the report JSON here.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// The 5-user / 3-item case graph.
    #[arg(long, conflicts_with_all = ["random", "split"])]
    pub case_graph: bool,
    /// A seeded random bipartite graph.
    #[arg(long, conflicts_with = "split")]
    pub random: bool,
    /// The train graph of a (small) split directory.
    #[arg(long)]
    pub split: Option<PathBuf>,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Node count of the random graph, split evenly between users and items.
    #[arg(long, default_value_t = 16)]
    pub nodes: usize,
    #[arg(long, default_value_t = 0.3)]
    pub density: f64,
    /// Filter magnitudes `α₀,…,αₙ`.
    #[arg(long, value_delimiter = ',')]
    pub coefficients: Option<Vec<f64>>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub embedding_seed: Option<u64>,
    /// Flip the first-order coefficient's sign so the parity checks fail.
    #[arg(long)]
    pub corrupt_signs: bool,
    /// Directory for heatmap SVGs.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Write the full report JSON here.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// `name=path` pairs of evaluation report JSON files.
    #[arg(required = true)]
    pub reports: Vec<String>,
    /// Write grouped metric bars as SVG.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

impl FilterArgs {
    pub(crate) fn apply(&self, cfg: &mut RunConfig) -> Result<()> {
        let f = &mut cfg.filter;
        if let Some(p) = self.preset {
            f.preset = Some(p);
        }
        if let Some(b) = self.basis {
            f.basis = b;
        }
        if let Some(n) = self.degree {
            f.degree = n;
        }
        if let Some(a) = self.a {
            f.a = a;
        }
        if let Some(b) = self.b {
            f.b = b;
        }
        if let Some(q) = self.quadrant {
            f.quadrant = q;
        }
        if let Some(c) = &self.coefficients {
            f.basis = Basis::Monomial;
            f.degree = c.len().saturating_sub(1);
            f.base_coefficients = c.clone();
        }
        if self.no_scaler {
            if self.mu.is_some() || self.alpha.is_some() || self.beta.is_some() {
                return Err(Error::Config("--no-scaler conflicts with --mu/--alpha/--beta".into()));
            }
            f.scaler = None;
        } else if self.mu.is_some() || self.alpha.is_some() || self.beta.is_some() {
            let mut s = f.scaler.unwrap_or_default();
            s.mu = self.mu.unwrap_or(s.mu);
            s.alpha = self.alpha.unwrap_or(s.alpha);
            s.beta = self.beta.unwrap_or(s.beta);
            f.scaler = Some(s);
        }
        if let Some(flip) = self.space_flip {
            f.space_flip = Some(flip);
        }
        if let Some(m) = self.fit_points {
            f.fit_points = m;
        }
        if let Some(seed) = self.sample_seed {
            f.sample = crate::filters::SampleMode::Random { seed };
        }
        Ok(())
    }
}

fn load_config(path: Option<&Path>) -> Result<RunConfig> {
    match path {
        Some(p) => RunConfig::load(p),
        None => Ok(RunConfig::default()),
    }
}

fn require_path(arg: Option<PathBuf>, fallback: Option<PathBuf>, what: &str) -> Result<PathBuf> {
    arg.or(fallback)
        .ok_or_else(|| Error::Config(format!("{what} not given on the command line or in the config")))
}

/// Writes `bytes` to `path` through a temporary sibling and a rename.
pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .try_init();
}

pub fn run(cli: Cli) -> Result<()> {
    init_logging(cli.verbose);
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::Config("--threads must be ≥ 1".into()));
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let cfg = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Prepare(a) => prepare::run(a, cfg),
        Command::FitFilter(a) => fit::run(a, cfg),
        Command::Train(a) => train::run(a, cfg),
        Command::Evaluate(a) => evaluate::run(a, cfg),
        Command::Analyze(a) => analyze::run(a, cfg),
        Command::Report(a) => report::run(a),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
