//! BPR training of `E⁰` through the fixed polynomial propagation.
//!
//! Scores are taken on the propagated table `E = P E⁰` with
//! `P = Σ αᵢ Âⁱ`. Because `P` is symmetric, the gradient with respect to
//! `E⁰` is `P` applied to the gradient with respect to `E`, so one extra
//! propagation per step replaces backpropagation through the hops.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{SplitDataset, SplitKind};
use crate::dense::{dot, DenseMatrix};
use crate::error::{Error, Result};
use crate::evaluation::{evaluate, EvalReport};
use crate::filters::FilterSpec;
use crate::graph::SparseAdjacency;
use crate::propagation::{propagate, EmbeddingModel};

/// Rejection attempts per negative before the triple is dropped.
pub const MAX_NEGATIVE_ATTEMPTS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdamParams {
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamParams {
    fn default() -> Self {
        Self {
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub batch_size: usize,
    pub reg_weight: f64,
    pub max_epochs: usize,
    pub early_stop_patience: usize,
    /// Cutoff whose validation recall drives early stopping.
    pub eval_cutoff: usize,
    /// Cutoffs reported in telemetry each epoch.
    pub eval_ks: Vec<usize>,
    pub embedding_dim: usize,
    pub init_seed: u64,
    pub sampler_seed: u64,
    pub adam: AdamParams,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 1e-3,
            batch_size: 4096,
            reg_weight: 1e-4,
            max_epochs: 300,
            early_stop_patience: 5,
            eval_cutoff: 20,
            eval_ks: vec![10, 20],
            embedding_dim: 64,
            init_seed: 2024,
            sampler_seed: 2025,
            adam: AdamParams::default(),
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Config("learning_rate must be > 0".into()));
        }
        if self.batch_size == 0 {
            return Err(Error::Config("batch_size must be ≥ 1".into()));
        }
        if self.reg_weight.is_nan() || self.reg_weight < 0.0 {
            return Err(Error::Config("reg_weight must be ≥ 0".into()));
        }
        if self.early_stop_patience == 0 || self.eval_cutoff == 0 || self.embedding_dim == 0 {
            return Err(Error::Config(
                "early_stop_patience, eval_cutoff and embedding_dim must be ≥ 1".into(),
            ));
        }
        Ok(())
    }

    fn report_ks(&self) -> Vec<usize> {
        let mut ks = self.eval_ks.clone();
        ks.push(self.eval_cutoff);
        ks.sort_unstable();
        ks.dedup();
        ks
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Triple {
    pub user: usize,
    pub pos: usize,
    pub neg: usize,
}

/// Interaction-proportional BPR sampler over the train split.
#[derive(Clone, Debug)]
pub struct BprSampler {
    pairs: Vec<(usize, usize)>,
    train: Vec<Vec<usize>>,
    item_count: usize,
}

impl BprSampler {
    pub fn new(split: &SplitDataset) -> Result<Self> {
        let pairs = split.train_pairs();
        if pairs.is_empty() {
            return Err(Error::EmptyDataset("train split has no interactions".into()));
        }
        Ok(Self {
            pairs,
            train: split.train().to_vec(),
            item_count: split.item_count(),
        })
    }

    pub fn interaction_count(&self) -> usize {
        self.pairs.len()
    }

    /// Draws `batch_size` triples; a triple whose user has interacted with
    /// every item (or exhausts the rejection budget) is skipped.
    pub fn sample<R: Rng>(&self, batch_size: usize, rng: &mut R) -> Vec<Triple> {
        let mut out = Vec::with_capacity(batch_size);
        let mut skipped = 0usize;
        for _ in 0..batch_size {
            let (user, pos) = self.pairs[rng.gen_range(0..self.pairs.len())];
            let seen = &self.train[user];
            if seen.len() >= self.item_count {
                skipped += 1;
                continue;
            }
            let neg = (0..MAX_NEGATIVE_ATTEMPTS)
                .map(|_| rng.gen_range(0..self.item_count))
                .find(|j| seen.binary_search(j).is_err());
            match neg {
                Some(neg) => out.push(Triple { user, pos, neg }),
                None => skipped += 1,
            }
        }
        if skipped > 0 {
            log::warn!("skipped {skipped} triples whose users have no sampleable negative");
        }
        out
    }
}

pub fn sample_bpr_batch<R: Rng>(split: &SplitDataset, batch_size: usize, rng: &mut R) -> Result<Vec<Triple>> {
    Ok(BprSampler::new(split)?.sample(batch_size, rng))
}

/// `ln(1 + eˣ)` without overflow.
pub fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

/// `1 / (1 + e^{-x})` without overflow.
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `Σ −ln σ(ŷ_ui − ŷ_uj) = Σ softplus(ŷ_uj − ŷ_ui)`.
pub fn bpr_loss(pos_scores: &[f64], neg_scores: &[f64]) -> f64 {
    debug_assert_eq!(pos_scores.len(), neg_scores.len());
    pos_scores.iter().zip(neg_scores).map(|(p, n)| softplus(n - p)).sum()
}

fn flip_sign(space_flip: bool) -> f64 {
    if space_flip {
        -1.0
    } else {
        1.0
    }
}

/// Distinct `E⁰` rows touched by a batch, ascending.
fn touched_rows(batch: &[Triple], user_count: usize) -> Vec<usize> {
    let mut rows: Vec<usize> = batch
        .iter()
        .flat_map(|t| [t.user, user_count + t.pos, user_count + t.neg])
        .collect();
    rows.sort_unstable();
    rows.dedup();
    rows
}

fn objective_on(e: &DenseMatrix, e0: &DenseMatrix, user_count: usize, flip: bool, batch: &[Triple], w: f64) -> f64 {
    if batch.is_empty() {
        return 0.0;
    }
    let sign = flip_sign(flip);
    let (pos, neg): (Vec<f64>, Vec<f64>) = batch
        .iter()
        .map(|t| {
            let eu = e.row(t.user);
            (
                sign * dot(eu, e.row(user_count + t.pos)),
                sign * dot(eu, e.row(user_count + t.neg)),
            )
        })
        .unzip();
    let reg: f64 = touched_rows(batch, user_count)
        .into_iter()
        .map(|r| dot(e0.row(r), e0.row(r)))
        .sum();
    (bpr_loss(&pos, &neg) + w * reg) / batch.len() as f64
}

/// Batch objective `(Σ softplus(ŷ_uj − ŷ_ui) + w Σ_rows ‖E⁰_r‖²) / B`, the
/// regulariser running over the distinct rows the batch touches. Recomputes
/// the propagation from `e0`.
pub fn batch_objective(
    adj: &SparseAdjacency,
    e0: &DenseMatrix,
    coeffs: &[f64],
    space_flip: bool,
    batch: &[Triple],
    w: f64,
) -> Result<f64> {
    let e = propagate(adj, e0, coeffs)?;
    Ok(objective_on(&e, e0, adj.user_count(), space_flip, batch, w))
}

#[derive(Clone, Debug)]
pub struct BatchGradient {
    /// `∂L/∂E⁰`, same shape as `E⁰`.
    pub grad: DenseMatrix,
    pub loss: f64,
}

/// Analytic gradient of [`batch_objective`] with respect to `E⁰`, using the
/// model's cached propagation.
pub fn backward(adj: &SparseAdjacency, model: &EmbeddingModel, batch: &[Triple], w: f64) -> Result<BatchGradient> {
    let e = model.propagated()?;
    let e0 = model.e0();
    let (n, d) = (e0.rows(), e0.cols());
    if batch.is_empty() {
        return Ok(BatchGradient {
            grad: DenseMatrix::zeros(n, d),
            loss: 0.0,
        });
    }
    let offset = model.user_count();
    let sign = flip_sign(model.space_flip());
    let inv_b = 1.0 / batch.len() as f64;

    let mut g = DenseMatrix::zeros(n, d);
    let mut buf = vec![0.0; d];
    for t in batch {
        let (u, i, j) = (t.user, offset + t.pos, offset + t.neg);
        let eu = e.row(u);
        let (ei, ej) = (e.row(i), e.row(j));
        let margin = sign * (dot(eu, ei) - dot(eu, ej));
        // ∂softplus(−margin)/∂margin = −σ(−margin)
        let s = sigmoid(-margin) * sign * inv_b;
        for k in 0..d {
            buf[k] = ei[k] - ej[k];
        }
        for (gk, bk) in g.row_mut(u).iter_mut().zip(&buf) {
            *gk -= s * bk;
        }
        let eu = eu.to_vec();
        for (gk, uk) in g.row_mut(i).iter_mut().zip(&eu) {
            *gk -= s * uk;
        }
        for (gk, uk) in g.row_mut(j).iter_mut().zip(&eu) {
            *gk += s * uk;
        }
    }
    let mut grad = propagate(adj, &g, model.coefficients())?;
    if w > 0.0 {
        let scale = 2.0 * w * inv_b;
        for r in touched_rows(batch, offset) {
            let src = e0.row(r).to_vec();
            for (gk, xk) in grad.row_mut(r).iter_mut().zip(src) {
                *gk += scale * xk;
            }
        }
    }
    Ok(BatchGradient {
        grad,
        loss: objective_on(e, e0, offset, model.space_flip(), batch, w),
    })
}

/// Adam moments for a parameter table.
#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerState {
    pub m: DenseMatrix,
    pub v: DenseMatrix,
    pub step: u64,
    pub params: AdamParams,
}

impl OptimizerState {
    pub fn new(rows: usize, cols: usize, params: AdamParams) -> Self {
        Self {
            m: DenseMatrix::zeros(rows, cols),
            v: DenseMatrix::zeros(rows, cols),
            step: 0,
            params,
        }
    }
}

/// Bias-corrected Adam on the rows whose gradient is not identically zero;
/// other rows and their moments are left as they are.
pub fn adam_step(e0: &mut DenseMatrix, grads: &DenseMatrix, state: &mut OptimizerState, lr: f64) -> Result<()> {
    if e0.rows() != grads.rows()
        || e0.cols() != grads.cols()
        || state.m.rows() != e0.rows()
        || state.m.cols() != e0.cols()
    {
        return Err(Error::DimensionMismatch {
            context: "adam_step shapes",
            expected: e0.rows() * e0.cols(),
            found: grads.rows() * grads.cols(),
        });
    }
    state.step += 1;
    let AdamParams { beta1, beta2, eps } = state.params;
    let t = state.step as i32;
    let bc1 = 1.0 - beta1.powi(t);
    let bc2 = 1.0 - beta2.powi(t);
    for r in 0..e0.rows() {
        let g = grads.row(r);
        if g.iter().all(|&x| x == 0.0) {
            continue;
        }
        let m = state.m.row_mut(r);
        for (mk, gk) in m.iter_mut().zip(g) {
            *mk = beta1 * *mk + (1.0 - beta1) * gk;
        }
        let v = state.v.row_mut(r);
        for (vk, gk) in v.iter_mut().zip(g) {
            *vk = beta2 * *vk + (1.0 - beta2) * gk * gk;
        }
        let (m, v) = (state.m.row(r), state.v.row(r));
        for ((x, mk), vk) in e0.row_mut(r).iter_mut().zip(m).zip(v) {
            *x -= lr * (mk / bc1) / ((vk / bc2).sqrt() + eps);
        }
    }
    Ok(())
}

/// Uniform Xavier initialisation, bound `√(6 / (d + d))`.
pub fn xavier_uniform(rows: usize, dim: usize, seed: u64) -> DenseMatrix {
    let bound = (6.0 / (2.0 * dim as f64)).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DenseMatrix::from_fn(rows, dim, |_, _| rng.gen_range(-bound..bound))
}

/// One line of training telemetry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    /// Mean batch objective over the epoch.
    pub loss: f64,
    pub batches: usize,
    pub triples: usize,
    /// Which split produced `metrics`; always validation during training.
    pub metric_split: SplitKind,
    /// `"recall@k"` / `"ndcg@k"` → value.
    pub metrics: BTreeMap<String, f64>,
    pub improved: bool,
    pub wall_seconds: f64,
    pub init_seed: u64,
    pub sampler_seed: u64,
}

impl EpochRecord {
    fn metrics_from(report: &EvalReport) -> BTreeMap<String, f64> {
        let mut out = BTreeMap::new();
        for (k, m) in &report.metrics {
            out.insert(format!("recall@{k}"), m.recall);
            out.insert(format!("ndcg@{k}"), m.ndcg);
        }
        out
    }
}

/// Everything needed to continue training bit-identically.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainState {
    pub next_epoch: usize,
    pub best_epoch: Option<usize>,
    pub best_metric: f64,
    pub bad_epochs: usize,
    pub last_finite: Option<usize>,
    pub init_seed: u64,
    pub sampler_seed: u64,
    pub e0: DenseMatrix,
    pub best_e0: DenseMatrix,
    pub optimizer: OptimizerState,
}

const STATE_MAGIC: &[u8; 8] = b"SGCFSTA\0";
const STATE_VERSION: u32 = 1;

impl TrainState {
    pub fn write<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(STATE_MAGIC)?;
        w.write_all(&STATE_VERSION.to_le_bytes())?;
        let opt = |v: Option<usize>| v.map_or(u64::MAX, |x| x as u64);
        for v in [
            self.next_epoch as u64,
            opt(self.best_epoch),
            self.bad_epochs as u64,
            opt(self.last_finite),
            self.init_seed,
            self.sampler_seed,
            self.optimizer.step,
            self.e0.rows() as u64,
            self.e0.cols() as u64,
        ] {
            w.write_all(&v.to_le_bytes())?;
        }
        for v in [
            self.best_metric,
            self.optimizer.params.beta1,
            self.optimizer.params.beta2,
            self.optimizer.params.eps,
        ] {
            w.write_all(&v.to_le_bytes())?;
        }
        for m in [&self.e0, &self.best_e0, &self.optimizer.m, &self.optimizer.v] {
            for v in m.as_slice() {
                w.write_all(&v.to_le_bytes())?;
            }
        }
        Ok(())
    }

    pub fn read<R: Read>(mut r: R, source: &Path) -> Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != STATE_MAGIC {
            return Err(Error::format(source, "not a training state file"));
        }
        let mut b4 = [0u8; 4];
        r.read_exact(&mut b4)?;
        if u32::from_le_bytes(b4) != STATE_VERSION {
            return Err(Error::format(source, "unsupported training state version"));
        }
        let mut b8 = [0u8; 8];
        let mut words = [0u64; 9];
        for w in &mut words {
            r.read_exact(&mut b8)?;
            *w = u64::from_le_bytes(b8);
        }
        let mut floats = [0f64; 4];
        for f in &mut floats {
            r.read_exact(&mut b8)?;
            *f = f64::from_le_bytes(b8);
        }
        let opt = |v: u64| (v != u64::MAX).then_some(v as usize);
        let (rows, cols) = (words[7] as usize, words[8] as usize);
        let mut read_matrix = || -> Result<DenseMatrix> {
            let mut data = Vec::with_capacity(rows * cols);
            for _ in 0..rows * cols {
                r.read_exact(&mut b8)?;
                data.push(f64::from_le_bytes(b8));
            }
            DenseMatrix::from_vec(rows, cols, data)
        };
        let e0 = read_matrix()?;
        let best_e0 = read_matrix()?;
        let m = read_matrix()?;
        let v = read_matrix()?;
        Ok(Self {
            next_epoch: words[0] as usize,
            best_epoch: opt(words[1]),
            bad_epochs: words[2] as usize,
            last_finite: opt(words[3]),
            init_seed: words[4],
            sampler_seed: words[5],
            best_metric: floats[0],
            e0,
            best_e0,
            optimizer: OptimizerState {
                m,
                v,
                step: words[6],
                params: AdamParams {
                    beta1: floats[1],
                    beta2: floats[2],
                    eps: floats[3],
                },
            },
        })
    }
}

#[derive(Clone, Debug)]
pub struct TrainOutcome {
    /// Best model by validation recall, with a fresh propagation cache.
    pub model: EmbeddingModel,
    pub telemetry: Vec<EpochRecord>,
    pub best_epoch: Option<usize>,
    pub best_metric: f64,
}

/// Epoch-by-epoch BPR trainer with validation early stopping.
pub struct Trainer<'a> {
    split: &'a SplitDataset,
    adj: &'a SparseAdjacency,
    cfg: TrainConfig,
    sampler: BprSampler,
    model: EmbeddingModel,
    optimizer: OptimizerState,
    next_epoch: usize,
    best_e0: DenseMatrix,
    best_epoch: Option<usize>,
    best_metric: f64,
    bad_epochs: usize,
    last_finite: Option<usize>,
    telemetry: Vec<EpochRecord>,
}

impl<'a> Trainer<'a> {
    pub fn new(
        split: &'a SplitDataset,
        adj: &'a SparseAdjacency,
        filter: &FilterSpec,
        cfg: TrainConfig,
    ) -> Result<Self> {
        let e0 = xavier_uniform(adj.node_count(), cfg.embedding_dim, cfg.init_seed);
        let optimizer = OptimizerState::new(adj.node_count(), cfg.embedding_dim, cfg.adam);
        Self::assemble(split, adj, filter, cfg, e0.clone(), e0, optimizer)
    }

    /// Continues from a saved state; the seeds must match the config.
    pub fn resume(
        split: &'a SplitDataset,
        adj: &'a SparseAdjacency,
        filter: &FilterSpec,
        cfg: TrainConfig,
        state: TrainState,
    ) -> Result<Self> {
        if state.init_seed != cfg.init_seed || state.sampler_seed != cfg.sampler_seed {
            return Err(Error::Config(
                "resume requires the seeds the state was trained with".into(),
            ));
        }
        let mut t = Self::assemble(split, adj, filter, cfg, state.e0, state.best_e0, state.optimizer)?;
        t.next_epoch = state.next_epoch;
        t.best_epoch = state.best_epoch;
        t.best_metric = state.best_metric;
        t.bad_epochs = state.bad_epochs;
        t.last_finite = state.last_finite;
        Ok(t)
    }

    fn assemble(
        split: &'a SplitDataset,
        adj: &'a SparseAdjacency,
        filter: &FilterSpec,
        cfg: TrainConfig,
        e0: DenseMatrix,
        best_e0: DenseMatrix,
        optimizer: OptimizerState,
    ) -> Result<Self> {
        cfg.validate()?;
        if adj.user_count() != split.user_count() || adj.item_count() != split.item_count() {
            return Err(Error::DimensionMismatch {
                context: "graph vs split size",
                expected: split.user_count() + split.item_count(),
                found: adj.node_count(),
            });
        }
        if e0.cols() != cfg.embedding_dim || e0.rows() != adj.node_count() {
            return Err(Error::DimensionMismatch {
                context: "resumed embedding shape",
                expected: adj.node_count() * cfg.embedding_dim,
                found: e0.rows() * e0.cols(),
            });
        }
        let coeffs = filter.require_propagation_coefficients()?.to_vec();
        let mut model = EmbeddingModel::new(split.user_count(), split.item_count(), e0, coeffs, filter.space_flip)?;
        model.refresh(adj)?;
        Ok(Self {
            split,
            adj,
            sampler: BprSampler::new(split)?,
            cfg,
            model,
            optimizer,
            next_epoch: 0,
            best_e0,
            best_epoch: None,
            best_metric: f64::NEG_INFINITY,
            bad_epochs: 0,
            last_finite: None,
            telemetry: Vec::new(),
        })
    }

    pub fn finished(&self) -> bool {
        self.next_epoch >= self.cfg.max_epochs || self.bad_epochs >= self.cfg.early_stop_patience
    }

    pub fn model(&self) -> &EmbeddingModel {
        &self.model
    }

    pub fn telemetry(&self) -> &[EpochRecord] {
        &self.telemetry
    }

    pub fn batches_per_epoch(&self) -> usize {
        self.sampler.interaction_count().div_ceil(self.cfg.batch_size)
    }

    /// Sampler for a given epoch: one ChaCha stream per epoch so a resumed
    /// run draws exactly the batches the uninterrupted run would have.
    fn epoch_rng(&self, epoch: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.sampler_seed);
        rng.set_stream(epoch as u64);
        rng
    }

    pub fn run_epoch(&mut self) -> Result<EpochRecord> {
        let started = Instant::now();
        let epoch = self.next_epoch;
        let mut rng = self.epoch_rng(epoch);
        let batches = self.batches_per_epoch();
        let mut loss_sum = 0.0;
        let mut triples = 0;
        for _ in 0..batches {
            let batch = self.sampler.sample(self.cfg.batch_size, &mut rng);
            triples += batch.len();
            if !self.model.is_fresh() {
                self.model.refresh(self.adj)?;
            }
            let BatchGradient { grad, loss } = backward(self.adj, &self.model, &batch, self.cfg.reg_weight)?;
            if !loss.is_finite() || !grad.is_finite() {
                return Err(Error::NonFiniteLoss {
                    epoch,
                    last_finite: self.last_finite,
                });
            }
            loss_sum += loss;
            adam_step(self.model.e0_mut(), &grad, &mut self.optimizer, self.cfg.learning_rate)?;
        }
        self.model.refresh(self.adj)?;
        let loss = loss_sum / batches.max(1) as f64;
        if !loss.is_finite() || !self.model.propagated()?.is_finite() {
            return Err(Error::NonFiniteLoss {
                epoch,
                last_finite: self.last_finite,
            });
        }
        self.last_finite = Some(epoch);

        let report = evaluate(&self.model, self.split, SplitKind::Validation, &self.cfg.report_ks())?;
        let metric = report.recall(self.cfg.eval_cutoff).unwrap_or(0.0);
        let improved = metric > self.best_metric;
        if improved {
            self.best_metric = metric;
            self.best_epoch = Some(epoch);
            self.best_e0 = self.model.e0().clone();
            self.bad_epochs = 0;
        } else {
            self.bad_epochs += 1;
        }
        self.next_epoch += 1;
        let record = EpochRecord {
            epoch,
            loss,
            batches,
            triples,
            metric_split: SplitKind::Validation,
            metrics: EpochRecord::metrics_from(&report),
            improved,
            wall_seconds: started.elapsed().as_secs_f64(),
            init_seed: self.cfg.init_seed,
            sampler_seed: self.cfg.sampler_seed,
        };
        self.telemetry.push(record.clone());
        Ok(record)
    }

    pub fn state(&self) -> TrainState {
        TrainState {
            next_epoch: self.next_epoch,
            best_epoch: self.best_epoch,
            best_metric: self.best_metric,
            bad_epochs: self.bad_epochs,
            last_finite: self.last_finite,
            init_seed: self.cfg.init_seed,
            sampler_seed: self.cfg.sampler_seed,
            e0: self.model.e0().clone(),
            best_e0: self.best_e0.clone(),
            optimizer: self.optimizer.clone(),
        }
    }

    pub fn into_outcome(self) -> Result<TrainOutcome> {
        let mut model = self.model;
        if self.best_epoch.is_some() {
            model.set_e0(self.best_e0)?;
        }
        model.refresh(self.adj)?;
        Ok(TrainOutcome {
            model,
            telemetry: self.telemetry,
            best_epoch: self.best_epoch,
            best_metric: self.best_metric,
        })
    }
}

/// Trains until `max_epochs` or `early_stop_patience` epochs without a
/// validation improvement, returning the best model.
pub fn train(
    split: &SplitDataset,
    adj: &SparseAdjacency,
    filter: &FilterSpec,
    cfg: TrainConfig,
) -> Result<TrainOutcome> {
    let mut trainer = Trainer::new(split, adj, filter, cfg)?;
    while !trainer.finished() {
        trainer.run_epoch()?;
    }
    trainer.into_outcome()
}
