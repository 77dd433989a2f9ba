//! Interaction logs, dense id spaces and per-user random splits.

use std::collections::{BTreeSet, HashMap};
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    Tsv,
    Csv,
}

impl InputFormat {
    fn separator(self) -> char {
        match self {
            InputFormat::Tsv => '\t',
            InputFormat::Csv => ',',
        }
    }
}

/// Bijection between raw string ids and dense indices `[0, len)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct IdMap {
    raw: Vec<String>,
    index: HashMap<String, usize>,
}

impl IdMap {
    pub fn len(&self) -> usize {
        self.raw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raw.is_empty()
    }

    pub fn index_of(&self, raw: &str) -> Option<usize> {
        self.index.get(raw).copied()
    }

    pub fn raw_of(&self, index: usize) -> Option<&str> {
        self.raw.get(index).map(String::as_str)
    }

    fn intern(&mut self, raw: &str) -> usize {
        if let Some(&i) = self.index.get(raw) {
            return i;
        }
        let i = self.raw.len();
        self.raw.push(raw.to_owned());
        self.index.insert(raw.to_owned(), i);
        i
    }

    fn identity(n: usize) -> Self {
        let mut map = IdMap::default();
        for i in 0..n {
            map.intern(&i.to_string());
        }
        map
    }
}

/// An id-mapped, deduplicated user-item interaction log.
#[derive(Clone, Debug)]
pub struct InteractionDataset {
    user_count: usize,
    item_count: usize,
    interactions: Vec<(usize, usize)>,
    user_ids: IdMap,
    item_ids: IdMap,
}

impl InteractionDataset {
    /// Builds a dataset over already-dense indices. Raw ids are the decimal
    /// index strings. Duplicates are dropped.
    pub fn from_pairs(
        user_count: usize,
        item_count: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (u, i) in pairs {
            if u >= user_count {
                return Err(Error::IndexOutOfRange {
                    what: "user",
                    index: u,
                    count: user_count,
                });
            }
            if i >= item_count {
                return Err(Error::IndexOutOfRange {
                    what: "item",
                    index: i,
                    count: item_count,
                });
            }
            seen.insert((u, i));
        }
        if seen.is_empty() {
            return Err(Error::EmptyDataset("no interactions".into()));
        }
        Ok(Self {
            user_count,
            item_count,
            interactions: seen.into_iter().collect(),
            user_ids: IdMap::identity(user_count),
            item_ids: IdMap::identity(item_count),
        })
    }

    pub fn user_count(&self) -> usize {
        self.user_count
    }

    pub fn item_count(&self) -> usize {
        self.item_count
    }

    /// Interactions sorted by (user, item).
    pub fn interactions(&self) -> &[(usize, usize)] {
        &self.interactions
    }

    pub fn user_ids(&self) -> &IdMap {
        &self.user_ids
    }

    pub fn item_ids(&self) -> &IdMap {
        &self.item_ids
    }

    /// `1 − nnz / (users · items)`.
    pub fn sparsity(&self) -> f64 {
        1.0 - self.interactions.len() as f64 / (self.user_count as f64 * self.item_count as f64)
    }

    /// Sorted item lists per user.
    pub fn items_by_user(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.user_count];
        for &(u, i) in &self.interactions {
            out[u].push(i);
        }
        out
    }
}

pub fn load_interactions(path: &Path, format: InputFormat) -> Result<InteractionDataset> {
    let file = File::open(path)?;
    parse_interactions(BufReader::new(file), format, &path.display().to_string())
}

/// Parses `user<sep>item[<sep>...]` records. Blank lines are skipped; extra
/// fields (ratings, timestamps) are ignored.
pub fn parse_interactions<R: BufRead>(reader: R, format: InputFormat, source: &str) -> Result<InteractionDataset> {
    let sep = format.separator();
    let mut users = IdMap::default();
    let mut items = IdMap::default();
    let mut seen = BTreeSet::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim_end_matches(['\r', '\n']);
        if trimmed.trim().is_empty() {
            continue;
        }
        let mut fields = trimmed.split(sep);
        let user = fields.next().map(str::trim).unwrap_or_default();
        let item = fields.next().map(str::trim);
        let item = match item {
            Some(item) if !user.is_empty() && !item.is_empty() => item,
            _ => {
                return Err(Error::Parse {
                    path: source.to_owned(),
                    line: lineno + 1,
                    message: "expected at least a user id and an item id".into(),
                })
            }
        };
        let u = users.intern(user);
        let i = items.intern(item);
        seen.insert((u, i));
    }
    if seen.is_empty() {
        return Err(Error::EmptyDataset(format!("{source} contains no interactions")));
    }
    Ok(InteractionDataset {
        user_count: users.len(),
        item_count: items.len(),
        interactions: seen.into_iter().collect(),
        user_ids: users,
        item_ids: items,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitRatios {
    pub train: f64,
    pub validation: f64,
    pub test: f64,
}

impl SplitRatios {
    pub fn new(train: f64, validation: f64, test: f64) -> Result<Self> {
        let r = Self {
            train,
            validation,
            test,
        };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        let parts = [self.train, self.validation, self.test];
        let positive = parts.iter().all(|p| p.is_finite() && *p > 0.0);
        if !positive || (parts.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidRatios(parts));
        }
        Ok(())
    }
}

impl Default for SplitRatios {
    fn default() -> Self {
        Self {
            train: 0.8,
            validation: 0.1,
            test: 0.1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SplitKind {
    Train,
    Validation,
    Test,
}

impl SplitKind {
    pub fn label(self) -> &'static str {
        match self {
            SplitKind::Train => "train",
            SplitKind::Validation => "validation",
            SplitKind::Test => "test",
        }
    }
}

/// Per-user partition of a dataset into train / validation / test item lists.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitDataset {
    user_count: usize,
    item_count: usize,
    train: Vec<Vec<usize>>,
    validation: Vec<Vec<usize>>,
    test: Vec<Vec<usize>>,
    split_seed: u64,
    ratios: SplitRatios,
}

/// Shuffles each user's items with one seeded generator (users visited in
/// index order). Validation and test sizes are floored; the remainder goes to
/// train, so a single-interaction user lands entirely in train.
pub fn split_dataset(ds: &InteractionDataset, ratios: SplitRatios, seed: u64) -> Result<SplitDataset> {
    ratios.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let per_user = ds.items_by_user();
    let mut train = Vec::with_capacity(ds.user_count);
    let mut validation = Vec::with_capacity(ds.user_count);
    let mut test = Vec::with_capacity(ds.user_count);
    for mut items in per_user {
        items.shuffle(&mut rng);
        let degree = items.len() as f64;
        // the epsilon guards products like 0.7·10 landing just below an integer
        let n_val = (degree * ratios.validation + 1e-9).floor() as usize;
        let n_test = (degree * ratios.test + 1e-9).floor() as usize;
        let mut val: Vec<usize> = items[..n_val].to_vec();
        let mut tst: Vec<usize> = items[n_val..n_val + n_test].to_vec();
        let mut trn: Vec<usize> = items[n_val + n_test..].to_vec();
        val.sort_unstable();
        tst.sort_unstable();
        trn.sort_unstable();
        train.push(trn);
        validation.push(val);
        test.push(tst);
    }
    Ok(SplitDataset {
        user_count: ds.user_count,
        item_count: ds.item_count,
        train,
        validation,
        test,
        split_seed: seed,
        ratios,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitCounts {
    pub train: usize,
    pub validation: usize,
    pub test: usize,
}

/// JSON manifest written next to the split files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitManifest {
    pub format_version: u32,
    pub seed: u64,
    pub ratios: SplitRatios,
    pub user_count: usize,
    pub item_count: usize,
    pub counts: SplitCounts,
    pub files: SplitFiles,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitFiles {
    pub train: String,
    pub validation: String,
    pub test: String,
}

impl Default for SplitFiles {
    fn default() -> Self {
        Self {
            train: "train.tsv".into(),
            validation: "val.tsv".into(),
            test: "test.tsv".into(),
        }
    }
}

pub const MANIFEST_FILE: &str = "manifest.json";

impl SplitDataset {
    pub fn user_count(&self) -> usize {
        self.user_count
    }

    pub fn item_count(&self) -> usize {
        self.item_count
    }

    pub fn split_seed(&self) -> u64 {
        self.split_seed
    }

    pub fn ratios(&self) -> SplitRatios {
        self.ratios
    }

    pub fn part(&self, kind: SplitKind) -> &[Vec<usize>] {
        match kind {
            SplitKind::Train => &self.train,
            SplitKind::Validation => &self.validation,
            SplitKind::Test => &self.test,
        }
    }

    pub fn train(&self) -> &[Vec<usize>] {
        &self.train
    }

    pub fn validation(&self) -> &[Vec<usize>] {
        &self.validation
    }

    pub fn test(&self) -> &[Vec<usize>] {
        &self.test
    }

    /// All train `(user, item)` pairs in user-major order.
    pub fn train_pairs(&self) -> Vec<(usize, usize)> {
        self.train
            .iter()
            .enumerate()
            .flat_map(|(u, items)| items.iter().map(move |&i| (u, i)))
            .collect()
    }

    pub fn counts(&self) -> SplitCounts {
        let count = |part: &[Vec<usize>]| part.iter().map(Vec::len).sum();
        SplitCounts {
            train: count(&self.train),
            validation: count(&self.validation),
            test: count(&self.test),
        }
    }

    pub fn manifest(&self) -> SplitManifest {
        SplitManifest {
            format_version: 1,
            seed: self.split_seed,
            ratios: self.ratios,
            user_count: self.user_count,
            item_count: self.item_count,
            counts: self.counts(),
            files: SplitFiles::default(),
        }
    }

    /// Writes `train.tsv`, `val.tsv`, `test.tsv` (`user<TAB>item` lines) and
    /// `manifest.json` into `dir`.
    pub fn write_to_dir(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let manifest = self.manifest();
        for (name, part) in [
            (&manifest.files.train, &self.train),
            (&manifest.files.validation, &self.validation),
            (&manifest.files.test, &self.test),
        ] {
            let mut w = BufWriter::new(File::create(dir.join(name))?);
            for (u, items) in part.iter().enumerate() {
                for i in items {
                    writeln!(w, "{u}\t{i}")?;
                }
            }
            w.flush()?;
        }
        let json = serde_json::to_string_pretty(&manifest)?;
        fs::write(dir.join(MANIFEST_FILE), json + "\n")?;
        Ok(())
    }

    pub fn read_from_dir(dir: &Path) -> Result<Self> {
        let manifest_path = dir.join(MANIFEST_FILE);
        let manifest: SplitManifest = serde_json::from_str(&fs::read_to_string(&manifest_path)?)?;
        let read_part = |name: &str| -> Result<Vec<Vec<usize>>> {
            let path = dir.join(name);
            let mut part = vec![Vec::new(); manifest.user_count];
            let reader = BufReader::new(File::open(&path)?);
            for (lineno, line) in reader.lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let parse_err = |message: &str| Error::Parse {
                    path: path.display().to_string(),
                    line: lineno + 1,
                    message: message.to_owned(),
                };
                let (u, i) = line
                    .split_once('\t')
                    .ok_or_else(|| parse_err("expected user<TAB>item"))?;
                let u: usize = u.trim().parse().map_err(|_| parse_err("bad user index"))?;
                let i: usize = i.trim().parse().map_err(|_| parse_err("bad item index"))?;
                if u >= manifest.user_count || i >= manifest.item_count {
                    return Err(parse_err("index outside the manifest's id space"));
                }
                part[u].push(i);
            }
            for items in &mut part {
                items.sort_unstable();
            }
            Ok(part)
        };
        let split = SplitDataset {
            user_count: manifest.user_count,
            item_count: manifest.item_count,
            train: read_part(&manifest.files.train)?,
            validation: read_part(&manifest.files.validation)?,
            test: read_part(&manifest.files.test)?,
            split_seed: manifest.seed,
            ratios: manifest.ratios,
        };
        if split.counts() != manifest.counts {
            return Err(Error::format(
                manifest_path,
                "split file sizes disagree with manifest counts",
            ));
        }
        Ok(split)
    }
}

/// Writes `raw_id<TAB>index` lines for an id map.
pub fn write_id_map(map: &IdMap, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for (i, raw) in map.raw.iter().enumerate() {
        writeln!(w, "{raw}\t{i}")?;
    }
    w.flush()?;
    Ok(())
}

/// Two-community synthetic data: users and items are each cut in half and
/// every user interacts only with items of its own half, `per_user` items
/// drawn uniformly without replacement.
pub fn two_block(users: usize, items: usize, per_user: usize, seed: u64) -> Result<InteractionDataset> {
    let half_items = items / 2;
    if users < 2 || half_items == 0 || per_user == 0 || per_user > half_items {
        return Err(Error::Config(format!(
            "two_block needs ≥2 users and 0 < per_user ≤ items/2 (got users={users}, items={items}, per_user={per_user})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half_users = users / 2;
    let mut pairs = Vec::with_capacity(users * per_user);
    for u in 0..users {
        let (lo, hi) = if u < half_users {
            (0, half_items)
        } else {
            (half_items, items)
        };
        let mut pool: Vec<usize> = (lo..hi).collect();
        let (chosen, _) = pool.partial_shuffle(&mut rng, per_user);
        pairs.extend(chosen.iter().map(|&i| (u, i)));
    }
    InteractionDataset::from_pairs(users, items, pairs)
}

/// Uniformly random bipartite interactions with Bernoulli(`density`) edges;
/// every user gets at least one item.
pub fn random_interactions(users: usize, items: usize, density: f64, seed: u64) -> Result<InteractionDataset> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for u in 0..users {
        let before = pairs.len();
        for i in 0..items {
            if rng.gen_bool(density.clamp(0.0, 1.0)) {
                pairs.push((u, i));
            }
        }
        if pairs.len() == before {
            pairs.push((u, rng.gen_range(0..items)));
        }
    }
    InteractionDataset::from_pairs(users, items, pairs)
}
