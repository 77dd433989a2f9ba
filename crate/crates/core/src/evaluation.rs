//! Full-ranking top-k evaluation with train-item masking.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{SplitDataset, SplitKind};
use crate::error::{Error, Result};
use crate::propagation::EmbeddingModel;

/// Anything that can score every item for a user.
pub trait Scorer: Sync {
    fn item_count(&self) -> usize;
    fn item_scores(&self, user: usize) -> Result<Vec<f64>>;
}

impl Scorer for EmbeddingModel {
    fn item_count(&self) -> usize {
        EmbeddingModel::item_count(self)
    }

    fn item_scores(&self, user: usize) -> Result<Vec<f64>> {
        EmbeddingModel::item_scores(self, user)
    }
}

/// Ranks items by train-split frequency, identically for every user.
#[derive(Clone, Debug)]
pub struct PopularityModel {
    counts: Vec<f64>,
}

impl PopularityModel {
    pub fn fit(split: &SplitDataset) -> Self {
        let mut counts = vec![0.0; split.item_count()];
        for items in split.train() {
            for &i in items {
                counts[i] += 1.0;
            }
        }
        Self { counts }
    }
}

impl Scorer for PopularityModel {
    fn item_count(&self) -> usize {
        self.counts.len()
    }

    fn item_scores(&self, _user: usize) -> Result<Vec<f64>> {
        Ok(self.counts.clone())
    }
}

/// Descending score, ascending index on ties.
fn by_score(scores: &[f64]) -> impl Fn(&usize, &usize) -> Ordering + '_ {
    move |&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b))
}

/// All items ordered by score; masked items go last (in index order), as if
/// scored −∞.
pub fn rank_items(scores: &[f64], mask: &[usize]) -> Vec<usize> {
    let mut masked = vec![false; scores.len()];
    for &m in mask {
        if m < masked.len() {
            masked[m] = true;
        }
    }
    let mut open: Vec<usize> = (0..scores.len()).filter(|&i| !masked[i]).collect();
    open.sort_by(by_score(scores));
    open.extend((0..scores.len()).filter(|&i| masked[i]));
    open
}

/// The first `k` entries of [`rank_items`] restricted to unmasked items,
/// without sorting the whole list.
pub fn top_k(scores: &[f64], mask: &[usize], k: usize) -> Vec<usize> {
    let mut masked = vec![false; scores.len()];
    for &m in mask {
        if m < masked.len() {
            masked[m] = true;
        }
    }
    let mut open: Vec<usize> = (0..scores.len()).filter(|&i| !masked[i]).collect();
    let cmp = by_score(scores);
    if k < open.len() {
        open.select_nth_unstable_by(k, &cmp);
        open.truncate(k);
    }
    open.sort_by(cmp);
    open
}

/// `|top-k ∩ truth| / |truth|`; `truth` must be sorted.
pub fn recall_at_k(ranked: &[usize], truth: &[usize], k: usize) -> f64 {
    if truth.is_empty() {
        return 0.0;
    }
    let hits = ranked.iter().take(k).filter(|i| truth.binary_search(i).is_ok()).count();
    hits as f64 / truth.len() as f64
}

/// Binary-relevance NDCG with the ideal DCG truncated at `min(k, |truth|)`;
/// `truth` must be sorted.
pub fn ndcg_at_k(ranked: &[usize], truth: &[usize], k: usize) -> f64 {
    let dcg: f64 = ranked
        .iter()
        .take(k)
        .enumerate()
        .filter(|(_, i)| truth.binary_search(i).is_ok())
        .map(|(r, _)| 1.0 / ((r + 2) as f64).log2())
        .sum();
    let idcg: f64 = (0..k.min(truth.len())).map(|r| 1.0 / ((r + 2) as f64).log2()).sum();
    if idcg == 0.0 {
        0.0
    } else {
        dcg / idcg
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutoffMetrics {
    pub recall: f64,
    pub ndcg: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub split: SplitKind,
    /// Cutoff `k` → metrics averaged over users with non-empty ground truth.
    pub metrics: BTreeMap<usize, CutoffMetrics>,
    pub evaluated_users: usize,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl EvalReport {
    pub fn recall(&self, k: usize) -> Option<f64> {
        self.metrics.get(&k).map(|m| m.recall)
    }

    pub fn ndcg(&self, k: usize) -> Option<f64> {
        self.metrics.get(&k).map(|m| m.ndcg)
    }
}

/// Averages Recall@k and NDCG@k over users with ground truth in `which`,
/// masking each user's train items.
pub fn evaluate<S: Scorer + ?Sized>(
    scorer: &S,
    split: &SplitDataset,
    which: SplitKind,
    ks: &[usize],
) -> Result<EvalReport> {
    if ks.is_empty() || ks.contains(&0) {
        return Err(Error::Config("evaluation cutoffs must be non-empty and ≥ 1".into()));
    }
    if scorer.item_count() != split.item_count() {
        return Err(Error::DimensionMismatch {
            context: "evaluate item count",
            expected: split.item_count(),
            found: scorer.item_count(),
        });
    }
    let kmax = *ks.iter().max().expect("non-empty");
    let truth = split.part(which);
    let train = split.train();
    let per_user: Vec<Option<Vec<(f64, f64)>>> = (0..split.user_count())
        .into_par_iter()
        .map(|u| -> Result<Option<Vec<(f64, f64)>>> {
            if truth[u].is_empty() {
                return Ok(None);
            }
            let scores = scorer.item_scores(u)?;
            let ranked = top_k(&scores, &train[u], kmax);
            Ok(Some(
                ks.iter()
                    .map(|&k| (recall_at_k(&ranked, &truth[u], k), ndcg_at_k(&ranked, &truth[u], k)))
                    .collect(),
            ))
        })
        .collect::<Result<_>>()?;

    let mut sums = vec![(0.0, 0.0); ks.len()];
    let mut users = 0usize;
    for row in per_user.into_iter().flatten() {
        users += 1;
        for (s, (r, n)) in sums.iter_mut().zip(row) {
            s.0 += r;
            s.1 += n;
        }
    }
    let denom = users.max(1) as f64;
    let metrics = ks
        .iter()
        .zip(sums)
        .map(|(&k, (r, n))| {
            (
                k,
                CutoffMetrics {
                    recall: r / denom,
                    ndcg: n / denom,
                },
            )
        })
        .collect();
    Ok(EvalReport {
        split: which,
        metrics,
        evaluated_users: users,
        timestamp: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn equal_scores_rank_by_index() {
        assert_eq!(rank_items(&[0.5; 5], &[]), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn single_unmasked_item_ranks_first() {
        let ranked = rank_items(&[9.0, -1.0, 4.0], &[0, 2]);
        assert_eq!(ranked[0], 1);
    }

    #[test]
    fn recall_examples() {
        assert_eq!(recall_at_k(&[3, 1, 2], &[1, 3], 2), 1.0);
        assert_eq!(recall_at_k(&[0, 4, 2], &[1, 3], 3), 0.0);
        assert_eq!(recall_at_k(&[1, 4, 2], &[1, 3], 2), 0.5);
    }

    #[test]
    fn ndcg_examples() {
        assert_eq!(ndcg_at_k(&[1, 3, 0, 2], &[1, 3], 4), 1.0);
        assert!((ndcg_at_k(&[0, 1, 7, 2, 3], &[7], 10) - 0.5).abs() < 1e-15);
        assert_eq!(ndcg_at_k(&[0, 1, 2], &[5], 3), 0.0);
    }

    proptest! {
        #[test]
        fn rank_matches_exhaustive_sort(
            scores in prop::collection::vec(-3i32..3, 10),
            mask in prop::collection::btree_set(0usize..10, 0..4),
        ) {
            let scores: Vec<f64> = scores.into_iter().map(f64::from).collect();
            let mask: Vec<usize> = mask.into_iter().collect();
            // oracle: stable sort on (masked, −score), masked items keyed equal; stability keeps index order on ties
            let mut oracle: Vec<usize> = (0..10).collect();
            oracle.sort_by(|&a, &b| {
                let key = |i: usize| if mask.contains(&i) { (true, 0.0) } else { (false, -scores[i]) };
                let (ka, kb) = (key(a), key(b));
                ka.0.cmp(&kb.0).then(ka.1.partial_cmp(&kb.1).unwrap())
            });
            prop_assert_eq!(rank_items(&scores, &mask), oracle.clone());
            for k in 1..=10 {
                let open = 10 - mask.len();
                prop_assert_eq!(top_k(&scores, &mask, k), oracle[..k.min(open)].to_vec());
            }
        }

        #[test]
        fn metrics_monotone_in_k_and_shift_invariant(
            scores in prop::collection::vec(-5.0f64..5.0, 12),
            truth in prop::collection::btree_set(0usize..12, 1..5),
            shift in -100.0f64..100.0,
        ) {
            let truth: Vec<usize> = truth.into_iter().collect();
            let ranked = rank_items(&scores, &[]);
            let shifted: Vec<f64> = scores.iter().map(|s| s + shift).collect();
            let ranked_shifted = rank_items(&shifted, &[]);
            prop_assert_eq!(&ranked, &ranked_shifted);
            let mut prev = (0.0, 0.0);
            for k in 1..=12 {
                let cur = (recall_at_k(&ranked, &truth, k), ndcg_at_k(&ranked, &truth, k));
                prop_assert!(cur.0 >= prev.0 - 1e-15);
                prop_assert!((0.0..=1.0 + 1e-12).contains(&cur.1));
                // the ideal DCG stops growing once k ≥ |truth|; only from there is NDCG monotone
                if k > truth.len() {
                    prop_assert!(cur.1 >= prev.1 - 1e-15);
                }
                prev = cur;
            }
        }
    }
}
