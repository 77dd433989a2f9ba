//! Sign-versus-hop-parity tables for signal matrices.
//!
//! On a bipartite graph `Âⁱ[p, q]` is non-zero only when `i ≥ h` and
//! `i ≡ h (mod 2)`, `h` being the hop distance, so a monomial filter's entry
//! at distance `h` collects only coefficients of that parity and inherits the
//! quadrant sign of order `h`.

use serde::{Deserialize, Serialize};

use crate::dense::DenseMatrix;
use crate::filters::Quadrant;
use crate::graph::SparseAdjacency;
use crate::lab::eigen::DenseSpectrum;
use crate::lab::graphs::hop_distances;
use crate::lab::signals::exact_polynomial_signal;

/// Entries at or below this magnitude carry no reliable sign.
pub const SIGN_EPS: f64 = 1e-12;
/// Slack when comparing magnitudes along a path.
pub const DECAY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairSign {
    pub p: usize,
    pub q: usize,
    pub hops: usize,
    pub value: f64,
    pub predicted_sign: f64,
    pub matches: bool,
}

/// `|S[p, q]| > |S[p, r]|` although `r` precedes `q` on a shortest path from `p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayViolation {
    pub p: usize,
    pub nearer: usize,
    pub farther: usize,
    pub nearer_value: f64,
    pub farther_value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParityReport {
    pub quadrant: Quadrant,
    pub max_hops: usize,
    /// Every pair `p ≤ q` within `max_hops` whose entry exceeds [`SIGN_EPS`].
    pub pairs: Vec<PairSign>,
    pub excluded: usize,
    pub decay_violations: Vec<DecayViolation>,
}

impl ParityReport {
    pub fn sign_violations(&self) -> usize {
        self.pairs.iter().filter(|p| !p.matches).count()
    }

    pub fn passed(&self) -> bool {
        self.sign_violations() == 0 && self.decay_violations.is_empty()
    }
}

/// Checks `s` against the quadrant's sign rule for all pairs within
/// `max_hops`, and checks magnitudes never grow along a shortest path.
pub fn sign_pattern(adj: &SparseAdjacency, s: &DenseMatrix, quadrant: Quadrant, max_hops: usize) -> ParityReport {
    let n = adj.node_count();
    let mut pairs = Vec::new();
    let mut excluded = 0;
    let mut decay_violations = Vec::new();
    for p in 0..n {
        let dist = hop_distances(adj, p);
        for q in 0..n {
            let Some(h) = dist[q] else { continue };
            if h > max_hops {
                continue;
            }
            let value = s.get(p, q);
            if q >= p {
                if value.abs() <= SIGN_EPS {
                    excluded += 1;
                } else {
                    let predicted_sign = quadrant.predicted_sign(h);
                    pairs.push(PairSign {
                        p,
                        q,
                        hops: h,
                        value,
                        predicted_sign,
                        matches: value.signum() == predicted_sign,
                    });
                }
            }
            if h == 0 {
                continue;
            }
            for &r in adj.neighbours(q) {
                if dist[r] == Some(h - 1) && value.abs() > s.get(p, r).abs() + DECAY_TOL {
                    decay_violations.push(DecayViolation {
                        p,
                        nearer: r,
                        farther: q,
                        nearer_value: s.get(p, r),
                        farther_value: value,
                    });
                }
            }
        }
    }
    ParityReport {
        quadrant,
        max_hops,
        pairs,
        excluded,
        decay_violations,
    }
}

/// Sign pattern of `S₁` for the monomial filter `coeffs` (already signed)
/// against the rule of `quadrant`, within `coeffs.len() − 1` hops.
pub fn parity_sign_pattern(
    adj: &SparseAdjacency,
    spectrum: &DenseSpectrum,
    coeffs: &[f64],
    quadrant: Quadrant,
) -> ParityReport {
    let s1 = exact_polynomial_signal(spectrum, coeffs).matrix;
    sign_pattern(adj, &s1, quadrant, coeffs.len().saturating_sub(1))
}
