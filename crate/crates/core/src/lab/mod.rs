//! Dense, small-graph verification of the spectral identities behind the
//! quadrant filters: eigendecomposition, exact and embedding signals,
//! sign-parity tables and the odd/even split.

pub mod eigen;
pub mod graphs;
pub mod parity;
pub mod signals;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::filters::{signed_coefficients, Quadrant};
use crate::graph::SparseAdjacency;
use crate::propagation::DENSE_CAP;

pub use eigen::{dense_eigendecomposition, symmetric_eigen, DenseSpectrum};
pub use graphs::{build_case_graph, random_bipartite, random_tree};
pub use parity::{parity_sign_pattern, sign_pattern, ParityReport};
pub use signals::{
    exact_graph_signal, ges_matrix, odd_even_decomposition, verify_sign_blindness, SignBlindnessReport, SignalKind,
    SignalMatrix,
};

/// Tolerance for the identities that hold exactly in exact arithmetic.
pub const IDENTITY_TOL: f64 = 1e-10;
/// Tolerance for results that pass through the eigensolver.
pub const SPECTRAL_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalysisOptions {
    /// Non-negative filter magnitudes `α₀..αₙ`.
    pub alphas: Vec<f64>,
    pub embedding_dim: usize,
    pub embedding_seed: u64,
    /// Flip the sign of `α₁` after the quadrant rule, so the parity checks
    /// must fail.
    pub corrupt_signs: bool,
    pub cap: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            alphas: vec![1.0, 0.5, 0.25, 0.125],
            embedding_dim: 8,
            embedding_seed: 7,
            corrupt_signs: false,
            cap: DENSE_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Worst observed deviation or violation count.
    pub value: f64,
    pub tolerance: f64,
}

impl Check {
    fn deviation(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            passed: value <= tolerance,
            value,
            tolerance,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub user_count: usize,
    pub item_count: usize,
    pub alphas: Vec<f64>,
    pub corrupt_signs: bool,
    pub eigenvalues: Vec<f64>,
    pub checks: Vec<Check>,
    pub parity: Vec<ParityReport>,
    pub sign_blindness: Vec<(Quadrant, SignBlindnessReport)>,
    /// `S₁` per quadrant, `S₂` for quadrant I and the flipped `S₂` for
    /// quadrant III, for heatmaps.
    #[serde(skip)]
    pub heatmaps: Vec<(String, DenseMatrix)>,
}

impl AnalysisReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    /// `Err(CheckFailed)` naming every failed check.
    pub fn into_result(self) -> Result<Self> {
        if self.passed() {
            Ok(self)
        } else {
            let names: Vec<&str> = self.failures().iter().map(|c| c.name.as_str()).collect();
            Err(Error::CheckFailed(names.join(", ")))
        }
    }
}

/// Uniform `[-1, 1)` initial embeddings for the lab.
pub fn random_embeddings(rows: usize, dim: usize, seed: u64) -> DenseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DenseMatrix::from_fn(rows, dim, |_, _| rng.gen_range(-1.0..1.0))
}

fn quadrant_coefficients(alphas: &[f64], q: Quadrant, corrupt: bool) -> Vec<f64> {
    let mut c = signed_coefficients(alphas, q);
    if corrupt && c.len() > 1 {
        c[1] = -c[1];
    }
    c
}

/// Runs every lab check on `adj`.
pub fn analyze(adj: &SparseAdjacency, opts: &AnalysisOptions) -> Result<AnalysisReport> {
    if opts.alphas.is_empty() || opts.alphas.iter().any(|a| !a.is_finite() || *a < 0.0) {
        return Err(Error::InvalidFilter(
            "lab coefficients must be finite and non-negative".into(),
        ));
    }
    let n = adj.node_count();
    let spectrum = dense_eigendecomposition(adj, opts.cap)?;
    let a = adj.to_dense();
    let degree = opts.alphas.len() - 1;
    let mut checks = vec![
        Check::deviation("eigen/orthogonality", spectrum.orthogonality_error(), SPECTRAL_TOL),
        Check::deviation("eigen/reconstruction", spectrum.reconstruction_error(&a)?, SPECTRAL_TOL),
        Check::deviation("eigen/bipartite-symmetry", spectrum.symmetry_error(), SPECTRAL_TOL),
    ];

    let mut parity = Vec::new();
    let mut heatmaps = Vec::new();
    for q in Quadrant::ALL {
        let coeffs = quadrant_coefficients(&opts.alphas, q, opts.corrupt_signs);
        let s1 = signals::exact_polynomial_signal(&spectrum, &coeffs).matrix;
        let poly = signals::polynomial_of_adjacency(adj, &coeffs, opts.cap)?;
        checks.push(Check::deviation(
            format!("spectral-equivalence/{q}"),
            s1.max_abs_diff(&poly)?,
            SPECTRAL_TOL,
        ));
        let report = sign_pattern(adj, &s1, q, degree);
        checks.push(Check::deviation(
            format!("parity-signs/{q}"),
            report.sign_violations() as f64,
            0.0,
        ));
        checks.push(Check::deviation(
            format!("path-decay/{q}"),
            report.decay_violations.len() as f64,
            0.0,
        ));
        parity.push(report);
        heatmaps.push((format!("gs-{q}"), s1));
    }

    let e0 = random_embeddings(n, opts.embedding_dim, opts.embedding_seed);
    let mut sign_blindness = Vec::new();
    for q in [Quadrant::I, Quadrant::II] {
        let coeffs = signed_coefficients(&opts.alphas, q);
        let r = verify_sign_blindness(adj, &spectrum, &coeffs, &e0, opts.cap)?;
        checks.push(Check::deviation(
            format!("sign-blindness-ges/{q}"),
            r.ges_deviation,
            IDENTITY_TOL,
        ));
        checks.push(Check::deviation(
            format!("sign-blindness-gs/{q}"),
            r.gs_deviation,
            IDENTITY_TOL,
        ));
        sign_blindness.push((q, r));
    }

    let low = ges_matrix(
        adj,
        &signed_coefficients(&opts.alphas, Quadrant::I),
        &e0,
        false,
        opts.cap,
    )?;
    heatmaps.push(("ges-I".to_string(), low.matrix));
    let high_coeffs = quadrant_coefficients(&opts.alphas, Quadrant::III, opts.corrupt_signs);
    let flipped = ges_matrix(adj, &high_coeffs, &e0, true, opts.cap)?;
    heatmaps.push(("ges-III-flipped".to_string(), flipped.matrix));
    // with E⁰ = I the flipped signal is −P_III², itself a quadrant-III polynomial of degree 2n
    let unit = ges_matrix(adj, &high_coeffs, &DenseMatrix::identity(n), true, opts.cap)?;
    let unit_report = sign_pattern(adj, &unit.matrix, Quadrant::III, 2 * degree);
    checks.push(Check::deviation(
        "flipped-ges-signs/III",
        unit_report.sign_violations() as f64,
        0.0,
    ));

    let split = odd_even_decomposition(adj, &opts.alphas, &e0, opts.cap)?;
    checks.push(Check::deviation("odd-even", split.residuals()?.max(), IDENTITY_TOL));

    Ok(AnalysisReport {
        user_count: adj.user_count(),
        item_count: adj.item_count(),
        alphas: opts.alphas.clone(),
        corrupt_signs: opts.corrupt_signs,
        eigenvalues: spectrum.eigenvalues,
        checks,
        parity,
        sign_blindness,
        heatmaps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_graph_passes_every_check() {
        let r = analyze(&build_case_graph(), &AnalysisOptions::default()).unwrap();
        assert!(r.passed(), "{:?}", r.failures());
        assert_eq!(r.eigenvalues.len(), 8);
    }

    #[test]
    fn corrupted_signs_fail() {
        let opts = AnalysisOptions {
            corrupt_signs: true,
            ..AnalysisOptions::default()
        };
        let r = analyze(&build_case_graph(), &opts).unwrap();
        assert!(!r.passed());
        assert!(matches!(r.into_result(), Err(Error::CheckFailed(_))));
    }

    #[test]
    fn random_analysis_is_deterministic() {
        let adj = random_bipartite(8, 8, 0.3, 7).unwrap();
        let a = analyze(&adj, &AnalysisOptions::default()).unwrap();
        let b = analyze(&adj, &AnalysisOptions::default()).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
