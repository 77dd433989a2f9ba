//! Exact graph signals `S₁ = U f(Λ) Uᵀ`, graph-embedding signals
//! `S₂ = (f(Â)E⁰)(f(Â)E⁰)ᵀ` and the identities relating them.

use serde::{Deserialize, Serialize};

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::filters::eval_monomial;
use crate::graph::SparseAdjacency;
use crate::lab::eigen::DenseSpectrum;
use crate::propagation::{hop_embeddings, propagate, signal_matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignalKind {
    /// Graph signal, `U f(Λ) Uᵀ`.
    Gs,
    /// Graph-embedding signal, `±E Eᵀ`.
    Ges,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SignalMatrix {
    pub kind: SignalKind,
    pub matrix: DenseMatrix,
}

/// `S₁ = U diag(f(λ)) Uᵀ`.
pub fn exact_graph_signal(spectrum: &DenseSpectrum, f: impl Fn(f64) -> f64) -> SignalMatrix {
    SignalMatrix {
        kind: SignalKind::Gs,
        matrix: spectrum.apply(f),
    }
}

/// `S₁` of the monomial filter with the given (signed) coefficients.
pub fn exact_polynomial_signal(spectrum: &DenseSpectrum, coeffs: &[f64]) -> SignalMatrix {
    exact_graph_signal(spectrum, |l| eval_monomial(coeffs, l))
}

/// `Σ cᵢ Âⁱ` by repeated dense multiplication.
pub fn polynomial_of_adjacency(adj: &SparseAdjacency, coeffs: &[f64], cap: usize) -> Result<DenseMatrix> {
    let n = adj.node_count();
    if n > cap {
        return Err(Error::DenseCapExceeded { nodes: n, cap });
    }
    propagate(adj, &DenseMatrix::identity(n), coeffs)
}

/// `S₂ = ±(Σ cᵢ ÂⁱE⁰)(Σ cᵢ ÂⁱE⁰)ᵀ`.
pub fn ges_matrix(
    adj: &SparseAdjacency,
    coeffs: &[f64],
    e0: &DenseMatrix,
    flipped: bool,
    cap: usize,
) -> Result<SignalMatrix> {
    if adj.node_count() > cap {
        return Err(Error::DenseCapExceeded {
            nodes: adj.node_count(),
            cap,
        });
    }
    let e = propagate(adj, e0, coeffs)?;
    Ok(SignalMatrix {
        kind: SignalKind::Ges,
        matrix: signal_matrix(&e, flipped, cap)?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignBlindnessReport {
    /// `max |ges(f) − ges(−f)|`.
    pub ges_deviation: f64,
    /// `max |S₁(f) + S₁(−f)|`.
    pub gs_deviation: f64,
    /// `max |S₁(f)|`, for scale.
    pub gs_magnitude: f64,
}

impl SignBlindnessReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.ges_deviation <= tol && self.gs_deviation <= tol
    }
}

/// Compares `f` against `−f`: the embedding signal cannot tell them apart
/// while the exact graph signal changes sign.
pub fn verify_sign_blindness(
    adj: &SparseAdjacency,
    spectrum: &DenseSpectrum,
    coeffs: &[f64],
    e0: &DenseMatrix,
    cap: usize,
) -> Result<SignBlindnessReport> {
    let negated: Vec<f64> = coeffs.iter().map(|c| -c).collect();
    let ges_pos = ges_matrix(adj, coeffs, e0, false, cap)?.matrix;
    let ges_neg = ges_matrix(adj, &negated, e0, false, cap)?.matrix;
    let gs_pos = exact_polynomial_signal(spectrum, coeffs).matrix;
    let gs_neg = exact_polynomial_signal(spectrum, &negated).matrix;
    let mut sum = gs_pos.clone();
    sum.add_scaled(1.0, &gs_neg)?;
    Ok(SignBlindnessReport {
        ges_deviation: ges_pos.max_abs_diff(&ges_neg)?,
        gs_deviation: sum.max_abs(),
        gs_magnitude: gs_pos.max_abs(),
    })
}

/// Parity split of `E Eᵀ` for `E = Σ αᵢ Eⁱ`, `Eⁱ = ÂⁱE⁰`.
#[derive(Clone, Debug, PartialEq)]
pub struct OddEvenDecomposition {
    /// `Σ_{i+j odd} αᵢαⱼ Eⁱ(Eʲ)ᵀ`.
    pub s_odd: DenseMatrix,
    /// `Σ_{i+j even} αᵢαⱼ Eⁱ(Eʲ)ᵀ`.
    pub s_even: DenseMatrix,
    /// `E_I E_Iᵀ` with all-positive coefficients.
    pub s_low: DenseMatrix,
    /// `−E_III E_IIIᵀ`, the flipped quadrant-III signal.
    pub s_high_flipped: DenseMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OddEvenResiduals {
    /// `max |S_I − (S_odd + S_even)|`.
    pub low: f64,
    /// `max |S_III − (S_odd − S_even)|`.
    pub high: f64,
    /// `max |S_I + S_III − 2 S_odd|`.
    pub sum: f64,
    /// `max |S_I − S_III − 2 S_even|`.
    pub difference: f64,
}

impl OddEvenResiduals {
    pub fn max(&self) -> f64 {
        self.low.max(self.high).max(self.sum).max(self.difference)
    }
}

impl OddEvenDecomposition {
    pub fn residuals(&self) -> Result<OddEvenResiduals> {
        let combine = |a: &DenseMatrix, sa: f64, b: &DenseMatrix, sb: f64| -> Result<DenseMatrix> {
            let mut out = a.scaled(sa);
            out.add_scaled(sb, b)?;
            Ok(out)
        };
        Ok(OddEvenResiduals {
            low: self
                .s_low
                .max_abs_diff(&combine(&self.s_odd, 1.0, &self.s_even, 1.0)?)?,
            high: self
                .s_high_flipped
                .max_abs_diff(&combine(&self.s_odd, 1.0, &self.s_even, -1.0)?)?,
            sum: combine(&self.s_low, 1.0, &self.s_high_flipped, 1.0)?.max_abs_diff(&self.s_odd.scaled(2.0))?,
            difference: combine(&self.s_low, 1.0, &self.s_high_flipped, -1.0)?
                .max_abs_diff(&self.s_even.scaled(2.0))?,
        })
    }
}

/// Expands the low (quadrant I) and flipped high (quadrant III) embedding
/// signals of the magnitudes `alphas` into hop-parity components.
pub fn odd_even_decomposition(
    adj: &SparseAdjacency,
    alphas: &[f64],
    e0: &DenseMatrix,
    cap: usize,
) -> Result<OddEvenDecomposition> {
    if alphas.is_empty() {
        return Err(Error::InvalidFilter("odd/even decomposition needs coefficients".into()));
    }
    let n = adj.node_count();
    if n > cap {
        return Err(Error::DenseCapExceeded { nodes: n, cap });
    }
    let hops = hop_embeddings(adj, e0, alphas.len() - 1)?;
    let mut s_odd = DenseMatrix::zeros(n, n);
    let mut s_even = DenseMatrix::zeros(n, n);
    for (i, (ai, ei)) in alphas.iter().zip(&hops).enumerate() {
        for (j, (aj, ej)) in alphas.iter().zip(&hops).enumerate() {
            let term = ei.matmul_transpose(ej)?;
            let target = if (i + j) % 2 == 1 { &mut s_odd } else { &mut s_even };
            target.add_scaled(ai * aj, &term)?;
        }
    }
    let low = crate::filters::signed_coefficients(alphas, crate::filters::Quadrant::I);
    let high = crate::filters::signed_coefficients(alphas, crate::filters::Quadrant::III);
    let e_low = propagate(adj, e0, &low)?;
    let e_high = propagate(adj, e0, &high)?;
    Ok(OddEvenDecomposition {
        s_odd,
        s_even,
        s_low: signal_matrix(&e_low, false, cap)?,
        s_high_flipped: signal_matrix(&e_high, true, cap)?,
    })
}
