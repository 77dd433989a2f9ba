//! Scalar graph-signal filter functions on `λ ∈ [-1, 1]`.
//!
//! A [`FilterSpec`] describes a backbone (monomial or Jacobi), an optional
//! sigmoid frequency scaler and the quadrant sign construction. Fitting turns
//! the scaled backbone into monomial coefficients, which is the only form the
//! propagation stage consumes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Monomial,
    Jacobi,
}

/// Sign construction applied to non-negative coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
pub enum Quadrant {
    /// Low(I): `Σ αᵢλⁱ`
    #[value(name = "I")]
    I,
    /// High(II): `Σ (−1)ⁱ αᵢλⁱ`
    #[value(name = "II")]
    II,
    /// High(III): `Σ (−1)^{i+1} αᵢλⁱ`
    #[value(name = "III")]
    III,
    /// Low(IV): `−Σ αᵢλⁱ`
    #[value(name = "IV")]
    IV,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [Quadrant::I, Quadrant::II, Quadrant::III, Quadrant::IV];

    /// Sign multiplying the order-`i` coefficient.
    pub fn sign(self, i: usize) -> f64 {
        let odd = i % 2 == 1;
        match self {
            Quadrant::I => 1.0,
            Quadrant::IV => -1.0,
            Quadrant::II => {
                if odd {
                    -1.0
                } else {
                    1.0
                }
            }
            Quadrant::III => {
                if odd {
                    1.0
                } else {
                    -1.0
                }
            }
        }
    }

    /// Predicted sign of the graph signal between two nodes `hops` apart.
    pub fn predicted_sign(self, hops: usize) -> f64 {
        self.sign(hops)
    }

    /// Whether the embedding needs a space flip to express this quadrant.
    pub fn negative_at_origin(self) -> bool {
        matches!(self, Quadrant::III | Quadrant::IV)
    }

    pub fn is_high_frequency(self) -> bool {
        matches!(self, Quadrant::II | Quadrant::III)
    }

    pub fn name(self) -> &'static str {
        match self {
            Quadrant::I => "I",
            Quadrant::II => "II",
            Quadrant::III => "III",
            Quadrant::IV => "IV",
        }
    }
}

impl std::fmt::Display for Quadrant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalerParams {
    /// Amplitude, > 0.
    pub mu: f64,
    /// Steepness; negative values pass low frequencies, positive high.
    pub alpha: f64,
    /// Position of the transition at `λ = −β`.
    pub beta: f64,
}

impl ScalerParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(Error::InvalidFilter(format!("scaler mu must be > 0, got {}", self.mu)));
        }
        if !self.alpha.is_finite() || !self.beta.is_finite() {
            return Err(Error::InvalidFilter("scaler alpha/beta must be finite".into()));
        }
        Ok(())
    }
}

impl Default for ScalerParams {
    fn default() -> Self {
        Self {
            mu: 1.0,
            alpha: -3.0,
            beta: 0.0,
        }
    }
}

/// Horner evaluation of `Σ cᵢ λⁱ`.
pub fn eval_monomial(coeffs: &[f64], lambda: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * lambda + c)
}

/// `J_k^{a,b}(λ)` by the three-term recurrence.
pub fn eval_jacobi_basis(a: f64, b: f64, k: usize, lambda: f64) -> f64 {
    let mut values = jacobi_bases(a, b, k, lambda);
    values.pop().unwrap_or(1.0)
}

/// `[J_0, …, J_n]` at `λ`.
pub fn jacobi_bases(a: f64, b: f64, n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n == 0 {
        return out;
    }
    out.push((a + b + 2.0) * x / 2.0 + (a - b) / 2.0);
    for k in 2..=n {
        let k = k as f64;
        let s = 2.0 * k + a + b;
        let theta = s * (s - 1.0) / (2.0 * k * (k + a + b));
        let theta_p = (s - 1.0) * (a * a - b * b) / (2.0 * k * (k + a + b) * (s - 2.0));
        let theta_pp = (k + a - 1.0) * (k + b - 1.0) * s / (k * (k + a + b) * (s - 2.0));
        let len = out.len();
        let next = (theta * x + theta_p) * out[len - 1] - theta_pp * out[len - 2];
        out.push(next);
    }
    out
}

/// Mean of the Jacobi bases `0..=n` at `λ`.
pub fn eval_jacobi_backbone(a: f64, b: f64, n: usize, lambda: f64) -> f64 {
    jacobi_bases(a, b, n, lambda).iter().sum::<f64>() / (n + 1) as f64
}

/// `μ / (1 + e^{α(λ+β)})`, evaluated without exponentiating a positive
/// argument.
pub fn eval_scaler(p: &ScalerParams, lambda: f64) -> f64 {
    let t = p.alpha * (lambda + p.beta);
    if t > 0.0 {
        let e = (-t).exp();
        p.mu * e / (1.0 + e)
    } else {
        p.mu / (1.0 + t.exp())
    }
}

/// Applies a quadrant's sign rule to the absolute values of `coeffs`.
pub fn signed_coefficients(coeffs: &[f64], quadrant: Quadrant) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| quadrant.sign(i) * c.abs())
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum SampleMode {
    /// `m` evenly spaced points including both endpoints.
    #[default]
    Uniform,
    /// `m` seeded uniform-random points.
    Random { seed: u64 },
}

pub fn sample_points(m: usize, mode: SampleMode) -> Vec<f64> {
    match mode {
        SampleMode::Uniform => match m {
            0 => Vec::new(),
            1 => vec![0.0],
            _ => (0..m).map(|k| -1.0 + 2.0 * k as f64 / (m - 1) as f64).collect(),
        },
        SampleMode::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..m).map(|_| rng.gen_range(-1.0..=1.0)).collect()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub coefficients: Vec<f64>,
    /// Root-mean-square residual over the fitting samples.
    pub rmse: f64,
}

/// Least-squares monomial coefficients of degree `degree` for `target` over
/// the sample points, solved through the Vandermonde normal equations.
pub fn fit_monomial(target: impl Fn(f64) -> f64, degree: usize, points: &[f64]) -> Result<FitResult> {
    let p = degree + 1;
    let mut distinct: Vec<f64> = points.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < p {
        return Err(Error::RankDeficient {
            distinct: distinct.len(),
            required: p,
        });
    }
    let ys: Vec<f64> = points.iter().map(|&x| target(x)).collect();
    if ys.iter().any(|y| !y.is_finite()) {
        return Err(Error::InvalidFilter(
            "fit target is not finite on the sample points".into(),
        ));
    }

    // Gram matrix G = VᵀV and rhs Vᵀy
    let mut gram = vec![0.0; p * p];
    let mut rhs = vec![0.0; p];
    let mut powers = vec![0.0; p];
    for (&x, &y) in points.iter().zip(&ys) {
        let mut acc = 1.0;
        for pw in powers.iter_mut() {
            *pw = acc;
            acc *= x;
        }
        for r in 0..p {
            rhs[r] += powers[r] * y;
            for c in 0..p {
                gram[r * p + c] += powers[r] * powers[c];
            }
        }
    }
    let coefficients = cholesky_solve(&mut gram, &mut rhs, p).ok_or(Error::RankDeficient {
        distinct: distinct.len(),
        required: p,
    })?;
    let sse: f64 = points
        .iter()
        .zip(&ys)
        .map(|(&x, &y)| (eval_monomial(&coefficients, x) - y).powi(2))
        .sum();
    Ok(FitResult {
        coefficients,
        rmse: (sse / points.len() as f64).sqrt(),
    })
}

/// Solves the SPD system in place; `None` when a pivot is not positive.
fn cholesky_solve(a: &mut [f64], b: &mut [f64], n: usize) -> Option<Vec<f64>> {
    let scale = (0..n).map(|i| a[i * n + i]).fold(0.0f64, f64::max);
    for j in 0..n {
        let mut diag = a[j * n + j];
        for k in 0..j {
            diag -= a[j * n + k] * a[j * n + k];
        }
        if diag <= scale * 1e-14 {
            return None;
        }
        let diag = diag.sqrt();
        a[j * n + j] = diag;
        for i in (j + 1)..n {
            let mut v = a[i * n + j];
            for k in 0..j {
                v -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = v / diag;
        }
    }
    // L y = b
    for i in 0..n {
        let mut v = b[i];
        for k in 0..i {
            v -= a[i * n + k] * b[k];
        }
        b[i] = v / a[i * n + i];
    }
    // Lᵀ x = y
    for i in (0..n).rev() {
        let mut v = b[i];
        for k in (i + 1)..n {
            v -= a[k * n + i] * b[k];
        }
        b[i] = v / a[i * n + i];
    }
    Some(b.to_vec())
}

/// A graph-signal filter: backbone, quadrant rule, optional scaler and the
/// fitted monomial coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterSpec {
    pub basis: Basis,
    pub degree: usize,
    #[serde(default = "default_jacobi_param")]
    pub a: f64,
    #[serde(default = "default_jacobi_param")]
    pub b: f64,
    pub quadrant: Quadrant,
    /// Non-negative monomial coefficients of the quadrant-I backbone. Only
    /// read for the monomial basis.
    #[serde(default)]
    pub base_coefficients: Vec<f64>,
    #[serde(default)]
    pub scaler: Option<ScalerParams>,
    /// Negate the user side of every score.
    #[serde(default)]
    pub space_flip: bool,
    /// Raw least-squares coefficients of the quadrant-I scaled backbone.
    #[serde(default)]
    pub fitted_coefficients: Option<Vec<f64>>,
    #[serde(default)]
    pub fit_residual: Option<f64>,
    /// Propagate the raw fit instead of the quadrant-signed magnitudes.
    #[serde(default)]
    pub keep_fitted_signs: bool,
    /// Quadrant-signed coefficients consumed by propagation.
    #[serde(default)]
    pub propagation_coefficients: Option<Vec<f64>>,
}

fn default_jacobi_param() -> f64 {
    1.0
}

impl FilterSpec {
    pub fn monomial(base_coefficients: Vec<f64>, quadrant: Quadrant) -> Self {
        Self {
            basis: Basis::Monomial,
            degree: base_coefficients.len().saturating_sub(1),
            a: default_jacobi_param(),
            b: default_jacobi_param(),
            quadrant,
            base_coefficients,
            scaler: None,
            space_flip: false,
            fitted_coefficients: None,
            fit_residual: None,
            keep_fitted_signs: false,
            propagation_coefficients: None,
        }
    }

    pub fn jacobi(a: f64, b: f64, degree: usize, quadrant: Quadrant) -> Self {
        Self {
            basis: Basis::Jacobi,
            degree,
            a,
            b,
            quadrant,
            base_coefficients: Vec::new(),
            scaler: None,
            space_flip: false,
            fitted_coefficients: None,
            fit_residual: None,
            keep_fitted_signs: false,
            propagation_coefficients: None,
        }
    }

    /// LightGCN's mean over hops `0..=n`.
    pub fn lightgcn(degree: usize) -> Self {
        Self::monomial(vec![1.0 / (degree + 1) as f64; degree + 1], Quadrant::I)
    }

    pub fn with_scaler(mut self, scaler: ScalerParams) -> Self {
        self.scaler = Some(scaler);
        self
    }

    pub fn with_fitted_signs(mut self) -> Self {
        self.keep_fitted_signs = true;
        self
    }

    pub fn with_space_flip(mut self, flip: bool) -> Self {
        self.space_flip = flip;
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.basis {
            Basis::Monomial => {
                if self.base_coefficients.len() != self.degree + 1 {
                    return Err(Error::InvalidFilter(format!(
                        "degree {} needs {} base coefficients, got {}",
                        self.degree,
                        self.degree + 1,
                        self.base_coefficients.len()
                    )));
                }
                if self.base_coefficients.iter().any(|c| !c.is_finite() || *c < 0.0) {
                    return Err(Error::InvalidFilter(
                        "base coefficients must be finite and non-negative".into(),
                    ));
                }
                if self.base_coefficients.iter().all(|c| *c == 0.0) {
                    return Err(Error::InvalidFilter("base coefficients are all zero".into()));
                }
            }
            Basis::Jacobi => {
                if !(self.a > -1.0 && self.b > -1.0) {
                    return Err(Error::InvalidFilter(format!(
                        "Jacobi parameters must exceed -1, got a={}, b={}",
                        self.a, self.b
                    )));
                }
            }
        }
        if let Some(s) = &self.scaler {
            s.validate()?;
        }
        Ok(())
    }

    /// Quadrant-I backbone `f(λ)` before scaling.
    pub fn base_value(&self, lambda: f64) -> f64 {
        match self.basis {
            Basis::Monomial => eval_monomial(&self.base_coefficients, lambda),
            Basis::Jacobi => eval_jacobi_backbone(self.a, self.b, self.degree, lambda),
        }
    }

    /// Quadrant-signed backbone. For the monomial basis this is the sign rule
    /// on the base coefficients; a Jacobi backbone has no monomial form of its
    /// own, so its fitted coefficients are signed instead (after fitting) and
    /// the unfitted value is the mirrored/negated backbone.
    pub fn apply_quadrant(&self, lambda: f64) -> f64 {
        match self.basis {
            Basis::Monomial => eval_monomial(&signed_coefficients(&self.base_coefficients, self.quadrant), lambda),
            Basis::Jacobi => match &self.fitted_coefficients {
                Some(c) => eval_monomial(&signed_coefficients(c, self.quadrant), lambda),
                None => {
                    let f = |x| eval_jacobi_backbone(self.a, self.b, self.degree, x);
                    match self.quadrant {
                        Quadrant::I => f(lambda),
                        Quadrant::II => f(-lambda),
                        Quadrant::III => -f(-lambda),
                        Quadrant::IV => -f(lambda),
                    }
                }
            },
        }
    }

    pub fn scaler_value(&self, lambda: f64) -> f64 {
        self.scaler.as_ref().map_or(1.0, |s| eval_scaler(s, lambda))
    }

    /// `f'(λ) = g(λ) · f(λ)` on the quadrant-signed backbone; `g ≡ 1` when
    /// no scaler is configured.
    pub fn scaled_filter(&self) -> impl Fn(f64) -> f64 + '_ {
        move |lambda| self.scaler_value(lambda) * self.apply_quadrant(lambda)
    }

    /// The fitting target: the scaled quadrant-I backbone.
    pub fn fit_target(&self, lambda: f64) -> f64 {
        self.scaler_value(lambda) * self.base_value(lambda)
    }

    /// Fits monomial coefficients to the scaled backbone and stores both the
    /// raw fit and the quadrant-signed propagation coefficients.
    pub fn fit(&mut self, points: &[f64]) -> Result<FitResult> {
        self.validate()?;
        let fit = fit_monomial(|x| self.fit_target(x), self.degree, points)?;
        self.propagation_coefficients = Some(if self.keep_fitted_signs {
            fit.coefficients.clone()
        } else {
            signed_coefficients(&fit.coefficients, self.quadrant)
        });
        self.fitted_coefficients = Some(fit.coefficients.clone());
        self.fit_residual = Some(fit.rmse);
        Ok(fit)
    }

    /// Fitted `f''(λ)` with the quadrant sign rule applied.
    pub fn fitted_value(&self, lambda: f64) -> Option<f64> {
        self.propagation_coefficients.as_ref().map(|c| eval_monomial(c, lambda))
    }

    pub fn require_propagation_coefficients(&self) -> Result<&[f64]> {
        self.propagation_coefficients
            .as_deref()
            .ok_or_else(|| Error::InvalidFilter("filter has not been fitted".into()))
    }
}
