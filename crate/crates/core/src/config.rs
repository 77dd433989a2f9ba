//! TOML run configuration. Every section is optional; missing keys take
//! their defaults and unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dataset::{InputFormat, SplitRatios};
use crate::error::{Error, Result};
use crate::filters::{sample_points, Basis, FilterSpec, Quadrant, SampleMode, ScalerParams};
use crate::presets::{Backbone, Preset};
use crate::training::TrainConfig;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub data: DataConfig,
    pub split: SplitConfig,
    pub filter: FilterConfig,
    pub train: TrainConfig,
    pub eval: EvalConfig,
    pub output_dir: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DataConfig {
    /// Raw interaction file read by `prepare`.
    pub input: Option<PathBuf>,
    pub format: InputFormat,
    /// Directory holding the split files and manifest.
    pub split_dir: Option<PathBuf>,
}

impl Default for DataConfig {
    fn default() -> Self {
        Self {
            input: None,
            format: InputFormat::Tsv,
            split_dir: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SplitConfig {
    pub ratios: SplitRatios,
    pub seed: u64,
}

impl Default for SplitConfig {
    fn default() -> Self {
        Self {
            ratios: SplitRatios::default(),
            seed: 42,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FilterConfig {
    /// When set, overrides `basis`/`quadrant`/`space_flip` with a named preset.
    pub preset: Option<Preset>,
    pub basis: Basis,
    pub degree: usize,
    pub a: f64,
    pub b: f64,
    pub quadrant: Quadrant,
    /// Monomial backbone; only read for the monomial basis.
    pub base_coefficients: Vec<f64>,
    pub scaler: Option<ScalerParams>,
    /// Defaults to on for the negative-at-origin quadrants (III, IV).
    pub space_flip: Option<bool>,
    pub fit_points: usize,
    pub sample: SampleMode,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self {
            preset: None,
            basis: Basis::Jacobi,
            degree: 3,
            a: 1.0,
            b: 1.0,
            quadrant: Quadrant::I,
            base_coefficients: Vec::new(),
            scaler: Some(ScalerParams::default()),
            space_flip: None,
            fit_points: 1024,
            sample: SampleMode::Uniform,
        }
    }
}

impl FilterConfig {
    /// Unfitted filter described by this section.
    pub fn spec(&self) -> FilterSpec {
        if let Some(preset) = self.preset {
            let backbone = Backbone {
                degree: self.degree,
                a: self.a,
                b: self.b,
            };
            return preset.filter(backbone, self.scaler.unwrap_or_default());
        }
        let mut spec = match self.basis {
            Basis::Monomial => FilterSpec::monomial(self.base_coefficients.clone(), self.quadrant),
            Basis::Jacobi => FilterSpec::jacobi(self.a, self.b, self.degree, self.quadrant),
        };
        spec.scaler = self.scaler;
        spec.with_space_flip(self.space_flip.unwrap_or(self.quadrant.negative_at_origin()))
    }

    /// The filter of this section, fitted on `fit_points` samples.
    pub fn fitted_spec(&self) -> Result<FilterSpec> {
        let mut spec = self.spec();
        spec.fit(&sample_points(self.fit_points, self.sample))?;
        Ok(spec)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvalConfig {
    pub ks: Vec<usize>,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self { ks: vec![10, 20] }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Canonical serialization; parsing it back yields an equal config.
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        self.split.ratios.validate()?;
        self.train.validate()?;
        if self.eval.ks.is_empty() || self.eval.ks.contains(&0) {
            return Err(Error::Config("eval.ks must be non-empty and ≥ 1".into()));
        }
        if self.filter.fit_points == 0 {
            return Err(Error::Config("filter.fit_points must be ≥ 1".into()));
        }
        self.filter.spec().validate()
    }
}
