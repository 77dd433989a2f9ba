//! Named filter configurations for the main model and its ablations.

use serde::{Deserialize, Serialize};

use crate::filters::{FilterSpec, Quadrant, ScalerParams};

/// Jacobi backbone shared by every preset except LightGCN.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Backbone {
    pub degree: usize,
    pub a: f64,
    pub b: f64,
}

impl Default for Backbone {
    fn default() -> Self {
        Self {
            degree: 3,
            a: 1.0,
            b: 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// Uniform mean over hops.
    #[value(name = "lightgcn")]
    LightGcn,
    /// Jacobi backbone propagated with its raw fitted signs.
    #[value(name = "jgcf")]
    Jgcf,
    /// Jacobi backbone, quadrant I.
    #[value(name = "jgcf-l")]
    JgcfL,
    /// Jacobi backbone, quadrant III, no space flip.
    #[value(name = "jgcf-h")]
    JgcfH,
    /// Jacobi backbone, quadrant III with space flip.
    #[value(name = "jgcf-h-sf")]
    JgcfHSf,
    /// Scaled Jacobi backbone, quadrant I.
    #[value(name = "simgcf-i")]
    SimGcfI,
    /// Scaled Jacobi backbone, quadrant III with space flip.
    #[value(name = "simgcf-iii")]
    SimGcfIII,
}

impl Preset {
    pub const ALL: [Preset; 7] = [
        Preset::LightGcn,
        Preset::Jgcf,
        Preset::JgcfL,
        Preset::JgcfH,
        Preset::JgcfHSf,
        Preset::SimGcfI,
        Preset::SimGcfIII,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::LightGcn => "lightgcn",
            Preset::Jgcf => "jgcf",
            Preset::JgcfL => "jgcf-l",
            Preset::JgcfH => "jgcf-h",
            Preset::JgcfHSf => "jgcf-h-sf",
            Preset::SimGcfI => "simgcf-i",
            Preset::SimGcfIII => "simgcf-iii",
        }
    }

    /// The main model in quadrant I or III.
    pub fn variant(quadrant: Quadrant) -> Option<Preset> {
        match quadrant {
            Quadrant::I => Some(Preset::SimGcfI),
            Quadrant::III => Some(Preset::SimGcfIII),
            _ => None,
        }
    }

    /// Unfitted filter for this preset.
    pub fn filter(self, backbone: Backbone, scaler: ScalerParams) -> FilterSpec {
        let jacobi = |q| FilterSpec::jacobi(backbone.a, backbone.b, backbone.degree, q);
        match self {
            Preset::LightGcn => FilterSpec::lightgcn(backbone.degree),
            Preset::Jgcf => jacobi(Quadrant::I).with_fitted_signs(),
            Preset::JgcfL => jacobi(Quadrant::I),
            Preset::JgcfH => jacobi(Quadrant::III),
            Preset::JgcfHSf => jacobi(Quadrant::III).with_space_flip(true),
            Preset::SimGcfI => jacobi(Quadrant::I).with_scaler(scaler),
            Preset::SimGcfIII => jacobi(Quadrant::III).with_scaler(scaler).with_space_flip(true),
        }
    }
}

impl std::fmt::Display for Preset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::sample_points;

    fn fitted(p: Preset) -> FilterSpec {
        let mut f = p.filter(Backbone::default(), ScalerParams::default());
        f.fit(&sample_points(512, Default::default())).unwrap();
        f
    }

    #[test]
    fn main_variants_differ_only_in_signs_and_flip() {
        let low = fitted(Preset::SimGcfI);
        let high = fitted(Preset::SimGcfIII);
        assert_eq!(low.fitted_coefficients, high.fitted_coefficients);
        assert!(!low.space_flip && high.space_flip);
        let (cl, ch) = (
            low.propagation_coefficients.unwrap(),
            high.propagation_coefficients.unwrap(),
        );
        for (i, (l, h)) in cl.iter().zip(&ch).enumerate() {
            assert_eq!(l.abs(), h.abs());
            assert_eq!(*h, Quadrant::III.sign(i) * l);
        }
    }

    #[test]
    fn raw_jacobi_keeps_fitted_signs() {
        let f = fitted(Preset::Jgcf);
        assert_eq!(f.fitted_coefficients, f.propagation_coefficients);
        assert!(f.fitted_coefficients.unwrap().iter().any(|c| *c < 0.0));
    }

    #[test]
    fn lightgcn_is_uniform() {
        let f = fitted(Preset::LightGcn);
        for c in f.propagation_coefficients.unwrap() {
            assert!((c - 0.25).abs() < 1e-10);
        }
    }

    #[test]
    fn ablation_flags() {
        assert!(!fitted(Preset::JgcfH).space_flip);
        assert!(fitted(Preset::JgcfHSf).space_flip);
        assert!(fitted(Preset::JgcfHSf).scaler.is_none());
    }
}
