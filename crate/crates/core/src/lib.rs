//! Spectral graph collaborative filtering with quadrant-signed polynomial
//! filters, a sigmoid frequency scaler and the space flip.
//!
//! Pipeline: [`dataset`] → [`graph`] → [`filters`] → [`propagation`] →
//! [`training`] → [`evaluation`]. [`lab`] verifies the spectral identities
//! densely on small graphs.

pub mod cli;
pub mod config;
pub mod dataset;
pub mod dense;
pub mod error;
pub mod evaluation;
pub mod filters;
pub mod graph;
pub mod lab;
pub mod presets;
pub mod propagation;
pub mod svg;
pub mod training;

pub use config::RunConfig;
pub use dataset::{InteractionDataset, SplitDataset, SplitKind, SplitRatios};
pub use dense::DenseMatrix;
pub use error::{Error, Result};
pub use evaluation::{evaluate, EvalReport, PopularityModel, Scorer};
pub use filters::{Basis, FilterSpec, Quadrant, ScalerParams};
pub use graph::SparseAdjacency;
pub use presets::Preset;
pub use propagation::EmbeddingModel;
pub use training::{train, TrainConfig, TrainOutcome, Trainer};
