//! Dependence measurement for bivariate samples via multi-panel Kendall
//! plots and the AUK index family.
//!
//! The pipeline: a [`BivariateSample`] yields per-point quadrant
//! probabilities (the four orientations `(<,<)`, `(≥,<)`, `(<,≥)`, `(≥,≥)`),
//! whose empirical Kendall distribution functions `K̂ᵢ(t)` are plotted
//! against `W(t) = t − t·log t` (the independence curve). The area under
//! each Kendall curve, `AUKᵢ = −∫₀¹ K̂ᵢ(t) log t dt`, equals the plug-in
//! mean of `g(ĥ) = 1 − ĥ + ĥ·log ĥ`, giving the D-vector
//! `(auk₀, auk₁, auk₂, auk₃)`. Distance from the independence point
//! `(½,½,½,½)` gives the index `i_auk = √(8/5)·‖D − Δ‖ ∈ [0,1]` and its
//! standardized form `i_auk_std`, calibrated to approximate `|ρ|` for
//! bivariate normal data.
//!
//! Modules:
//! - [`sample`]: CSV ingestion, validation, tie detection.
//! - [`estimators`]: quadrant probabilities, Kendall curves, AUK components,
//!   indices, dependence-sign classification, one-sidedness checks.
//! - [`analytic`]: closed-form oracles — piecewise Kendall CDFs, the real
//!   dilogarithm, the FGM copula AUK (closed form / quadrature / Monte
//!   Carlo), and bivariate-normal plug-in Monte Carlo.
//! - [`samplers`]: seeded generators for eight bivariate families.
//! - [`resampling`]: percentile bootstrap confidence intervals.
//! - [`simulate`]: replication harness for mean/SD summary tables.
//! - [`report`]: SVG K-plots, CSV curve export, JSON analysis reports, and
//!   the pipelines behind the CLI subcommands.
//!
//! All randomized operations take explicit seeds and are deterministic;
//! replication loops derive independent substreams per index, so results do
//! not depend on evaluation order.

pub mod analytic;
pub mod error;
pub mod estimators;
pub mod report;
pub mod resampling;
pub mod rng;
pub mod sample;
pub mod samplers;
pub mod simulate;

pub use error::Error;
pub use estimators::{
    DVector, DependenceSigns, KendallCurve, QuadrantProbs, SignLabel,
};
pub use resampling::{IntervalEstimate, Statistic};
pub use sample::{BivariateSample, ObservationPair, TieReport};
pub use samplers::{Family, SamplerSpec};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
