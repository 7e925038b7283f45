//! Error type shared across the crate.

use std::path::PathBuf;

/// Everything that can go wrong in this crate.
///
/// Variants are grouped into two classes for CLI exit-code mapping:
/// problems with user-supplied input ([`Error::is_input_error`] == true)
/// and computation/output failures.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("row {row}, column {column}: cannot parse {content:?} as a number")]
    ParseCell {
        row: usize,
        column: usize,
        content: String,
    },
    #[error("row {row}, column {column}: value is not finite")]
    NonFinite { row: usize, column: usize },
    #[error("row {row}: expected at least {expected} columns, found {found}")]
    MissingColumn {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("need at least 2 data rows, found {0}")]
    TooFewRows(usize),
    #[error("point index {index} out of range for sample of size {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("panel index {0} invalid; panels are 0..=3")]
    InvalidPanel(usize),
    #[error("{name} = {value} outside its valid range ({requirement})")]
    InvalidParam {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },
    #[error("grid size {0} invalid; need at least 2 points")]
    InvalidGridSize(usize),
    #[error("unknown statistic {0:?}; expected one of auk0, auk1, auk2, auk3, i_auk, i_auk_std")]
    UnknownStatistic(String),
    #[error("unknown family {0:?}; expected one of bvn, fgm, morgenstern, plackett, bvt5, noise_ratio, triangle, circle")]
    UnknownFamily(String),
    #[error("family {family} requires a parameter ({name})")]
    MissingParam {
        family: &'static str,
        name: &'static str,
    },
    #[error("family {0} takes no parameter")]
    UnexpectedParam(&'static str),
    #[error("bootstrap needs b >= 100, got {0}")]
    TooFewReplicates(usize),
    #[error("confidence levels must be a non-empty list inside (0, 1); got {0}")]
    InvalidLevel(f64),
    #[error("confidence level list is empty")]
    EmptyLevels,
    #[error("negative discriminant in {family} sampler at draw {index}")]
    NegativeDiscriminant { family: &'static str, index: usize },
    #[error("curves passed to a figure must share one grid")]
    MismatchedGrids,
    #[error("figure expects curves for panels 0..=3 in order; slot {slot} holds panel {panel}")]
    MisorderedPanels { slot: usize, panel: usize },
    #[error("curve data malformed: {0}")]
    MalformedCurve(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by user-supplied input (files, flags,
    /// parameters); false for computation or output failures. The CLI maps
    /// input errors to exit code 1 and the rest to exit code 2.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::Write { .. } | Error::Json(_) | Error::MismatchedGrids
        )
    }
}
