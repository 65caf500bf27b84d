//! Crate-wide error type.

use thiserror::Error;

use crate::dataset::{CleaningReport, DescriptorLabel};
use crate::geometry::RejectionReason;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A lon/lat pair was non-finite or outside valid coordinate ranges.
    #[error("coordinate ({lon}, {lat}) is not a finite lon/lat pair within range")]
    InvalidCoordinate { lon: f64, lat: f64 },

    /// Granularity percentages must lie in (0, 100].
    #[error("granularity {0}% is outside (0, 100]")]
    InvalidGranularity(f64),

    /// Epsilon is a snap distance in kilometers and must be positive.
    #[error("epsilon {0} km must be positive and finite")]
    InvalidEpsilon(f64),

    /// Descriptor labels are nonempty case-insensitive tokens.
    #[error("descriptor label {0:?} is empty")]
    InvalidLabel(String),

    #[error("synthetic corpus model rejected: {0}")]
    InvalidSynthModel(String),

    /// The polygon of a loaded document failed validation.
    #[error("geometry rejected: {0}")]
    InvalidGeometry(RejectionReason),

    /// A document could not be parsed or violates the format's value ranges.
    #[error("{0}")]
    ParseError(String),

    /// The grid file carries an unsupported format_version.
    #[error("unsupported grid format_version {found} (expected {expected})")]
    VersionMismatch { found: u64, expected: u64 },

    /// No valid polygons survived corpus cleaning.
    #[error("no valid polygons in corpus ({} rejected)", report.rejected.len())]
    EmptyCorpus { report: CleaningReport },

    /// No candidate grid point fell inside the region shape.
    #[error("no grid point falls inside the region")]
    EmptyGrid,

    /// No response polygon contains any grid point, so the maximum count is
    /// zero and normalization is undefined.
    #[error("no response polygon covers any grid point; cannot normalize")]
    NoCoverage,

    /// Membership evaluation interpolates over the four nearest grid points.
    #[error("grid has {points} point(s); membership evaluation needs at least 4")]
    InsufficientGrid { points: usize },

    #[error("descriptor {0} appears more than once")]
    DuplicateLabel(DescriptorLabel),

    #[error("classification needs at least one grid")]
    NoGrids,

    #[error("descriptor {label} has {have} polygon(s); cross-validation needs at least {need}")]
    InsufficientPolygons {
        label: DescriptorLabel,
        have: usize,
        need: usize,
    },

    #[error("fold count {0} must be at least 2")]
    InvalidFolds(usize),

    #[error("samples per polygon must be at least 1")]
    InvalidSamples,

    /// A held-out polygon contains no point of the sampling grid; its score
    /// would be 0/0, so the run is refused rather than silently skewed.
    #[error("held-out polygon {polygon_index} of {label} contains no sample grid point")]
    EmptyTestSample {
        label: DescriptorLabel,
        polygon_index: usize,
    },

    #[error("class weights rejected: {0}")]
    InvalidWeights(String),

    /// A grid value violates the fuzzy grid invariants.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// A report value violates its own invariants.
    #[error("report violates its invariants: {0}")]
    InvalidReport(String),
}

impl Error {
    /// Stable machine-readable name of the error kind, suitable for
    /// diagnostics and exit-path tests.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidCoordinate { .. } => "InvalidCoordinate",
            Error::InvalidGranularity(_) => "InvalidGranularity",
            Error::InvalidEpsilon(_) => "InvalidEpsilon",
            Error::InvalidLabel(_) => "InvalidLabel",
            Error::InvalidSynthModel(_) => "InvalidSynthModel",
            Error::InvalidGeometry(_) => "InvalidGeometry",
            Error::ParseError(_) => "ParseError",
            Error::VersionMismatch { .. } => "VersionMismatch",
            Error::EmptyCorpus { .. } => "EmptyCorpus",
            Error::EmptyGrid => "EmptyGrid",
            Error::NoCoverage => "NoCoverage",
            Error::InsufficientGrid { .. } => "InsufficientGrid",
            Error::DuplicateLabel(_) => "DuplicateLabel",
            Error::NoGrids => "NoGrids",
            Error::InsufficientPolygons { .. } => "InsufficientPolygons",
            Error::InvalidFolds(_) => "InvalidFolds",
            Error::InvalidSamples => "InvalidSamples",
            Error::EmptyTestSample { .. } => "EmptyTestSample",
            Error::InvalidWeights(_) => "InvalidWeights",
            Error::InvalidGrid(_) => "InvalidGrid",
            Error::InvalidReport(_) => "InvalidReport",
        }
    }
}
