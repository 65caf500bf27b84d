//! Fuzzy geographical descriptors built from polygon interpretation corpora.
//!
//! A descriptor such as "north" is represented by a grid of region-contained
//! points, each carrying a membership degree in `[0, 1]` derived from how many
//! corpus polygons cover it. The crate provides:
//!
//! - [`geometry`]: lon/lat points, simple polygons, containment tests, and
//!   great-circle distance;
//! - [`dataset`]: GeoJSON corpus loading and cleaning, deterministic synthetic
//!   corpora, and the versioned grid file format;
//! - [`grid`]: fuzzy grid construction and re-interpolation onto other point
//!   sets;
//! - [`membership`]: membership evaluation at arbitrary coordinates and
//!   multi-descriptor classification;
//! - [`evaluation`]: granularity/efficiency studies, seeded k-fold
//!   cross-validation with precision/recall, antonymy comparison, and
//!   monotonicity auditing.
//!
//! All randomized operations draw from ChaCha8 streams seeded by the caller,
//! so identical inputs reproduce identical outputs everywhere.

pub mod dataset;
pub mod error;
pub mod evaluation;
pub mod geometry;
pub mod grid;
pub mod membership;

pub use error::{Error, Result};
