//! Corpus loading and cleaning, synthetic survey corpora, and grid
//! persistence.
//!
//! Regions and response corpora travel as GeoJSON feature collections; built
//! grids persist in a small versioned JSON format (see [`save_grid`]).

mod geojson;
mod grid_file;
mod synth;

use std::fmt;

use serde::Serialize;

use crate::geometry::{BoundingBox, RejectionReason, SimplePolygon};
use crate::{Error, Result};

pub use geojson::{load_region, load_responses, save_responses};
pub use grid_file::{load_grid, save_grid, GRID_FORMAT_VERSION};
pub use synth::{synth_responses, SynthKind, SynthModel, SynthSide};

/// Name of a descriptor ("north", "south", ...). Case-insensitive; stored
/// lowercased so comparison and ordering are on the normalized form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DescriptorLabel(String);

impl DescriptorLabel {
    pub fn new(id: &str) -> Result<Self> {
        let normalized = id.trim().to_lowercase();
        if normalized.is_empty() {
            return Err(Error::InvalidLabel(id.to_string()));
        }
        Ok(DescriptorLabel(normalized))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for DescriptorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(&self.0)
    }
}

/// One descriptor's corpus: the ordered list of validated polygon
/// interpretations.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseSet {
    pub label: DescriptorLabel,
    pub polygons: Vec<SimplePolygon>,
}

impl ResponseSet {
    pub fn new(label: DescriptorLabel, polygons: Vec<SimplePolygon>) -> Result<Self> {
        if polygons.is_empty() {
            return Err(Error::EmptyCorpus {
                report: CleaningReport {
                    accepted_count: 0,
                    rejected: Vec::new(),
                },
            });
        }
        Ok(ResponseSet { label, polygons })
    }
}

/// The underlying geography: the shape that clips grids, with its derived
/// bounding box.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionBoundary {
    shape: SimplePolygon,
    bbox: BoundingBox,
}

impl RegionBoundary {
    pub fn new(shape: SimplePolygon) -> Self {
        let bbox = shape.bounding_box();
        RegionBoundary { shape, bbox }
    }

    pub fn shape(&self) -> &SimplePolygon {
        &self.shape
    }

    pub fn bbox(&self) -> BoundingBox {
        self.bbox
    }
}

/// Outcome of automated corpus cleaning. `rejected` holds the 0-based index
/// of each dropped feature within the source feature collection, paired with
/// the rejection reason; `accepted_count + rejected.len()` equals the number
/// of features considered for the label.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CleaningReport {
    pub accepted_count: usize,
    pub rejected: Vec<(usize, RejectionReason)>,
}
