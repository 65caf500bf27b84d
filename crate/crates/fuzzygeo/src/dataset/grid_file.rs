//! The versioned grid file format.
//!
//! A grid file is a single JSON object:
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "descriptor": "north",
//!   "granularity_pct": 2.0,
//!   "bbox": [min_lon, min_lat, max_lon, max_lat],
//!   "response_count": 98,
//!   "points": [[lon, lat, md], ...]
//! }
//! ```
//!
//! Points appear in canonical grid order. Degrees are written in the shortest
//! decimal form that parses back to the identical f64, so a save/load round
//! trip reproduces the grid field for field.

use serde::{Deserialize, Serialize};

use crate::dataset::DescriptorLabel;
use crate::geometry::{BoundingBox, GeoPoint};
use crate::grid::{FuzzyGrid, GranularitySpec, GridPoint};
use crate::{Error, Result};

pub const GRID_FORMAT_VERSION: u64 = 1;

#[derive(Serialize, Deserialize)]
struct GridFileV1 {
    format_version: u64,
    descriptor: String,
    granularity_pct: f64,
    bbox: [f64; 4],
    response_count: u64,
    points: Vec<[f64; 3]>,
}

/// Serialize a grid to the versioned JSON document.
pub fn save_grid(grid: &FuzzyGrid) -> String {
    let doc = GridFileV1 {
        format_version: GRID_FORMAT_VERSION,
        descriptor: grid.label.as_str().to_string(),
        granularity_pct: grid.granularity.percent(),
        bbox: [
            grid.bbox.min_lon,
            grid.bbox.min_lat,
            grid.bbox.max_lon,
            grid.bbox.max_lat,
        ],
        response_count: grid.response_count as u64,
        points: grid
            .points
            .iter()
            .map(|gp| [gp.location.lon, gp.location.lat, gp.md])
            .collect(),
    };
    serde_json::to_string(&doc).expect("grid file serializes")
}

/// Parse a grid file, validating the version, value ranges, and canonical
/// point order.
pub fn load_grid(content: &str) -> Result<FuzzyGrid> {
    let value: serde_json::Value = serde_json::from_str(content)
        .map_err(|e| Error::ParseError(format!("malformed grid file: {e}")))?;
    let version = value
        .get("format_version")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| Error::ParseError("grid file has no integer format_version".to_string()))?;
    if version != GRID_FORMAT_VERSION {
        return Err(Error::VersionMismatch {
            found: version,
            expected: GRID_FORMAT_VERSION,
        });
    }
    let doc: GridFileV1 = serde_json::from_value(value)
        .map_err(|e| Error::ParseError(format!("grid file fields: {e}")))?;

    let label = DescriptorLabel::new(&doc.descriptor)
        .map_err(|e| Error::ParseError(e.to_string()))?;
    let granularity = GranularitySpec::new(doc.granularity_pct)
        .map_err(|e| Error::ParseError(e.to_string()))?;
    let bbox = BoundingBox::new(doc.bbox[0], doc.bbox[1], doc.bbox[2], doc.bbox[3])
        .map_err(|e| Error::ParseError(e.to_string()))?;
    let mut points = Vec::with_capacity(doc.points.len());
    for &[lon, lat, md] in &doc.points {
        let location =
            GeoPoint::new(lon, lat).map_err(|e| Error::ParseError(e.to_string()))?;
        if !md.is_finite() || !(0.0..=1.0).contains(&md) {
            return Err(Error::ParseError(format!(
                "membership degree {md} at ({lon}, {lat}) is outside [0, 1]"
            )));
        }
        points.push(GridPoint { location, md });
    }
    FuzzyGrid::new(label, granularity, bbox, points, doc.response_count as usize)
        .map_err(|e| Error::ParseError(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{RegionBoundary, ResponseSet};
    use crate::geometry::validate_polygon;
    use crate::grid::build_fuzzy_grid;

    fn pt(lon: f64, lat: f64) -> GeoPoint {
        GeoPoint { lon, lat }
    }

    fn sample_grid() -> FuzzyGrid {
        let shape = validate_polygon(vec![
            pt(-8.9, 41.8),
            pt(-6.7, 41.8),
            pt(-6.7, 43.8),
            pt(-8.9, 43.8),
        ])
        .unwrap();
        let region = RegionBoundary::new(shape);
        let upper = validate_polygon(vec![
            pt(-8.9, 42.9),
            pt(-6.7, 42.9),
            pt(-6.7, 43.8),
            pt(-8.9, 43.8),
        ])
        .unwrap();
        let responses = ResponseSet::new(
            DescriptorLabel::new("north").unwrap(),
            vec![upper, region.shape().clone()],
        )
        .unwrap();
        build_fuzzy_grid(&region, &responses, GranularitySpec::new(10.0).unwrap()).unwrap()
    }

    #[test]
    fn round_trip_is_identity() {
        let grid = sample_grid();
        let reloaded = load_grid(&save_grid(&grid)).unwrap();
        assert_eq!(reloaded, grid);
    }

    #[test]
    fn unknown_version_is_rejected() {
        let mut doc: serde_json::Value = serde_json::from_str(&save_grid(&sample_grid())).unwrap();
        doc["format_version"] = serde_json::json!(99);
        let err = load_grid(&doc.to_string()).unwrap_err();
        assert_eq!(
            err,
            Error::VersionMismatch {
                found: 99,
                expected: GRID_FORMAT_VERSION
            }
        );
    }

    #[test]
    fn out_of_range_degree_is_a_parse_error() {
        let mut doc: serde_json::Value = serde_json::from_str(&save_grid(&sample_grid())).unwrap();
        doc["points"][0][2] = serde_json::json!(1.2);
        let err = load_grid(&doc.to_string()).unwrap_err();
        assert_eq!(err.code(), "ParseError");
    }

    #[test]
    fn malformed_json_is_a_parse_error() {
        assert_eq!(load_grid("{not json").unwrap_err().code(), "ParseError");
    }

    #[test]
    fn scrambled_point_order_is_rejected() {
        let grid = sample_grid();
        let mut doc: serde_json::Value = serde_json::from_str(&save_grid(&grid)).unwrap();
        let points = doc["points"].as_array_mut().unwrap();
        points.swap(0, 1);
        assert_eq!(load_grid(&doc.to_string()).unwrap_err().code(), "ParseError");
    }

    #[test]
    fn gnarly_degrees_survive_the_round_trip() {
        let mut grid = sample_grid();
        let fractions = [1.0 / 3.0, 2.0 / 7.0, 1e-17, 0.1 + 0.2 - 0.2];
        for (gp, md) in grid.points.iter_mut().zip(fractions) {
            gp.md = md;
        }
        let reloaded = load_grid(&save_grid(&grid)).unwrap();
        for (a, b) in grid.points.iter().zip(&reloaded.points) {
            assert_eq!(a.md, b.md);
        }
    }
}
