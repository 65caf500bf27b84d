//! GeoJSON reading and writing for regions and response corpora.
//!
//! Only the subset this toolkit exchanges is supported: feature collections
//! (and, for regions, single features) whose geometries are `Polygon`s.
//! Response features may carry a string property `descriptor` naming the
//! label they answer; features without it are taken for whichever label is
//! being loaded.

use serde_json::{json, Value};

use crate::dataset::{CleaningReport, DescriptorLabel, RegionBoundary, ResponseSet};
use crate::geometry::{validate_polygon, GeoPoint};
use crate::{Error, Result};

fn parse_error(msg: impl Into<String>) -> Error {
    Error::ParseError(msg.into())
}

fn parse_document(content: &str) -> Result<Value> {
    serde_json::from_str(content).map_err(|e| parse_error(format!("malformed JSON: {e}")))
}

/// Extract the raw exterior ring of a Polygon geometry as validated points.
/// Coordinate range violations are document errors, not cleaning rejections.
fn ring_points(geometry: &Value, context: &str) -> Result<Vec<GeoPoint>> {
    let gtype = geometry
        .get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| parse_error(format!("{context}: geometry has no type")))?;
    if gtype != "Polygon" {
        return Err(parse_error(format!(
            "{context}: geometry type is {gtype}, expected Polygon"
        )));
    }
    let rings = geometry
        .get("coordinates")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_error(format!("{context}: Polygon has no coordinate array")))?;
    let exterior = rings
        .first()
        .and_then(Value::as_array)
        .ok_or_else(|| parse_error(format!("{context}: Polygon has no exterior ring")))?;
    let mut points = Vec::with_capacity(exterior.len());
    for pos in exterior {
        let coords = pos
            .as_array()
            .ok_or_else(|| parse_error(format!("{context}: position is not an array")))?;
        if coords.len() < 2 {
            return Err(parse_error(format!(
                "{context}: position has fewer than 2 coordinates"
            )));
        }
        let lon = coords[0]
            .as_f64()
            .ok_or_else(|| parse_error(format!("{context}: longitude is not a number")))?;
        let lat = coords[1]
            .as_f64()
            .ok_or_else(|| parse_error(format!("{context}: latitude is not a number")))?;
        let p = GeoPoint::new(lon, lat)
            .map_err(|_| parse_error(format!("{context}: coordinate ({lon}, {lat}) out of range")))?;
        points.push(p);
    }
    Ok(points)
}

/// Load a region boundary from a GeoJSON document: a feature collection (its
/// first feature is taken) or a single feature, with a Polygon geometry. The
/// exterior ring is validated; holes are out of scope and ignored.
pub fn load_region(document: &str) -> Result<RegionBoundary> {
    let root = parse_document(document)?;
    let feature = match root.get("type").and_then(Value::as_str) {
        Some("FeatureCollection") => {
            let features = root
                .get("features")
                .and_then(Value::as_array)
                .ok_or_else(|| parse_error("feature collection has no features array"))?;
            features
                .first()
                .ok_or_else(|| parse_error("empty feature collection"))?
                .clone()
        }
        Some("Feature") => root.clone(),
        Some(other) => {
            return Err(parse_error(format!(
                "document type is {other}, expected FeatureCollection or Feature"
            )))
        }
        None => return Err(parse_error("document has no type")),
    };
    let geometry = feature
        .get("geometry")
        .ok_or_else(|| parse_error("feature has no geometry"))?;
    let ring = ring_points(geometry, "region")?;
    let shape = validate_polygon(ring).map_err(Error::InvalidGeometry)?;
    Ok(RegionBoundary::new(shape))
}

/// Load the response corpus for one descriptor from a GeoJSON feature
/// collection. Features whose `descriptor` property names another label are
/// ignored; features without the property are taken for `label`. Each
/// candidate polygon passes through [`validate_polygon`]; accepted ones keep
/// their input order and rejections are itemized in the cleaning report.
pub fn load_responses(
    document: &str,
    label: &DescriptorLabel,
) -> Result<(ResponseSet, CleaningReport)> {
    let root = parse_document(document)?;
    if root.get("type").and_then(Value::as_str) != Some("FeatureCollection") {
        return Err(parse_error("responses document is not a FeatureCollection"));
    }
    let features = root
        .get("features")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_error("feature collection has no features array"))?;

    let mut accepted = Vec::new();
    let mut rejected = Vec::new();
    for (index, feature) in features.iter().enumerate() {
        if let Some(descriptor) = feature.get("properties").and_then(|p| p.get("descriptor")) {
            let name = descriptor.as_str().ok_or_else(|| {
                parse_error(format!("feature {index}: descriptor property is not a string"))
            })?;
            if !name.trim().eq_ignore_ascii_case(label.as_str()) {
                continue;
            }
        }
        let geometry = feature
            .get("geometry")
            .ok_or_else(|| parse_error(format!("feature {index}: no geometry")))?;
        let ring = ring_points(geometry, &format!("feature {index}"))?;
        match validate_polygon(ring) {
            Ok(poly) => accepted.push(poly),
            Err(reason) => rejected.push((index, reason)),
        }
    }

    let report = CleaningReport {
        accepted_count: accepted.len(),
        rejected,
    };
    if accepted.is_empty() {
        return Err(Error::EmptyCorpus { report });
    }
    let set = ResponseSet {
        label: label.clone(),
        polygons: accepted,
    };
    Ok((set, report))
}

/// Serialize a response corpus as a GeoJSON feature collection consumable by
/// [`load_responses`]. Rings are written closed, per GeoJSON convention.
pub fn save_responses(set: &ResponseSet) -> String {
    let features: Vec<Value> = set
        .polygons
        .iter()
        .map(|poly| {
            let mut ring: Vec<Value> = poly
                .vertices()
                .iter()
                .map(|v| json!([v.lon, v.lat]))
                .collect();
            if let Some(first) = ring.first().cloned() {
                ring.push(first);
            }
            json!({
                "type": "Feature",
                "properties": { "descriptor": set.label.as_str() },
                "geometry": { "type": "Polygon", "coordinates": [ring] }
            })
        })
        .collect();
    let doc = json!({ "type": "FeatureCollection", "features": features });
    serde_json::to_string(&doc).expect("GeoJSON document serializes")
}
