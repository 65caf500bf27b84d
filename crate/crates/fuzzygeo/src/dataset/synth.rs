//! Deterministic synthetic survey corpora.
//!
//! Real survey interpretations of cardinal descriptors concentrate toward one
//! side of the region with receding density. A jittered half-plane reproduces
//! that shape with one parameter: each synthetic respondent draws a dividing
//! line at `center_fraction + u * jitter_fraction` of the bounding-box extent
//! (`u` uniform in [-1, 1)) and answers with the rectangle on their side of
//! it, clipped to the region bounding box.
//!
//! The generator is ChaCha8 seeded from the model seed, so a given
//! `(region bbox, model, n)` reproduces the same corpus on any platform. The
//! dividing-line draws do not depend on `side`: models differing only in
//! `side` produce exactly complementary corpora.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::{DescriptorLabel, RegionBoundary, ResponseSet};
use crate::geometry::{validate_polygon, GeoPoint};
use crate::{Error, Result};

/// Axis along which a synthetic interpretation divides the region.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthKind {
    LatitudeHalfPlane,
    LongitudeHalfPlane,
}

/// Which side of the dividing line an interpretation covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthSide {
    High,
    Low,
}

/// Parameters of the synthetic corpus generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthModel {
    pub kind: SynthKind,
    pub side: SynthSide,
    /// Dividing line as a fraction of the bbox extent, in (0, 1).
    pub center_fraction: f64,
    /// Uniform jitter amplitude around the center, in [0, 0.5);
    /// `center_fraction ± jitter_fraction` must stay within (0, 1).
    pub jitter_fraction: f64,
    pub seed: u64,
}

impl SynthModel {
    pub fn new(
        kind: SynthKind,
        side: SynthSide,
        center_fraction: f64,
        jitter_fraction: f64,
        seed: u64,
    ) -> Result<Self> {
        if !center_fraction.is_finite() || center_fraction <= 0.0 || center_fraction >= 1.0 {
            return Err(Error::InvalidSynthModel(format!(
                "center_fraction {center_fraction} is outside (0, 1)"
            )));
        }
        if !jitter_fraction.is_finite() || !(0.0..0.5).contains(&jitter_fraction) {
            return Err(Error::InvalidSynthModel(format!(
                "jitter_fraction {jitter_fraction} is outside [0, 0.5)"
            )));
        }
        if center_fraction - jitter_fraction <= 0.0 || center_fraction + jitter_fraction >= 1.0 {
            return Err(Error::InvalidSynthModel(format!(
                "center_fraction {center_fraction} ± jitter_fraction {jitter_fraction} leaves (0, 1)"
            )));
        }
        Ok(SynthModel {
            kind,
            side,
            center_fraction,
            jitter_fraction,
            seed,
        })
    }
}

/// Generate `n` synthetic half-plane interpretations of `label` over the
/// region's bounding box. Output depends only on (region bbox, label, model,
/// n); equal inputs yield identical corpora.
pub fn synth_responses(
    region: &RegionBoundary,
    label: &DescriptorLabel,
    model: &SynthModel,
    n: usize,
) -> Result<ResponseSet> {
    if n == 0 {
        return Err(Error::InvalidSynthModel(
            "response count must be at least 1".to_string(),
        ));
    }
    let bbox = region.bbox();
    let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
    let mut polygons = Vec::with_capacity(n);
    for _ in 0..n {
        let u = rng.random::<f64>() * 2.0 - 1.0;
        let fraction = model.center_fraction + u * model.jitter_fraction;
        let ring = match model.kind {
            SynthKind::LatitudeHalfPlane => {
                let cut = bbox.min_lat + fraction * bbox.lat_extent();
                let (lo, hi) = match model.side {
                    SynthSide::High => (cut, bbox.max_lat),
                    SynthSide::Low => (bbox.min_lat, cut),
                };
                vec![
                    GeoPoint { lon: bbox.min_lon, lat: lo },
                    GeoPoint { lon: bbox.max_lon, lat: lo },
                    GeoPoint { lon: bbox.max_lon, lat: hi },
                    GeoPoint { lon: bbox.min_lon, lat: hi },
                ]
            }
            SynthKind::LongitudeHalfPlane => {
                let cut = bbox.min_lon + fraction * bbox.lon_extent();
                let (lo, hi) = match model.side {
                    SynthSide::High => (cut, bbox.max_lon),
                    SynthSide::Low => (bbox.min_lon, cut),
                };
                vec![
                    GeoPoint { lon: lo, lat: bbox.min_lat },
                    GeoPoint { lon: hi, lat: bbox.min_lat },
                    GeoPoint { lon: hi, lat: bbox.max_lat },
                    GeoPoint { lon: lo, lat: bbox.max_lat },
                ]
            }
        };
        let poly = validate_polygon(ring)
            .expect("half-plane rectangle with positive extent is a valid simple polygon");
        polygons.push(poly);
    }
    Ok(ResponseSet {
        label: label.clone(),
        polygons,
    })
}
