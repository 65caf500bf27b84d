//! Planar and spherical geometric primitives.
//!
//! Containment runs in planar lon/lat coordinates (the regions of interest
//! span a couple of degrees, so geodesic polygon edges are not worth their
//! cost); distance is great-circle on a sphere of mean radius
//! [`EARTH_RADIUS_KM`]. Containment is boundary-inclusive: a point exactly on
//! an edge or vertex of a polygon counts as inside.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Mean Earth radius in kilometers, the usual haversine convention.
pub const EARTH_RADIUS_KM: f64 = 6371.0;

/// A longitude/latitude pair in decimal degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    pub lon: f64,
    pub lat: f64,
}

impl GeoPoint {
    /// Construct a point, checking that both coordinates are finite and in
    /// range (lon in [-180, 180], lat in [-90, 90]).
    pub fn new(lon: f64, lat: f64) -> Result<Self> {
        let p = GeoPoint { lon, lat };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let lon_ok = self.lon.is_finite() && (-180.0..=180.0).contains(&self.lon);
        let lat_ok = self.lat.is_finite() && (-90.0..=90.0).contains(&self.lat);
        if lon_ok && lat_ok {
            Ok(())
        } else {
            Err(Error::InvalidCoordinate {
                lon: self.lon,
                lat: self.lat,
            })
        }
    }

    pub fn is_finite(&self) -> bool {
        self.lon.is_finite() && self.lat.is_finite()
    }
}

impl fmt::Display for GeoPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lon, self.lat)
    }
}

/// Great-circle distance between two points in kilometers, by the haversine
/// formula on a sphere of radius [`EARTH_RADIUS_KM`]. Symmetric, and zero
/// exactly when the points coincide.
pub fn haversine_km(a: GeoPoint, b: GeoPoint) -> f64 {
    let lat_a = a.lat.to_radians();
    let lat_b = b.lat.to_radians();
    let half_dlat = ((b.lat - a.lat) / 2.0).to_radians();
    let half_dlon = ((b.lon - a.lon) / 2.0).to_radians();
    let h = half_dlat.sin().powi(2) + lat_a.cos() * lat_b.cos() * half_dlon.sin().powi(2);
    // rounding can push h a hair above 1; asin would return NaN
    2.0 * EARTH_RADIUS_KM * h.sqrt().min(1.0).asin()
}

/// Why a raw vertex list was rejected as a polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RejectionReason {
    /// Fewer than 3 distinct vertices remain after dropping the closing
    /// vertex and collapsing consecutive duplicates.
    TooFewVertices,
    /// The ring is not simple: two edges cross, touch, or overlap outside the
    /// vertices they legitimately share.
    SelfIntersecting,
    /// Some coordinate is NaN or infinite.
    NonFinite,
}

impl fmt::Display for RejectionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RejectionReason::TooFewVertices => "TooFewVertices",
            RejectionReason::SelfIntersecting => "SelfIntersecting",
            RejectionReason::NonFinite => "NonFinite",
        };
        f.write_str(s)
    }
}

/// A validated simple polygon ring in lon/lat coordinates.
///
/// The ring is stored open: the last vertex does not repeat the first, the
/// closing edge is implicit. Construction goes through [`validate_polygon`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplePolygon {
    vertices: Vec<GeoPoint>,
}

impl SimplePolygon {
    pub fn vertices(&self) -> &[GeoPoint] {
        &self.vertices
    }

    /// Componentwise min/max over the vertices.
    pub fn bounding_box(&self) -> BoundingBox {
        let mut bbox = BoundingBox {
            min_lon: f64::INFINITY,
            min_lat: f64::INFINITY,
            max_lon: f64::NEG_INFINITY,
            max_lat: f64::NEG_INFINITY,
        };
        for v in &self.vertices {
            bbox.min_lon = bbox.min_lon.min(v.lon);
            bbox.min_lat = bbox.min_lat.min(v.lat);
            bbox.max_lon = bbox.max_lon.max(v.lon);
            bbox.max_lat = bbox.max_lat.max(v.lat);
        }
        bbox
    }
}

/// Validate a raw vertex list into a [`SimplePolygon`].
///
/// Drops an explicit closing vertex if present and collapses consecutive
/// duplicates, then requires at least 3 distinct vertices and a simple ring.
/// Never panics: invalid input comes back as a [`RejectionReason`].
pub fn validate_polygon(
    raw: Vec<GeoPoint>,
) -> std::result::Result<SimplePolygon, RejectionReason> {
    if raw.iter().any(|p| !p.is_finite()) {
        return Err(RejectionReason::NonFinite);
    }
    let mut vs = raw;
    vs.dedup();
    while vs.len() > 1 && vs.last() == vs.first() {
        vs.pop();
    }
    if vs.len() < 3 {
        return Err(RejectionReason::TooFewVertices);
    }
    if ring_self_intersects(&vs) {
        return Err(RejectionReason::SelfIntersecting);
    }
    Ok(SimplePolygon { vertices: vs })
}

/// Twice the signed area of triangle abc; sign gives the turn direction.
fn orient(a: GeoPoint, b: GeoPoint, c: GeoPoint) -> f64 {
    (b.lon - a.lon) * (c.lat - a.lat) - (b.lat - a.lat) * (c.lon - a.lon)
}

/// Is p on the closed segment ab?
fn on_segment(a: GeoPoint, b: GeoPoint, p: GeoPoint) -> bool {
    orient(a, b, p) == 0.0
        && p.lon >= a.lon.min(b.lon)
        && p.lon <= a.lon.max(b.lon)
        && p.lat >= a.lat.min(b.lat)
        && p.lat <= a.lat.max(b.lat)
}

/// Do closed segments p1p2 and q1q2 share any point?
fn segments_intersect(p1: GeoPoint, p2: GeoPoint, q1: GeoPoint, q2: GeoPoint) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}

fn ring_self_intersects(vs: &[GeoPoint]) -> bool {
    let n = vs.len();
    for i in 0..n {
        let (a1, a2) = (vs[i], vs[(i + 1) % n]);
        for j in (i + 1)..n {
            let (b1, b2) = (vs[j], vs[(j + 1) % n]);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // edges sharing a vertex may only touch at that vertex; a
                // collinear spike doubles back over the previous edge
                let (shared, a_other, b_other) = if j == i + 1 {
                    (vs[j], a1, b2)
                } else {
                    (vs[0], b1, a2)
                };
                let along_a = (
                    a_other.lon - shared.lon,
                    a_other.lat - shared.lat,
                );
                let along_b = (
                    b_other.lon - shared.lon,
                    b_other.lat - shared.lat,
                );
                let cross = along_a.0 * along_b.1 - along_a.1 * along_b.0;
                let dot = along_a.0 * along_b.0 + along_a.1 * along_b.1;
                if cross == 0.0 && dot > 0.0 {
                    return true;
                }
            } else if segments_intersect(a1, a2, b1, b2) {
                return true;
            }
        }
    }
    false
}

/// Even-odd (ray-casting) containment in planar lon/lat coordinates.
///
/// Boundary-inclusive: points exactly on an edge or vertex are inside. The
/// crossing test uses the half-open edge rule (an edge owns its lower
/// endpoint), so rays through vertices are counted deterministically; points
/// on the boundary are resolved by the explicit test before any ray is cast.
pub fn point_in_polygon(pt: GeoPoint, poly: &SimplePolygon) -> bool {
    let vs = poly.vertices();
    let n = vs.len();
    for i in 0..n {
        if on_segment(vs[i], vs[(i + 1) % n], pt) {
            return true;
        }
    }
    let mut inside = false;
    for i in 0..n {
        let a = vs[i];
        let b = vs[(i + 1) % n];
        if (a.lat > pt.lat) != (b.lat > pt.lat) {
            let t = (pt.lat - a.lat) / (b.lat - a.lat);
            let x = a.lon + t * (b.lon - a.lon);
            if pt.lon < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Axis-aligned bounding box in decimal degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub min_lon: f64,
    pub min_lat: f64,
    pub max_lon: f64,
    pub max_lat: f64,
}

impl BoundingBox {
    pub fn new(min_lon: f64, min_lat: f64, max_lon: f64, max_lat: f64) -> Result<Self> {
        let b = BoundingBox {
            min_lon,
            min_lat,
            max_lon,
            max_lat,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.min_lon, self.min_lat, self.max_lon, self.max_lat]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.min_lon > self.max_lon || self.min_lat > self.max_lat {
            return Err(Error::InvalidGrid(format!(
                "bounding box [{}, {}, {}, {}] is not ordered and finite",
                self.min_lon, self.min_lat, self.max_lon, self.max_lat
            )));
        }
        Ok(())
    }

    pub fn lon_extent(&self) -> f64 {
        self.max_lon - self.min_lon
    }

    pub fn lat_extent(&self) -> f64 {
        self.max_lat - self.min_lat
    }

    pub fn contains(&self, p: GeoPoint) -> bool {
        p.lon >= self.min_lon && p.lon <= self.max_lon && p.lat >= self.min_lat && p.lat <= self.max_lat
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pt(lon: f64, lat: f64) -> GeoPoint {
        GeoPoint { lon, lat }
    }

    fn unit_square() -> SimplePolygon {
        validate_polygon(vec![pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)]).unwrap()
    }

    #[test]
    fn haversine_identity_is_zero() {
        let p = pt(8.0, 42.5);
        assert_eq!(haversine_km(p, p), 0.0);
    }

    #[test]
    fn haversine_matches_analytic_arcs() {
        // quarter circumference: equator to pole
        let quarter = EARTH_RADIUS_KM * std::f64::consts::FRAC_PI_2;
        let d = haversine_km(pt(0.0, 0.0), pt(0.0, 90.0));
        assert!((d - quarter).abs() < 1e-3, "quarter arc: {d} vs {quarter}");
        // half circumference: antipodal equator points
        let half = EARTH_RADIUS_KM * std::f64::consts::PI;
        let d = haversine_km(pt(0.0, 0.0), pt(180.0, 0.0));
        assert!((d - half).abs() < 1e-3, "half arc: {d} vs {half}");
    }

    #[test]
    fn haversine_is_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..300 {
            let a = pt(rng.random::<f64>() * 360.0 - 180.0, rng.random::<f64>() * 180.0 - 90.0);
            let b = pt(rng.random::<f64>() * 360.0 - 180.0, rng.random::<f64>() * 180.0 - 90.0);
            assert_eq!(haversine_km(a, b), haversine_km(b, a));
        }
    }

    #[test]
    fn haversine_triangle_inequality_within_hemisphere() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..300 {
            let mut point = || pt(rng.random::<f64>() * 120.0, rng.random::<f64>() * 120.0 - 60.0);
            let (a, b, c) = (point(), point(), point());
            let lhs = haversine_km(a, c);
            let rhs = haversine_km(a, b) + haversine_km(b, c);
            assert!(lhs <= rhs * (1.0 + 1e-9), "{lhs} > {rhs}");
        }
    }

    #[test]
    fn point_in_polygon_basic_cases() {
        let sq = unit_square();
        assert!(point_in_polygon(pt(0.5, 0.5), &sq));
        assert!(!point_in_polygon(pt(1.5, 0.5), &sq));
        // boundary-inclusive: on edge and on vertex
        assert!(point_in_polygon(pt(1.0, 0.5), &sq));
        assert!(point_in_polygon(pt(0.0, 0.0), &sq));
        assert!(point_in_polygon(pt(0.5, 1.0), &sq));
    }

    #[test]
    fn point_in_polygon_vertex_ray_degeneracy() {
        // ray through a vertex of a diamond must not double-count
        let diamond = validate_polygon(vec![
            pt(1.0, 0.0),
            pt(2.0, 1.0),
            pt(1.0, 2.0),
            pt(0.0, 1.0),
        ])
        .unwrap();
        assert!(point_in_polygon(pt(1.0, 1.0), &diamond));
        assert!(!point_in_polygon(pt(-1.0, 1.0), &diamond));
        assert!(!point_in_polygon(pt(3.0, 1.0), &diamond));
    }

    #[test]
    fn containment_invariant_under_rotation_and_reversal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let verts = random_convex_ring(&mut rng);
            let poly = validate_polygon(verts.clone()).unwrap();
            let k = rng.random::<u32>() as usize % verts.len();
            let mut rotated = verts.clone();
            rotated.rotate_left(k);
            let rot_poly = validate_polygon(rotated).unwrap();
            let mut reversed = verts.clone();
            reversed.reverse();
            let rev_poly = validate_polygon(reversed).unwrap();
            for _ in 0..40 {
                let p = pt(rng.random::<f64>() * 4.0 - 2.0, rng.random::<f64>() * 4.0 - 2.0);
                let inside = point_in_polygon(p, &poly);
                assert_eq!(inside, point_in_polygon(p, &rot_poly));
                assert_eq!(inside, point_in_polygon(p, &rev_poly));
            }
        }
    }

    /// Convex ring: points on a circle sorted by angle, counterclockwise.
    fn random_convex_ring(rng: &mut ChaCha8Rng) -> Vec<GeoPoint> {
        let n = 3 + (rng.random::<u32>() % 8) as usize;
        let mut angles: Vec<f64> = (0..n)
            .map(|_| rng.random::<f64>() * std::f64::consts::TAU)
            .collect();
        angles.sort_by(f64::total_cmp);
        angles.dedup();
        while angles.len() < 3 {
            angles.push(angles.last().unwrap() + 0.1);
        }
        let r = 0.5 + rng.random::<f64>();
        angles
            .iter()
            .map(|a| pt(r * a.cos(), r * a.sin()))
            .collect()
    }

    #[test]
    fn convex_containment_agrees_with_half_plane_oracle() {
        // independent oracle: inside a counterclockwise convex ring iff the
        // point is on the left of (or on) every edge
        fn half_plane_inside(vs: &[GeoPoint], p: GeoPoint) -> bool {
            (0..vs.len()).all(|i| orient(vs[i], vs[(i + 1) % vs.len()], p) >= 0.0)
        }
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..60 {
            let verts = random_convex_ring(&mut rng);
            let poly = validate_polygon(verts.clone()).unwrap();
            for _ in 0..50 {
                let p = pt(rng.random::<f64>() * 4.0 - 2.0, rng.random::<f64>() * 4.0 - 2.0);
                assert_eq!(
                    point_in_polygon(p, &poly),
                    half_plane_inside(&verts, p),
                    "disagreement at {p} on {verts:?}"
                );
            }
        }
    }

    #[test]
    fn bounding_box_examples() {
        let sq = unit_square();
        assert_eq!(
            sq.bounding_box(),
            BoundingBox { min_lon: 0.0, min_lat: 0.0, max_lon: 1.0, max_lat: 1.0 }
        );
        let tri = validate_polygon(vec![pt(0.0, 0.0), pt(2.0, 0.0), pt(1.0, 3.0)]).unwrap();
        assert_eq!(
            tri.bounding_box(),
            BoundingBox { min_lon: 0.0, min_lat: 0.0, max_lon: 2.0, max_lat: 3.0 }
        );
        let west_of_meridian = validate_polygon(vec![
            pt(-8.9, 41.8),
            pt(-6.7, 41.8),
            pt(-6.7, 43.8),
            pt(-8.9, 43.8),
        ])
        .unwrap();
        assert_eq!(
            west_of_meridian.bounding_box(),
            BoundingBox { min_lon: -8.9, min_lat: 41.8, max_lon: -6.7, max_lat: 43.8 }
        );
    }

    #[test]
    fn validate_drops_explicit_closing_vertex() {
        let poly = validate_polygon(vec![
            pt(0.0, 0.0),
            pt(1.0, 0.0),
            pt(1.0, 1.0),
            pt(0.0, 1.0),
            pt(0.0, 0.0),
        ])
        .unwrap();
        assert_eq!(poly.vertices().len(), 4);
    }

    #[test]
    fn validate_collapses_consecutive_duplicates() {
        let poly = validate_polygon(vec![
            pt(0.0, 0.0),
            pt(0.0, 0.0),
            pt(1.0, 0.0),
            pt(1.0, 1.0),
            pt(1.0, 1.0),
            pt(0.0, 1.0),
        ])
        .unwrap();
        assert_eq!(poly.vertices().len(), 4);
    }

    #[test]
    fn validate_rejects_too_few_vertices() {
        assert_eq!(
            validate_polygon(vec![pt(0.0, 0.0), pt(1.0, 1.0)]),
            Err(RejectionReason::TooFewVertices)
        );
        // degenerate ring collapses to fewer than 3
        assert_eq!(
            validate_polygon(vec![pt(0.0, 0.0), pt(1.0, 1.0), pt(0.0, 0.0)]),
            Err(RejectionReason::TooFewVertices)
        );
    }

    #[test]
    fn validate_rejects_bow_tie() {
        assert_eq!(
            validate_polygon(vec![pt(0.0, 0.0), pt(1.0, 1.0), pt(1.0, 0.0), pt(0.0, 1.0)]),
            Err(RejectionReason::SelfIntersecting)
        );
    }

    #[test]
    fn validate_rejects_collinear_spike_and_ring() {
        // spike: C lies between A and B, so edge BC doubles back over AB
        assert_eq!(
            validate_polygon(vec![pt(0.0, 0.0), pt(2.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0)]),
            Err(RejectionReason::SelfIntersecting)
        );
        // fully collinear ring
        assert_eq!(
            validate_polygon(vec![pt(0.0, 0.0), pt(1.0, 1.0), pt(2.0, 2.0)]),
            Err(RejectionReason::SelfIntersecting)
        );
    }

    #[test]
    fn validate_rejects_non_finite() {
        assert_eq!(
            validate_polygon(vec![pt(0.0, 0.0), pt(f64::NAN, 0.0), pt(1.0, 1.0)]),
            Err(RejectionReason::NonFinite)
        );
    }

    #[test]
    fn validate_rejects_repeated_non_consecutive_vertex() {
        assert_eq!(
            validate_polygon(vec![
                pt(0.0, 0.0),
                pt(1.0, 0.0),
                pt(0.0, 0.0),
                pt(1.0, 1.0),
            ]),
            Err(RejectionReason::SelfIntersecting)
        );
    }

    #[test]
    fn geopoint_range_validation() {
        assert!(GeoPoint::new(-180.0, 90.0).is_ok());
        assert!(GeoPoint::new(180.1, 0.0).is_err());
        assert!(GeoPoint::new(0.0, -90.5).is_err());
        assert!(GeoPoint::new(f64::NAN, 0.0).is_err());
    }
}
