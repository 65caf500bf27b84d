//! Fuzzy grid construction and re-interpolation.
//!
//! A descriptor's fuzzy grid is a lattice of region-contained points, each
//! holding the fraction of corpus polygons that cover it, normalized by the
//! maximum count so the best-covered point sits at exactly 1. Grid points are
//! kept in canonical order: ascending latitude, then ascending longitude.

use crate::dataset::{DescriptorLabel, RegionBoundary, ResponseSet};
use crate::geometry::{point_in_polygon, BoundingBox, GeoPoint};
use crate::membership::{evaluate, EvalParams};
use crate::{Error, Result};

/// Grid spacing as a percentage of the region bounding-box extent per axis.
/// Lower percentage means a denser grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GranularitySpec {
    percent: f64,
}

impl GranularitySpec {
    pub fn new(percent: f64) -> Result<Self> {
        if !percent.is_finite() || percent <= 0.0 || percent > 100.0 {
            return Err(Error::InvalidGranularity(percent));
        }
        Ok(GranularitySpec { percent })
    }

    pub fn percent(&self) -> f64 {
        self.percent
    }
}

/// One grid point: a location inside the region and its membership degree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub location: GeoPoint,
    pub md: f64,
}

/// A built fuzzy descriptor: the discrete carrier of its membership function.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyGrid {
    pub label: DescriptorLabel,
    pub granularity: GranularitySpec,
    pub bbox: BoundingBox,
    /// Sorted ascending by (lat, lon); every md lies in [0, 1].
    pub points: Vec<GridPoint>,
    pub response_count: usize,
}

impl FuzzyGrid {
    pub fn new(
        label: DescriptorLabel,
        granularity: GranularitySpec,
        bbox: BoundingBox,
        points: Vec<GridPoint>,
        response_count: usize,
    ) -> Result<Self> {
        let grid = FuzzyGrid {
            label,
            granularity,
            bbox,
            points,
            response_count,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        self.bbox.validate()?;
        if self.points.is_empty() {
            return Err(Error::InvalidGrid("grid has no points".to_string()));
        }
        for gp in &self.points {
            gp.location.validate().map_err(|e| Error::InvalidGrid(e.to_string()))?;
            if !gp.md.is_finite() || !(0.0..=1.0).contains(&gp.md) {
                return Err(Error::InvalidGrid(format!(
                    "membership degree {} at {} is outside [0, 1]",
                    gp.md, gp.location
                )));
            }
        }
        for pair in self.points.windows(2) {
            let (a, b) = (pair[0].location, pair[1].location);
            if (b.lat, b.lon) <= (a.lat, a.lon) {
                return Err(Error::InvalidGrid(format!(
                    "points out of canonical (lat, lon) order at {a} -> {b}"
                )));
            }
        }
        Ok(())
    }

    pub fn locations(&self) -> Vec<GeoPoint> {
        self.points.iter().map(|gp| gp.location).collect()
    }

    pub fn max_md(&self) -> f64 {
        self.points.iter().map(|gp| gp.md).fold(0.0, f64::max)
    }
}

/// Lattice coordinates along one bbox axis. Both edges are included whenever
/// the percentage divides 100; the final line snaps onto the far edge so
/// floating-point drift cannot push it off the region.
fn axis_coords(min: f64, max: f64, percent: f64) -> Vec<f64> {
    let steps = (100.0 / percent + 1e-9).floor() as usize;
    let spacing = percent / 100.0 * (max - min);
    (0..=steps)
        .map(|i| {
            if i == steps && (steps as f64 * percent - 100.0).abs() <= 1e-7 {
                max
            } else {
                min + i as f64 * spacing
            }
        })
        .collect()
}

/// Generate the equidistant lattice over the region bounding box and keep the
/// points contained (boundary-inclusive) in the region shape, in canonical
/// (lat, lon) ascending order.
pub fn make_grid_points(
    region: &RegionBoundary,
    granularity: GranularitySpec,
) -> Result<Vec<GeoPoint>> {
    let bbox = region.bbox();
    let lons = axis_coords(bbox.min_lon, bbox.max_lon, granularity.percent());
    let lats = axis_coords(bbox.min_lat, bbox.max_lat, granularity.percent());
    let mut points = Vec::new();
    for &lat in &lats {
        for &lon in &lons {
            let p = GeoPoint { lon, lat };
            if point_in_polygon(p, region.shape()) {
                points.push(p);
            }
        }
    }
    if points.is_empty() {
        return Err(Error::EmptyGrid);
    }
    Ok(points)
}

/// Count-and-normalize over an already generated point set. Split out from
/// [`build_fuzzy_grid`] so studies can time the counting phase alone.
pub fn build_on_points(
    points: Vec<GeoPoint>,
    responses: &ResponseSet,
    granularity: GranularitySpec,
    bbox: BoundingBox,
) -> Result<FuzzyGrid> {
    let counts: Vec<u32> = points
        .iter()
        .map(|p| {
            responses
                .polygons
                .iter()
                .filter(|poly| point_in_polygon(*p, poly))
                .count() as u32
        })
        .collect();
    let max = counts.iter().copied().max().unwrap_or(0);
    if max == 0 {
        return Err(Error::NoCoverage);
    }
    let grid_points = points
        .into_iter()
        .zip(counts)
        .map(|(location, count)| GridPoint {
            location,
            md: count as f64 / max as f64,
        })
        .collect();
    FuzzyGrid::new(
        responses.label.clone(),
        granularity,
        bbox,
        grid_points,
        responses.polygons.len(),
    )
}

/// Build the fuzzy grid of a descriptor: for every region grid point, count
/// the response polygons containing it and normalize by the maximum count.
pub fn build_fuzzy_grid(
    region: &RegionBoundary,
    responses: &ResponseSet,
    granularity: GranularitySpec,
) -> Result<FuzzyGrid> {
    let points = make_grid_points(region, granularity)?;
    build_on_points(points, responses, granularity, region.bbox())
}

/// Evaluate `source` at every target location, producing a new grid labeled
/// like the source and stamped with the granularity the targets were
/// generated at. Membership degrees come from the 4-nearest-neighbor
/// evaluation, so targets coinciding with source points snap exactly.
pub fn interpolate_grid(
    source: &FuzzyGrid,
    targets: &[GeoPoint],
    target_granularity: GranularitySpec,
    params: &EvalParams,
) -> Result<FuzzyGrid> {
    let mut points = Vec::with_capacity(targets.len());
    for &target in targets {
        let md = evaluate(source, target, params)?;
        points.push(GridPoint {
            location: target,
            md,
        });
    }
    points.sort_by(|a, b| {
        (a.location.lat, a.location.lon)
            .partial_cmp(&(b.location.lat, b.location.lon))
            .expect("grid coordinates are finite")
    });
    FuzzyGrid::new(
        source.label.clone(),
        target_granularity,
        source.bbox,
        points,
        source.response_count,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::validate_polygon;

    fn pt(lon: f64, lat: f64) -> GeoPoint {
        GeoPoint { lon, lat }
    }

    fn unit_square_region() -> RegionBoundary {
        let shape = validate_polygon(vec![
            pt(0.0, 0.0),
            pt(1.0, 0.0),
            pt(1.0, 1.0),
            pt(0.0, 1.0),
        ])
        .unwrap();
        RegionBoundary::new(shape)
    }

    fn label(s: &str) -> DescriptorLabel {
        DescriptorLabel::new(s).unwrap()
    }

    fn pct(p: f64) -> GranularitySpec {
        GranularitySpec::new(p).unwrap()
    }

    #[test]
    fn unit_square_50pct_is_3x3() {
        let points = make_grid_points(&unit_square_region(), pct(50.0)).unwrap();
        assert_eq!(points.len(), 9);
        let expected: Vec<GeoPoint> = [0.0, 0.5, 1.0]
            .iter()
            .flat_map(|&lat| [0.0, 0.5, 1.0].iter().map(move |&lon| pt(lon, lat)))
            .collect();
        assert_eq!(points, expected);
    }

    #[test]
    fn unit_square_100pct_is_corners() {
        let points = make_grid_points(&unit_square_region(), pct(100.0)).unwrap();
        assert_eq!(points.len(), 4);
        assert_eq!(
            points,
            vec![pt(0.0, 0.0), pt(1.0, 0.0), pt(0.0, 1.0), pt(1.0, 1.0)]
        );
    }

    #[test]
    fn grid_points_sorted_and_edge_inclusive() {
        let points = make_grid_points(&unit_square_region(), pct(10.0)).unwrap();
        assert_eq!(points.len(), 121);
        assert!(points
            .windows(2)
            .all(|w| (w[0].lat, w[0].lon) < (w[1].lat, w[1].lon)));
        assert_eq!(points.first().unwrap(), &pt(0.0, 0.0));
        assert_eq!(points.last().unwrap(), &pt(1.0, 1.0));
    }

    #[test]
    fn empty_grid_when_region_misses_all_candidates() {
        // diamond inscribed in the unit square: at 100% granularity the only
        // candidates are the square corners, all outside the diamond
        let diamond = validate_polygon(vec![
            pt(0.5, 0.0),
            pt(1.0, 0.5),
            pt(0.5, 1.0),
            pt(0.0, 0.5),
        ])
        .unwrap();
        let region = RegionBoundary::new(diamond);
        assert_eq!(
            make_grid_points(&region, pct(100.0)).unwrap_err(),
            Error::EmptyGrid
        );
    }

    #[test]
    fn build_counts_and_normalizes() {
        let region = unit_square_region();
        let left_half = validate_polygon(vec![
            pt(0.0, 0.0),
            pt(0.5, 0.0),
            pt(0.5, 1.0),
            pt(0.0, 1.0),
        ])
        .unwrap();
        let full = region.shape().clone();
        let responses = ResponseSet::new(label("left"), vec![left_half, full]).unwrap();
        let grid = build_fuzzy_grid(&region, &responses, pct(50.0)).unwrap();
        assert_eq!(grid.points.len(), 9);
        assert_eq!(grid.response_count, 2);
        for gp in &grid.points {
            let expected = if gp.location.lon <= 0.5 { 1.0 } else { 0.5 };
            assert_eq!(gp.md, expected, "at {}", gp.location);
        }
    }

    #[test]
    fn single_covering_polygon_gives_all_ones() {
        let region = unit_square_region();
        let responses = ResponseSet::new(label("all"), vec![region.shape().clone()]).unwrap();
        let grid = build_fuzzy_grid(&region, &responses, pct(25.0)).unwrap();
        assert!(grid.points.iter().all(|gp| gp.md == 1.0));
    }

    #[test]
    fn no_coverage_is_an_error() {
        let region = unit_square_region();
        // polygon strictly between grid lines of the 50% lattice
        let sliver = validate_polygon(vec![
            pt(0.1, 0.1),
            pt(0.2, 0.1),
            pt(0.2, 0.2),
            pt(0.1, 0.2),
        ])
        .unwrap();
        let responses = ResponseSet::new(label("sliver"), vec![sliver]).unwrap();
        assert_eq!(
            build_fuzzy_grid(&region, &responses, pct(50.0)).unwrap_err(),
            Error::NoCoverage
        );
    }

    #[test]
    fn built_grid_max_md_is_exactly_one() {
        let region = unit_square_region();
        let upper = validate_polygon(vec![
            pt(0.0, 0.3),
            pt(1.0, 0.3),
            pt(1.0, 1.0),
            pt(0.0, 1.0),
        ])
        .unwrap();
        let most = validate_polygon(vec![
            pt(0.0, 0.6),
            pt(1.0, 0.6),
            pt(1.0, 1.0),
            pt(0.0, 1.0),
        ])
        .unwrap();
        let responses = ResponseSet::new(label("north"), vec![upper, most]).unwrap();
        let grid = build_fuzzy_grid(&region, &responses, pct(10.0)).unwrap();
        assert_eq!(grid.max_md(), 1.0);
    }

    #[test]
    fn build_is_independent_of_polygon_order() {
        let region = unit_square_region();
        let a = validate_polygon(vec![pt(0.0, 0.2), pt(1.0, 0.2), pt(1.0, 1.0), pt(0.0, 1.0)])
            .unwrap();
        let b = validate_polygon(vec![pt(0.0, 0.5), pt(1.0, 0.5), pt(1.0, 1.0), pt(0.0, 1.0)])
            .unwrap();
        let c = validate_polygon(vec![pt(0.0, 0.8), pt(1.0, 0.8), pt(1.0, 1.0), pt(0.0, 1.0)])
            .unwrap();
        let fwd = ResponseSet::new(label("north"), vec![a.clone(), b.clone(), c.clone()]).unwrap();
        let rev = ResponseSet::new(label("north"), vec![c, b, a]).unwrap();
        let g1 = build_fuzzy_grid(&region, &fwd, pct(20.0)).unwrap();
        let g2 = build_fuzzy_grid(&region, &rev, pct(20.0)).unwrap();
        assert_eq!(g1, g2);
    }

    #[test]
    fn duplicating_every_polygon_preserves_degrees() {
        let region = unit_square_region();
        let a = validate_polygon(vec![pt(0.0, 0.2), pt(1.0, 0.2), pt(1.0, 1.0), pt(0.0, 1.0)])
            .unwrap();
        let b = validate_polygon(vec![pt(0.0, 0.7), pt(1.0, 0.7), pt(1.0, 1.0), pt(0.0, 1.0)])
            .unwrap();
        let single = ResponseSet::new(label("north"), vec![a.clone(), b.clone()]).unwrap();
        let doubled = ResponseSet::new(label("north"), vec![a.clone(), b.clone(), a, b]).unwrap();
        let g1 = build_fuzzy_grid(&region, &single, pct(10.0)).unwrap();
        let g2 = build_fuzzy_grid(&region, &doubled, pct(10.0)).unwrap();
        // counts and max both double, so every degree is bit-identical
        for (p1, p2) in g1.points.iter().zip(&g2.points) {
            assert_eq!(p1.md, p2.md);
        }
    }

    #[test]
    fn point_count_scaling_ratio() {
        // convex blob region: lattice counts should scale ~4x per halving
        let n = 48;
        let ring: Vec<GeoPoint> = (0..n)
            .map(|k| {
                let theta = std::f64::consts::TAU * k as f64 / n as f64;
                pt(1.2 * theta.cos(), theta.sin())
            })
            .collect();
        let region = RegionBoundary::new(validate_polygon(ring).unwrap());
        for (fine, coarse) in [(1.0, 2.0), (2.5, 5.0), (5.0, 10.0)] {
            let nf = make_grid_points(&region, pct(fine)).unwrap().len() as f64;
            let nc = make_grid_points(&region, pct(coarse)).unwrap().len() as f64;
            let ratio = nf / nc;
            assert!(
                (3.5..=4.5).contains(&ratio),
                "{fine}% vs {coarse}%: ratio {ratio}"
            );
        }
    }

    #[test]
    fn interpolate_onto_own_locations_is_identity() {
        let region = unit_square_region();
        let upper = validate_polygon(vec![
            pt(0.0, 0.4),
            pt(1.0, 0.4),
            pt(1.0, 1.0),
            pt(0.0, 1.0),
        ])
        .unwrap();
        let responses =
            ResponseSet::new(label("north"), vec![upper, region.shape().clone()]).unwrap();
        let grid = build_fuzzy_grid(&region, &responses, pct(20.0)).unwrap();
        let params = EvalParams::default();
        let re = interpolate_grid(&grid, &grid.locations(), grid.granularity, &params).unwrap();
        assert_eq!(re, grid);
    }

    #[test]
    fn interpolating_constant_grid_stays_constant() {
        let region = unit_square_region();
        let responses = ResponseSet::new(label("all"), vec![region.shape().clone()]).unwrap();
        let grid = build_fuzzy_grid(&region, &responses, pct(25.0)).unwrap();
        let params = EvalParams::default();
        let targets: Vec<GeoPoint> = (0..20)
            .map(|i| pt(0.05 + 0.045 * i as f64, 0.03 + 0.047 * i as f64))
            .collect();
        let out = interpolate_grid(&grid, &targets, pct(5.0), &params).unwrap();
        for gp in &out.points {
            assert_eq!(gp.md, 1.0);
        }
    }

    #[test]
    fn granularity_validation() {
        assert!(GranularitySpec::new(0.0).is_err());
        assert!(GranularitySpec::new(-1.0).is_err());
        assert!(GranularitySpec::new(100.5).is_err());
        assert!(GranularitySpec::new(f64::NAN).is_err());
        assert!(GranularitySpec::new(100.0).is_ok());
    }
}
