//! Granularity/efficiency tradeoff study.
//!
//! Builds a baseline grid, rebuilds at coarser granularities, re-interpolates
//! each coarse grid onto the baseline locations, and reports counting-phase
//! wall time plus the distribution of |md differences| against the baseline.
//! Timing covers the counting phase only (candidate generation excluded);
//! absolute seconds are machine-specific, the ratios are what carry meaning,
//! and both the time ratio and the point-count ratio are reported.

use std::time::Instant;

use serde::Serialize;

use crate::dataset::{RegionBoundary, ResponseSet};
use crate::grid::{build_on_points, interpolate_grid, make_grid_points, FuzzyGrid, GranularitySpec};
use crate::membership::EvalParams;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GranularityRow {
    pub pct: f64,
    pub point_count: usize,
    pub build_seconds: f64,
    /// Baseline counting time over this row's counting time.
    pub reduction_factor: f64,
    /// Baseline point count over this row's point count.
    pub point_reduction_factor: f64,
    /// Mean of |interpolated md - baseline md| over baseline points.
    pub mean_abs_diff: f64,
    /// Population standard deviation of the same differences.
    pub std_abs_diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GranularityStudyReport {
    pub baseline_pct: f64,
    pub baseline_point_count: usize,
    pub baseline_build_seconds: f64,
    pub rows: Vec<GranularityRow>,
}

impl GranularityStudyReport {
    pub fn validate(&self) -> Result<()> {
        if self.baseline_point_count == 0 {
            return Err(Error::InvalidReport("baseline grid is empty".to_string()));
        }
        for row in &self.rows {
            if row.point_count == 0 {
                return Err(Error::InvalidReport(format!("{}% grid is empty", row.pct)));
            }
            let expected = self.baseline_build_seconds / row.build_seconds;
            if row.reduction_factor != expected {
                return Err(Error::InvalidReport(format!(
                    "{}% reduction factor {} does not equal {}",
                    row.pct, row.reduction_factor, expected
                )));
            }
            for (name, v) in [("mean", row.mean_abs_diff), ("std", row.std_abs_diff)] {
                if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidReport(format!(
                        "{}% {name} abs diff {v} is outside [0, 1]",
                        row.pct
                    )));
                }
            }
        }
        Ok(())
    }
}

fn timed_build(
    region: &RegionBoundary,
    responses: &ResponseSet,
    granularity: GranularitySpec,
) -> Result<(FuzzyGrid, f64)> {
    let points = make_grid_points(region, granularity)?;
    let start = Instant::now();
    let grid = build_on_points(points, responses, granularity, region.bbox())?;
    Ok((grid, start.elapsed().as_secs_f64()))
}

/// Compare coarser granularities against a baseline grid, both in counting
/// time and in approximation error after re-interpolation onto the baseline
/// locations.
pub fn granularity_study(
    region: &RegionBoundary,
    responses: &ResponseSet,
    baseline: GranularitySpec,
    others: &[GranularitySpec],
    params: &EvalParams,
) -> Result<GranularityStudyReport> {
    let (base_grid, base_seconds) = timed_build(region, responses, baseline)?;
    let base_locations = base_grid.locations();

    let mut rows = Vec::with_capacity(others.len());
    for &g in others {
        let (grid, seconds) = timed_build(region, responses, g)?;
        let interpolated = interpolate_grid(&grid, &base_locations, baseline, params)?;
        let diffs: Vec<f64> = interpolated
            .points
            .iter()
            .zip(&base_grid.points)
            .map(|(a, b)| {
                debug_assert_eq!(a.location, b.location);
                (a.md - b.md).abs()
            })
            .collect();
        let n = diffs.len() as f64;
        let mean = diffs.iter().sum::<f64>() / n;
        let variance = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / n;
        rows.push(GranularityRow {
            pct: g.percent(),
            point_count: grid.points.len(),
            build_seconds: seconds,
            reduction_factor: base_seconds / seconds,
            point_reduction_factor: base_grid.points.len() as f64 / grid.points.len() as f64,
            mean_abs_diff: mean,
            std_abs_diff: variance.sqrt(),
        });
    }

    Ok(GranularityStudyReport {
        baseline_pct: baseline.percent(),
        baseline_point_count: base_grid.points.len(),
        baseline_build_seconds: base_seconds,
        rows,
    })
}
