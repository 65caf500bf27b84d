//! Semantic property audits: antonymy and monotonicity.

use serde::Serialize;

use crate::geometry::GeoPoint;
use crate::grid::FuzzyGrid;
use crate::membership::{evaluate, EvalParams};
use crate::{Error, Result};

/// One target's signed deviation from perfect antonymy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiffPoint {
    pub location: GeoPoint,
    /// `eval_b - (1 - eval_a)`; zero means b is exactly the complement of a
    /// at this location.
    pub diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AntonymyReport {
    pub mean_abs_diff: f64,
    pub max_abs_diff: f64,
    pub diff_points: Vec<DiffPoint>,
}

impl AntonymyReport {
    pub fn validate(&self) -> Result<()> {
        let n = self.diff_points.len();
        if n == 0 {
            if self.mean_abs_diff != 0.0 || self.max_abs_diff != 0.0 {
                return Err(Error::InvalidReport(
                    "empty antonymy report carries nonzero summaries".to_string(),
                ));
            }
            return Ok(());
        }
        for d in &self.diff_points {
            if !d.diff.is_finite() || d.diff.abs() > 1.0 {
                return Err(Error::InvalidReport(format!(
                    "antonymy diff {} at {} is outside [-1, 1]",
                    d.diff, d.location
                )));
            }
        }
        let mean = self.diff_points.iter().map(|d| d.diff.abs()).sum::<f64>() / n as f64;
        let max = self
            .diff_points
            .iter()
            .map(|d| d.diff.abs())
            .fold(0.0, f64::max);
        if mean != self.mean_abs_diff || max != self.max_abs_diff {
            return Err(Error::InvalidReport(
                "antonymy summaries disagree with the diff points".to_string(),
            ));
        }
        Ok(())
    }
}

/// Compare `grid_b` against the standard fuzzy negation of `grid_a` at every
/// target: diff = mu_b(p) - (1 - mu_a(p)).
pub fn antonymy_check(
    grid_a: &FuzzyGrid,
    grid_b: &FuzzyGrid,
    targets: &[GeoPoint],
    params: &EvalParams,
) -> Result<AntonymyReport> {
    let mut diff_points = Vec::with_capacity(targets.len());
    for &location in targets {
        let a = evaluate(grid_a, location, params)?;
        let b = evaluate(grid_b, location, params)?;
        diff_points.push(DiffPoint {
            location,
            diff: b - (1.0 - a),
        });
    }
    let n = diff_points.len();
    let (mean_abs_diff, max_abs_diff) = if n == 0 {
        (0.0, 0.0)
    } else {
        (
            diff_points.iter().map(|d| d.diff.abs()).sum::<f64>() / n as f64,
            diff_points.iter().map(|d| d.diff.abs()).fold(0.0, f64::max),
        )
    };
    Ok(AntonymyReport {
        mean_abs_diff,
        max_abs_diff,
        diff_points,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Lat,
    Lon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// An adjacent pair on a grid line whose degrees move the wrong way:
/// `point_b` is further along the stated direction yet `md_a > md_b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violation {
    pub point_a: GeoPoint,
    pub point_b: GeoPoint,
    pub md_a: f64,
    pub md_b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub axis: Axis,
    pub direction: Direction,
    pub violations: Vec<Violation>,
}

impl MonotonicityReport {
    pub fn validate(&self) -> Result<()> {
        for v in &self.violations {
            if v.md_a <= v.md_b || v.md_a.is_nan() || v.md_b.is_nan() {
                return Err(Error::InvalidReport(format!(
                    "violation at {} -> {} has md_a {} <= md_b {}",
                    v.point_a, v.point_b, v.md_a, v.md_b
                )));
            }
        }
        Ok(())
    }
}

/// Check that membership degrees are monotone along grid lines.
///
/// Grid points are grouped into lines of constant other-coordinate (exact
/// equality; the lattice guarantees identical values per row and column) and
/// traversed along the stated direction; every adjacent pair whose degree
/// decreases is reported.
pub fn monotonicity_check(grid: &FuzzyGrid, axis: Axis, direction: Direction) -> MonotonicityReport {
    let line_key = |p: GeoPoint| match axis {
        Axis::Lat => p.lon,
        Axis::Lon => p.lat,
    };
    let along = |p: GeoPoint| match axis {
        Axis::Lat => p.lat,
        Axis::Lon => p.lon,
    };

    let mut order: Vec<usize> = (0..grid.points.len()).collect();
    order.sort_by(|&a, &b| {
        let (pa, pb) = (grid.points[a].location, grid.points[b].location);
        line_key(pa)
            .total_cmp(&line_key(pb))
            .then(along(pa).total_cmp(&along(pb)))
    });

    let mut violations = Vec::new();
    let mut line_start = 0;
    while line_start < order.len() {
        let key = line_key(grid.points[order[line_start]].location);
        let mut line_end = line_start + 1;
        while line_end < order.len() && line_key(grid.points[order[line_end]].location) == key {
            line_end += 1;
        }
        let line = &order[line_start..line_end];
        let traversal: Vec<usize> = match direction {
            Direction::Increasing => line.to_vec(),
            Direction::Decreasing => line.iter().rev().copied().collect(),
        };
        for pair in traversal.windows(2) {
            let a = &grid.points[pair[0]];
            let b = &grid.points[pair[1]];
            if a.md > b.md {
                violations.push(Violation {
                    point_a: a.location,
                    point_b: b.location,
                    md_a: a.md,
                    md_b: b.md,
                });
            }
        }
        line_start = line_end;
    }

    MonotonicityReport {
        axis,
        direction,
        violations,
    }
}
