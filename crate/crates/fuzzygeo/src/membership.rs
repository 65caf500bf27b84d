//! Membership evaluation at arbitrary coordinates.
//!
//! The membership degree of a location is interpolated from the four nearest
//! grid points by haversine distance. With sorted distances d1..d4 and total
//! T, the weights are the distances reversed over T (the nearest point gets
//! d4/T, the farthest d1/T), which makes the result a convex combination of
//! the four degrees. If the nearest point lies within epsilon, its stored
//! degree is returned unchanged, so grid locations evaluate to their own
//! degree bit-exactly.

use std::collections::{BTreeMap, BTreeSet};

use crate::dataset::DescriptorLabel;
use crate::geometry::{haversine_km, GeoPoint};
use crate::grid::FuzzyGrid;
use crate::{Error, Result};

/// Number of nearest grid points the interpolation draws on.
pub const NEIGHBOR_COUNT: usize = 4;

/// Evaluation parameters. `epsilon_km` is the snap distance: queries closer
/// than this to a grid point adopt its degree directly. The default 1e-5 km
/// (one centimeter) treats "practically the same location" as the same point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalParams {
    pub epsilon_km: f64,
}

impl EvalParams {
    pub fn new(epsilon_km: f64) -> Result<Self> {
        if !epsilon_km.is_finite() || epsilon_km <= 0.0 {
            return Err(Error::InvalidEpsilon(epsilon_km));
        }
        Ok(EvalParams { epsilon_km })
    }
}

impl Default for EvalParams {
    fn default() -> Self {
        EvalParams { epsilon_km: 1e-5 }
    }
}

/// One of the four selected nearest grid points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    /// Index into the grid's canonical point order.
    pub index: usize,
    pub distance_km: f64,
    pub md: f64,
}

/// Everything the evaluation decided, for instrumented checks.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub md: f64,
    /// The four nearest points in ascending (distance, index) order.
    pub neighbors: [Neighbor; NEIGHBOR_COUNT],
    /// Whether the epsilon branch returned the nearest point's degree.
    pub snapped: bool,
}

/// Evaluate the membership degree of `ep` on `grid`.
pub fn evaluate(grid: &FuzzyGrid, ep: GeoPoint, params: &EvalParams) -> Result<f64> {
    evaluate_detailed(grid, ep, params).map(|e| e.md)
}

/// [`evaluate`], exposing the selected neighbors and the snap decision.
pub fn evaluate_detailed(grid: &FuzzyGrid, ep: GeoPoint, params: &EvalParams) -> Result<Evaluation> {
    if grid.points.len() < NEIGHBOR_COUNT {
        return Err(Error::InsufficientGrid {
            points: grid.points.len(),
        });
    }

    // Exact 4-nearest selection over a full scan; ties in distance resolve by
    // canonical grid index, matching a stable sort on (distance, index).
    let mut best: [Neighbor; NEIGHBOR_COUNT] = [Neighbor {
        index: usize::MAX,
        distance_km: f64::INFINITY,
        md: 0.0,
    }; NEIGHBOR_COUNT];
    for (index, gp) in grid.points.iter().enumerate() {
        let distance_km = haversine_km(ep, gp.location);
        let candidate = Neighbor {
            index,
            distance_km,
            md: gp.md,
        };
        let mut slot = NEIGHBOR_COUNT;
        while slot > 0
            && (candidate.distance_km, candidate.index)
                < (best[slot - 1].distance_km, best[slot - 1].index)
        {
            slot -= 1;
        }
        if slot < NEIGHBOR_COUNT {
            for j in (slot..NEIGHBOR_COUNT - 1).rev() {
                best[j + 1] = best[j];
            }
            best[slot] = candidate;
        }
    }

    if best[0].distance_km < params.epsilon_km {
        return Ok(Evaluation {
            md: best[0].md,
            neighbors: best,
            snapped: true,
        });
    }

    // pairwise sum: four equal distances total exactly 4d
    let total = (best[0].distance_km + best[1].distance_km)
        + (best[2].distance_km + best[3].distance_km);
    let mut md = 0.0;
    for (i, neighbor) in best.iter().enumerate() {
        // reversed weights: the nearest point carries the largest distance
        let weight = best[NEIGHBOR_COUNT - 1 - i].distance_km / total;
        md += weight * neighbor.md;
    }
    // the weights sum to 1, so the result is a convex combination of the
    // neighbor degrees; keep it inside their range under f64 rounding
    let lo = best.iter().map(|n| n.md).fold(f64::INFINITY, f64::min);
    let hi = best.iter().map(|n| n.md).fold(f64::NEG_INFINITY, f64::max);
    Ok(Evaluation {
        md: md.clamp(lo, hi),
        neighbors: best,
        snapped: false,
    })
}

/// The winning descriptor for a location, with the full degree map.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub winner: DescriptorLabel,
    pub winning_md: f64,
    pub per_descriptor: BTreeMap<DescriptorLabel, f64>,
    /// True when at least two descriptors attain the maximum exactly; the
    /// winner is then the lexicographically smallest of them.
    pub tied: bool,
}

/// Evaluate every grid at `ep` and pick the descriptor with the highest
/// membership degree.
pub fn classify(
    grids: &[FuzzyGrid],
    ep: GeoPoint,
    params: &EvalParams,
) -> Result<Classification> {
    if grids.is_empty() {
        return Err(Error::NoGrids);
    }
    let mut seen = BTreeSet::new();
    for grid in grids {
        if !seen.insert(&grid.label) {
            return Err(Error::DuplicateLabel(grid.label.clone()));
        }
    }
    let mut per_descriptor = BTreeMap::new();
    for grid in grids {
        let md = evaluate(grid, ep, params)?;
        per_descriptor.insert(grid.label.clone(), md);
    }
    // BTreeMap iterates labels in ascending order; replacing only on a
    // strictly greater degree leaves the lexicographically smallest winner
    let mut winner = None;
    let mut winning_md = f64::NEG_INFINITY;
    let mut at_max = 0usize;
    for (l, &md) in &per_descriptor {
        if md > winning_md {
            winner = Some(l.clone());
            winning_md = md;
            at_max = 1;
        } else if md == winning_md {
            at_max += 1;
        }
    }
    Ok(Classification {
        winner: winner.expect("at least one grid"),
        winning_md,
        per_descriptor,
        tied: at_max >= 2,
    })
}
