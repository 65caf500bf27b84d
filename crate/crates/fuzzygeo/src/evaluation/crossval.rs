//! Seeded k-fold cross-validation of descriptors against their corpora.
//!
//! Per label, polygons are shuffled with a ChaCha8 stream derived from the
//! seed and split into near-equal folds. Each fold holds its polygons out,
//! rebuilds one grid per label from the remainder, samples test points for
//! every held-out polygon from a fine sampling lattice, and classifies them
//! against all grids. Per-polygon winner fractions are averaged per true
//! label within the fold, then fold matrices are averaged into the report.
//!
//! Determinism: label shuffles use stream (0, label index); per-fold sampling
//! uses stream (1, fold index) and draws in label order, then ascending
//! original polygon index. Identical inputs and seed reproduce the report
//! byte for byte.

use rand::seq::index::sample as sample_indices;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dataset::{RegionBoundary, ResponseSet};
use crate::evaluation::metrics::{precision_recall, HitMatrix, PRMetrics};
use crate::geometry::{point_in_polygon, GeoPoint};
use crate::grid::{build_on_points, make_grid_points, FuzzyGrid, GranularitySpec};
use crate::membership::{classify, EvalParams};
use crate::{Error, Result};

/// Cross-validation parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossValConfig {
    pub folds: usize,
    pub samples_per_polygon: usize,
    /// Lattice the test points are drawn from.
    pub sample_granularity: GranularitySpec,
    /// Granularity the per-fold model grids are built at.
    pub model_granularity: GranularitySpec,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossValReport {
    pub folds: usize,
    pub model_granularity_pct: f64,
    pub sample_granularity_pct: f64,
    pub samples_per_polygon: usize,
    pub seed: u64,
    pub per_fold: Vec<HitMatrix>,
    pub mean_matrix: HitMatrix,
    pub metrics: PRMetrics,
    /// Classifications where at least two descriptors tied exactly.
    pub tie_count: u64,
}

impl CrossValReport {
    pub fn validate(&self) -> Result<()> {
        if self.per_fold.len() != self.folds {
            return Err(Error::InvalidReport(format!(
                "{} fold matrices for {} folds",
                self.per_fold.len(),
                self.folds
            )));
        }
        for m in &self.per_fold {
            m.validate()?;
        }
        self.mean_matrix.validate()?;
        let recomputed = HitMatrix::mean_of(&self.per_fold)?;
        if recomputed != self.mean_matrix {
            return Err(Error::InvalidReport(
                "mean matrix is not the arithmetic mean of the fold matrices".to_string(),
            ));
        }
        for m in &self.metrics.per_label {
            for (name, v) in [
                ("precision", m.precision),
                ("diag. recall", m.diagonal_recall),
                ("standard recall", m.standard_recall),
            ] {
                if let Some(v) = v.value() {
                    if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                        return Err(Error::InvalidReport(format!(
                            "{name} {v} for {} is outside [0, 1]",
                            m.label
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn derive_rng(seed: u64, domain: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((domain << 32) | index);
    rng
}

/// Shuffle 0..n with the label's stream and deal near-equal contiguous folds
/// (sizes differ by at most one). Returns fold id per original index.
fn assign_folds(n: usize, folds: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let base = n / folds;
    let remainder = n % folds;
    let mut assignment = vec![0usize; n];
    let mut cursor = 0;
    for fold in 0..folds {
        let size = base + usize::from(fold < remainder);
        for &original in &order[cursor..cursor + size] {
            assignment[original] = fold;
        }
        cursor += size;
    }
    assignment
}

/// Run seeded k-fold cross-validation and report hit matrices, metrics, and
/// tie counts. Equal class weights feed the metrics.
pub fn cross_validate(
    region: &RegionBoundary,
    response_sets: &[ResponseSet],
    config: &CrossValConfig,
    params: &EvalParams,
) -> Result<CrossValReport> {
    if config.folds < 2 {
        return Err(Error::InvalidFolds(config.folds));
    }
    if config.samples_per_polygon == 0 {
        return Err(Error::InvalidSamples);
    }
    let labels: Vec<_> = response_sets.iter().map(|s| s.label.clone()).collect();
    for (i, label) in labels.iter().enumerate() {
        if labels[..i].contains(label) {
            return Err(Error::DuplicateLabel(label.clone()));
        }
    }
    if labels.is_empty() {
        return Err(Error::NoGrids);
    }
    for set in response_sets {
        if set.polygons.len() < config.folds {
            return Err(Error::InsufficientPolygons {
                label: set.label.clone(),
                have: set.polygons.len(),
                need: config.folds,
            });
        }
    }

    let sample_points = make_grid_points(region, config.sample_granularity)?;
    let model_points = make_grid_points(region, config.model_granularity)?;
    let bbox = region.bbox();
    let k = labels.len();

    let fold_of: Vec<Vec<usize>> = response_sets
        .iter()
        .enumerate()
        .map(|(li, set)| {
            let mut rng = derive_rng(config.seed, 0, li as u64);
            assign_folds(set.polygons.len(), config.folds, &mut rng)
        })
        .collect();

    let mut per_fold = Vec::with_capacity(config.folds);
    let mut tie_count = 0u64;
    for fold in 0..config.folds {
        // one model grid per label from everything outside this fold
        let mut grids: Vec<FuzzyGrid> = Vec::with_capacity(k);
        for (li, set) in response_sets.iter().enumerate() {
            let training: Vec<_> = set
                .polygons
                .iter()
                .enumerate()
                .filter(|(pi, _)| fold_of[li][*pi] != fold)
                .map(|(_, poly)| poly.clone())
                .collect();
            let training_set = ResponseSet::new(set.label.clone(), training)?;
            grids.push(build_on_points(
                model_points.clone(),
                &training_set,
                config.model_granularity,
                bbox,
            )?);
        }

        let mut rng = derive_rng(config.seed, 1, fold as u64);
        // wins[t][w]: summed per-polygon winner fractions for true label t
        let mut wins = vec![vec![0.0f64; k]; k];
        let mut held_out = vec![0usize; k];
        for (li, set) in response_sets.iter().enumerate() {
            for (pi, polygon) in set.polygons.iter().enumerate() {
                if fold_of[li][pi] != fold {
                    continue;
                }
                let candidates: Vec<GeoPoint> = sample_points
                    .iter()
                    .copied()
                    .filter(|p| point_in_polygon(*p, polygon))
                    .collect();
                if candidates.is_empty() {
                    return Err(Error::EmptyTestSample {
                        label: set.label.clone(),
                        polygon_index: pi,
                    });
                }
                let take = config.samples_per_polygon.min(candidates.len());
                let chosen = sample_indices(&mut rng, candidates.len(), take);
                let mut winner_counts = vec![0usize; k];
                for ci in chosen {
                    let classification = classify(&grids, candidates[ci], params)?;
                    if classification.tied {
                        tie_count += 1;
                    }
                    let wi = labels
                        .iter()
                        .position(|l| l == &classification.winner)
                        .expect("winner is one of the classified labels");
                    winner_counts[wi] += 1;
                }
                for (wi, &count) in winner_counts.iter().enumerate() {
                    wins[li][wi] += count as f64 / take as f64;
                }
                held_out[li] += 1;
            }
        }

        let fractions: Vec<Vec<f64>> = (0..k)
            .map(|w| (0..k).map(|t| wins[t][w] / held_out[t] as f64).collect())
            .collect();
        per_fold.push(HitMatrix::new(labels.clone(), fractions)?);
    }

    let mean_matrix = HitMatrix::mean_of(&per_fold)?;
    let weights = vec![1.0 / k as f64; k];
    let metrics = precision_recall(&mean_matrix, &weights)?;
    Ok(CrossValReport {
        folds: config.folds,
        model_granularity_pct: config.model_granularity.percent(),
        sample_granularity_pct: config.sample_granularity.percent(),
        samples_per_polygon: config.samples_per_polygon,
        seed: config.seed,
        per_fold,
        mean_matrix,
        metrics,
        tie_count,
    })
}
