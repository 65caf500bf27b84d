//! Hit matrices and precision/recall metrics.

use serde::Serialize;

use crate::dataset::DescriptorLabel;
use crate::{Error, Result};

/// Column-normalized winner-vs-true-label fraction table.
///
/// `fractions[w][t]` is the mean fraction of test points whose true label is
/// `labels[t]` that were won by `labels[w]`. Every column sums to 1 (each
/// classified point has exactly one winner).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HitMatrix {
    pub labels: Vec<DescriptorLabel>,
    pub fractions: Vec<Vec<f64>>,
}

impl HitMatrix {
    pub fn new(labels: Vec<DescriptorLabel>, fractions: Vec<Vec<f64>>) -> Result<Self> {
        let m = HitMatrix { labels, fractions };
        m.check_shape()?;
        Ok(m)
    }

    fn check_shape(&self) -> Result<()> {
        let k = self.labels.len();
        if k == 0 {
            return Err(Error::InvalidReport("hit matrix has no labels".to_string()));
        }
        if self.fractions.len() != k || self.fractions.iter().any(|row| row.len() != k) {
            return Err(Error::InvalidReport(format!(
                "hit matrix is not {k}x{k}"
            )));
        }
        for row in &self.fractions {
            for &v in row {
                if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidReport(format!(
                        "hit fraction {v} is outside [0, 1]"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Shape, range, and column-stochasticity (each column sums to 1 ± 1e-9).
    pub fn validate(&self) -> Result<()> {
        self.check_shape()?;
        for t in 0..self.labels.len() {
            let sum: f64 = self.fractions.iter().map(|row| row[t]).sum();
            if (sum - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidReport(format!(
                    "column {} sums to {sum}, expected 1",
                    self.labels[t]
                )));
            }
        }
        Ok(())
    }

    /// Elementwise arithmetic mean of matrices sharing one label list.
    pub fn mean_of(matrices: &[HitMatrix]) -> Result<HitMatrix> {
        let first = matrices
            .first()
            .ok_or_else(|| Error::InvalidReport("no matrices to average".to_string()))?;
        let k = first.labels.len();
        for m in matrices {
            if m.labels != first.labels {
                return Err(Error::InvalidReport(
                    "matrices carry different label lists".to_string(),
                ));
            }
        }
        let n = matrices.len() as f64;
        let fractions = (0..k)
            .map(|w| {
                (0..k)
                    .map(|t| matrices.iter().map(|m| m.fractions[w][t]).sum::<f64>() / n)
                    .collect()
            })
            .collect();
        HitMatrix::new(first.labels.clone(), fractions)
    }
}

/// A metric value, or an explicit marker for why it is undefined. Degenerate
/// denominators are never reported as silent zeros.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum MetricValue {
    Value(f64),
    Undefined { undefined: UndefinedMetric },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum UndefinedMetric {
    /// Diagonal recall only exists for exactly two labels.
    DiagonalRecallUndefined,
    /// 0/0: the winner row (or diagonal pair) carries no mass.
    ZeroDenominator,
}

impl MetricValue {
    pub fn value(&self) -> Option<f64> {
        match self {
            MetricValue::Value(v) => Some(*v),
            MetricValue::Undefined { .. } => None,
        }
    }
}

impl std::fmt::Display for MetricValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MetricValue::Value(v) => write!(f, "{v:.3}"),
            MetricValue::Undefined { .. } => f.write_str("undef"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabelMetrics {
    pub label: DescriptorLabel,
    pub precision: MetricValue,
    /// This label's diagonal entry over the diagonal sum: true positives out
    /// of (true positives + true negatives). The two labels' values sum to
    /// exactly 1. Only defined for the two-label case.
    pub diagonal_recall: MetricValue,
    /// Conventional recall; with column-normalized fractions this is the
    /// diagonal entry.
    pub standard_recall: MetricValue,
}

/// Per-label precision and recall values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PRMetrics {
    pub per_label: Vec<LabelMetrics>,
}

impl PRMetrics {
    pub fn get(&self, label: &DescriptorLabel) -> Option<&LabelMetrics> {
        self.per_label.iter().find(|m| &m.label == label)
    }
}

/// Compute precision and both recall flavors from a hit matrix.
///
/// `class_weights` weight the true-label columns (they must be positive and
/// sum to 1); precision treats each label one-vs-rest. Diagonal recall
/// divides one diagonal entry by the diagonal sum and is marked undefined
/// unless the matrix has exactly two labels.
pub fn precision_recall(matrix: &HitMatrix, class_weights: &[f64]) -> Result<PRMetrics> {
    let k = matrix.labels.len();
    if class_weights.len() != k {
        return Err(Error::InvalidWeights(format!(
            "{} weights for {k} labels",
            class_weights.len()
        )));
    }
    if class_weights.iter().any(|&w| !w.is_finite() || w <= 0.0) {
        return Err(Error::InvalidWeights("weights must be positive".to_string()));
    }
    let total: f64 = class_weights.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidWeights(format!("weights sum to {total}, expected 1")));
    }

    let mut per_label = Vec::with_capacity(k);
    for a in 0..k {
        let tp_weighted = matrix.fractions[a][a] * class_weights[a];
        let row_weighted: f64 = (0..k)
            .map(|t| matrix.fractions[a][t] * class_weights[t])
            .sum();
        let precision = if row_weighted == 0.0 {
            MetricValue::Undefined {
                undefined: UndefinedMetric::ZeroDenominator,
            }
        } else {
            MetricValue::Value(tp_weighted / row_weighted)
        };
        per_label.push(LabelMetrics {
            label: matrix.labels[a].clone(),
            precision,
            diagonal_recall: MetricValue::Undefined {
                undefined: UndefinedMetric::DiagonalRecallUndefined,
            },
            standard_recall: MetricValue::Value(matrix.fractions[a][a]),
        });
    }

    if k == 2 {
        let diag_sum = matrix.fractions[0][0] + matrix.fractions[1][1];
        if diag_sum == 0.0 {
            for m in &mut per_label {
                m.diagonal_recall = MetricValue::Undefined {
                    undefined: UndefinedMetric::ZeroDenominator,
                };
            }
        } else {
            let first = matrix.fractions[0][0] / diag_sum;
            per_label[0].diagonal_recall = MetricValue::Value(first);
            // complement, so the pair sums to 1 exactly
            per_label[1].diagonal_recall = MetricValue::Value(1.0 - first);
        }
    }

    Ok(PRMetrics { per_label })
}
