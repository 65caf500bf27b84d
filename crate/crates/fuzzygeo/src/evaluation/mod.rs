//! Evaluation protocol: granularity/efficiency study, k-fold
//! cross-validation with precision/recall, antonymy comparison, and
//! monotonicity auditing.

mod crossval;
mod granularity;
mod metrics;
mod properties;

pub use crossval::{cross_validate, CrossValConfig, CrossValReport};
pub use granularity::{granularity_study, GranularityRow, GranularityStudyReport};
pub use metrics::{precision_recall, HitMatrix, LabelMetrics, MetricValue, PRMetrics, UndefinedMetric};
pub use properties::{
    antonymy_check, monotonicity_check, AntonymyReport, Axis, DiffPoint, Direction,
    MonotonicityReport, Violation,
};
