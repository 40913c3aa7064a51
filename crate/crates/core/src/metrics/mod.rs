//! Evaluation metrics for both tasks.
//!
//! Tag metrics take probabilities, never logits. Difficulty metrics work on
//! class indices, so distances are in difficulty levels, not rating points.

mod classification;
mod ordinal;
mod roc;

pub use classification::{evaluate_tags, f1_macro, LabelEval, TagEval};
pub use ordinal::{accuracy, cs, evaluate_difficulty, mae, CumulativeScore, DifficultyEval};
pub use roc::{auroc, roc_points, RocCurve, RocPoint};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error("metric undefined: labels need at least one positive and one negative")]
    Undefined,
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("metric needs at least one sample")]
    Empty,
    #[error("label values must be 0 or 1, got {0}")]
    NonBinaryLabel(u8),
    #[error("decision threshold must lie in [0, 1], got {0}")]
    InvalidThreshold(f64),
}

fn check_lengths(a: usize, b: usize) -> Result<(), MetricsError> {
    if a != b {
        return Err(MetricsError::LengthMismatch(a, b));
    }
    Ok(())
}

fn check_binary(labels: &[u8]) -> Result<(), MetricsError> {
    match labels.iter().find(|&&l| l > 1) {
        Some(&l) => Err(MetricsError::NonBinaryLabel(l)),
        None => Ok(()),
    }
}
