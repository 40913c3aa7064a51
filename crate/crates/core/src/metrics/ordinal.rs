use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{check_lengths, MetricsError};

fn check_pair(pred: &[usize], truth: &[usize]) -> Result<(), MetricsError> {
    check_lengths(pred.len(), truth.len())?;
    if pred.is_empty() {
        return Err(MetricsError::Empty);
    }
    Ok(())
}

/// Fraction of exact matches.
pub fn accuracy(pred: &[usize], truth: &[usize]) -> Result<f64, MetricsError> {
    check_pair(pred, truth)?;
    let hits = pred.iter().zip(truth).filter(|(p, t)| p == t).count();
    Ok(hits as f64 / pred.len() as f64)
}

/// Cumulative score: percentage of predictions within `theta` levels.
pub fn cs(pred: &[usize], truth: &[usize], theta: usize) -> Result<f64, MetricsError> {
    check_pair(pred, truth)?;
    let hits = pred.iter().zip(truth).filter(|(p, t)| p.abs_diff(**t) <= theta).count();
    Ok(100.0 * (hits as f64 / pred.len() as f64))
}

/// Mean absolute error in levels.
pub fn mae(pred: &[usize], truth: &[usize]) -> Result<f64, MetricsError> {
    check_pair(pred, truth)?;
    let total: usize = pred.iter().zip(truth).map(|(p, t)| p.abs_diff(*t)).sum();
    Ok(total as f64 / pred.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CumulativeScore {
    pub theta: usize,
    /// Percent.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DifficultyEval {
    /// Number of scored samples (those with a known difficulty).
    pub n: usize,
    pub accuracy: f64,
    pub cs: Vec<CumulativeScore>,
    pub mae: f64,
}

impl DifficultyEval {
    pub fn cs_at(&self, theta: usize) -> Option<f64> {
        self.cs.iter().find(|c| c.theta == theta).map(|c| c.value)
    }
}

pub fn evaluate_difficulty(pred: &[usize], truth: &[usize], thetas: &[usize]) -> Result<DifficultyEval, MetricsError> {
    Ok(DifficultyEval {
        n: pred.len(),
        accuracy: accuracy(pred, truth)?,
        cs: thetas
            .iter()
            .map(|&theta| cs(pred, truth, theta).map(|value| CumulativeScore { theta, value }))
            .collect::<Result<_, _>>()?,
        mae: mae(pred, truth)?,
    })
}
