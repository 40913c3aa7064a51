use alloc::vec::Vec;

use super::ModelError;

pub fn sigmoid(a: f64) -> f64 {
    if a >= 0.0 {
        1.0 / (1.0 + libm::exp(-a))
    } else {
        let e = libm::exp(a);
        e / (1.0 + e)
    }
}

pub fn log_softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lse = max + libm::log(logits.iter().map(|&a| libm::exp(a - max)).sum::<f64>());
    logits.iter().map(|&a| a - lse).collect()
}

pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&a| libm::exp(a - max)).collect();
    let total: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / total).collect()
}

/// Binary cross-entropy averaged over the `K` labels of one sample, in the
/// logit form `max(a, 0) - a y + ln(1 + e^-|a|)`.
pub fn bce_loss(logits: &[f64], targets: &[u8]) -> Result<f64, ModelError> {
    if logits.len() != targets.len() {
        return Err(ModelError::DimensionMismatch { what: "tag targets", expected: logits.len(), got: targets.len() });
    }
    if logits.is_empty() {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for (&a, &y) in logits.iter().zip(targets) {
        if y > 1 {
            return Err(ModelError::NonBinaryTarget(y));
        }
        total += a.max(0.0) - a * y as f64 + libm::log1p(libm::exp(-a.abs()));
    }
    Ok(total / logits.len() as f64)
}

/// [`bce_loss`] averaged over a batch.
pub fn bce_loss_batch(logits: &[Vec<f64>], targets: &[Vec<u8>]) -> Result<f64, ModelError> {
    if logits.len() != targets.len() {
        return Err(ModelError::DimensionMismatch { what: "batch size", expected: logits.len(), got: targets.len() });
    }
    if logits.is_empty() {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for (a, y) in logits.iter().zip(targets) {
        total += bce_loss(a, y)?;
    }
    Ok(total / logits.len() as f64)
}

/// `-log softmax(logits)[target]`.
pub fn ce_loss(logits: &[f64], target: usize) -> Result<f64, ModelError> {
    if target >= logits.len() {
        return Err(ModelError::LevelOutOfRange { index: target, levels: logits.len() });
    }
    Ok(-log_softmax(logits)[target])
}

/// Mean [`ce_loss`] over the samples whose target is present. A batch with
/// no targets has loss 0.
pub fn ce_loss_batch(logits: &[Vec<f64>], targets: &[Option<usize>]) -> Result<f64, ModelError> {
    if logits.len() != targets.len() {
        return Err(ModelError::DimensionMismatch { what: "batch size", expected: logits.len(), got: targets.len() });
    }
    let mut total = 0.0;
    let mut labeled = 0usize;
    for (a, t) in logits.iter().zip(targets) {
        if let Some(d) = *t {
            total += ce_loss(a, d)?;
            labeled += 1;
        }
    }
    Ok(if labeled == 0 { 0.0 } else { total / labeled as f64 })
}

pub fn joint_loss(l1: f64, l2: f64, lambda: f64) -> f64 {
    l1 + lambda * l2
}
