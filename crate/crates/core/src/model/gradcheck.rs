use alloc::vec::Vec;

use super::extended::{joint_loss_dd, Probe};
use super::network::{backward, Batch, Example};
use super::params::{Dims, Heads, ModelParams, Parameters};
use super::ModelError;
use crate::rng;
use crate::text::DocumentVector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradCheckReport {
    /// Largest `|analytic - numeric| / max(1e-8, |analytic| + |numeric|)`.
    pub max_rel_error: f64,
    pub checked: usize,
    /// Coordinates whose perturbation flips a ReLU on or off.
    pub skipped: usize,
}

/// Compares the analytic gradient against central differences
/// `(f(θ+ε) - f(θ-ε)) / 2ε`, one coordinate at a time. The perturbed losses
/// are evaluated in double-double arithmetic with the coordinate held exactly
/// at `θ ± ε`, so the differences are not limited by f64 roundoff in `f`.
pub fn grad_check(params: &ModelParams, batch: &Batch, lambda: f64, eps: f64) -> Result<GradCheckReport, ModelError> {
    let (analytic, _) = backward(params, batch, lambda)?;
    let analytic: Vec<Vec<f64>> = analytic.tensors().iter().map(|t| t.to_vec()).collect();
    let (_, base_pattern) = joint_loss_dd(params, batch, lambda, None);
    let mut report = GradCheckReport { max_rel_error: 0.0, checked: 0, skipped: 0 };
    for (t, grad) in analytic.iter().enumerate() {
        for (j, &a) in grad.iter().enumerate() {
            let (plus, plus_pattern) = joint_loss_dd(params, batch, lambda, Some(Probe { tensor: t, index: j, offset: eps }));
            let (minus, minus_pattern) = joint_loss_dd(params, batch, lambda, Some(Probe { tensor: t, index: j, offset: -eps }));
            if plus_pattern != base_pattern || minus_pattern != base_pattern {
                report.skipped += 1;
                continue;
            }
            let numeric = plus.sub(minus).hi / (2.0 * eps);
            let rel = (a - numeric).abs() / (a.abs() + numeric.abs()).max(1e-8);
            report.max_rel_error = report.max_rel_error.max(rel);
            report.checked += 1;
        }
    }
    Ok(report)
}

/// Random dense instance for [`grad_check`]: Glorot weights with random
/// biases (or all zeros when `zero_params`), four samples with inputs in
/// `[-1, 1]`, random tags, and levels with the last one missing.
pub fn random_instance(dims: Dims, seed: u64, zero_params: bool) -> (ModelParams, Vec<Example>) {
    let mut params = if zero_params {
        ModelParams::zeros(dims, Heads::Both)
    } else {
        ModelParams::init(dims, Heads::Both, seed)
    };
    let mut r = rng::stream(seed, 0x6772_6164);
    if !zero_params {
        for bias in [Some(&mut params.encoder.bias), params.tag_head.as_mut().map(|h| &mut h.bias), params.diff_head.as_mut().map(|h| &mut h.bias)].into_iter().flatten() {
            for b in bias.iter_mut() {
                *b = rng::symmetric(&mut r, 0.5);
            }
        }
    }
    let examples = (0..4)
        .map(|s| Example {
            features: DocumentVector { dim: dims.input, entries: (0..dims.input).map(|i| (i, rng::symmetric(&mut r, 1.0))).collect() },
            tags: (0..dims.tags).map(|_| (rng::below(&mut r, 2)) as u8).collect(),
            level: if s == 3 || dims.levels == 0 { None } else { Some(rng::below(&mut r, dims.levels as u64) as usize) },
        })
        .collect();
    (params, examples)
}

pub fn random_grad_check(dims: Dims, seed: u64, lambda: f64, eps: f64, zero_params: bool) -> Result<GradCheckReport, ModelError> {
    let (params, examples) = random_instance(dims, seed, zero_params);
    let batch: Vec<&Example> = examples.iter().collect();
    grad_check(&params, &batch, lambda, eps)
}
