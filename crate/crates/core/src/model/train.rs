use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::adam::{Adam, AdamConfig};
use super::network::{backward_into, Example, LossParts};
use super::params::{Dims, Heads, Linear, ModelParams, Parameters};
use super::ModelError;
use crate::rng::{self, streams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    /// Weight of the difficulty loss.
    pub lambda: f64,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub seed: u64,
    pub heads: Heads,
    pub adam: AdamConfig,
    /// Stop after this many epochs without a lower mean training loss.
    pub patience: Option<usize>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            lambda: 10.0,
            learning_rate: 1e-3,
            batch_size: 32,
            epochs: 20,
            seed: 42,
            heads: Heads::Both,
            adam: AdamConfig::default(),
            patience: None,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), ModelError> {
        let bad = |msg: alloc::string::String| Err(ModelError::InvalidConfig(msg));
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return bad(format!("lambda must be finite and >= 0, got {}", self.lambda));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad(format!("learning rate must be > 0, got {}", self.learning_rate));
        }
        if self.batch_size == 0 || self.epochs == 0 {
            return bad(format!("batch size and epochs must be >= 1, got {} and {}", self.batch_size, self.epochs));
        }
        if self.patience == Some(0) {
            return bad("patience must be >= 1 when set".into());
        }
        validate_adam(&self.adam)
    }
}

pub(crate) fn validate_adam(adam: &AdamConfig) -> Result<(), ModelError> {
    let ok = (0.0..1.0).contains(&adam.beta1) && (0.0..1.0).contains(&adam.beta2) && adam.epsilon > 0.0;
    if !ok {
        return Err(ModelError::InvalidConfig(format!("invalid Adam settings {adam:?}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpochLog {
    pub epoch: usize,
    /// Means over the epoch's batches.
    pub l1: f64,
    pub l2: f64,
    pub joint: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TrainingLog {
    pub epochs: Vec<EpochLog>,
    pub stopped_early: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainOutcome {
    pub params: ModelParams,
    pub log: TrainingLog,
}

/// Trains the two-head network (or a single-task variant, per
/// `config.heads`) with minibatch Adam. Batches follow a fresh shuffle of the
/// `SHUFFLE` stream each epoch; the run is a pure function of its inputs.
pub fn train(examples: &[Example], dims: Dims, config: &TrainConfig) -> Result<TrainOutcome, ModelError> {
    config.validate()?;
    check_examples(examples, dims, config.heads)?;
    let mut params = ModelParams::init(dims, config.heads, config.seed);
    let mut grads = params.zeros_like();
    let mut adam = Adam::new(&params, config.learning_rate, config.adam);
    let settings = LoopSettings { epochs: config.epochs, batch_size: config.batch_size, seed: config.seed, patience: config.patience };
    let log = run_minibatches(examples, &settings, |batch| {
        let parts = backward_into(&params, batch, config.lambda, &mut grads)?;
        adam.step(&mut params, &grads);
        clear_rows(&mut grads.encoder, batch);
        grads.encoder.bias.fill(0.0);
        for head in [grads.tag_head.as_mut(), grads.diff_head.as_mut()].into_iter().flatten() {
            head.weight.fill(0.0);
            head.bias.fill(0.0);
        }
        Ok(parts)
    })?;
    Ok(TrainOutcome { params, log })
}

pub(crate) fn check_examples(examples: &[Example], dims: Dims, heads: Heads) -> Result<(), ModelError> {
    if examples.is_empty() {
        return Err(ModelError::EmptyTrainingSet);
    }
    for ex in examples {
        if ex.features.dim != dims.input {
            return Err(ModelError::DimensionMismatch { what: "input features", expected: dims.input, got: ex.features.dim });
        }
        if heads.has_tag() && ex.tags.len() != dims.tags {
            return Err(ModelError::DimensionMismatch { what: "tag targets", expected: dims.tags, got: ex.tags.len() });
        }
        if let Some(level) = ex.level {
            if level >= dims.levels {
                return Err(ModelError::LevelOutOfRange { index: level, levels: dims.levels });
            }
        }
    }
    Ok(())
}

/// Zeroes the weight rows of `layer` touched by the batch's features.
pub(crate) fn clear_rows(layer: &mut Linear, batch: &[&Example]) {
    let rows: BTreeSet<usize> = batch.iter().flat_map(|ex| ex.features.entries.iter().map(|&(i, _)| i)).collect();
    for i in rows {
        layer.row_mut(i).fill(0.0);
    }
}

pub(crate) struct LoopSettings {
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
    pub patience: Option<usize>,
}

/// Shared epoch/batch driver: shuffles, slices batches, calls `step` and
/// records per-epoch means. Aborts on a non-finite loss.
pub(crate) fn run_minibatches<'a>(
    examples: &'a [Example],
    settings: &LoopSettings,
    mut step: impl FnMut(&[&'a Example]) -> Result<LossParts, ModelError>,
) -> Result<TrainingLog, ModelError> {
    let mut shuffle_rng = rng::stream(settings.seed, streams::SHUFFLE);
    let mut order: Vec<usize> = (0..examples.len()).collect();
    let mut log = TrainingLog::default();
    let mut best = f64::INFINITY;
    let mut stale = 0usize;
    for epoch in 0..settings.epochs {
        rng::shuffle(&mut shuffle_rng, &mut order);
        let (mut l1, mut l2, mut joint) = (0.0, 0.0, 0.0);
        let mut batches = 0usize;
        for (b, chunk) in order.chunks(settings.batch_size).enumerate() {
            let batch: Vec<&Example> = chunk.iter().map(|&i| &examples[i]).collect();
            let parts = step(&batch)?;
            if !parts.joint.is_finite() {
                return Err(ModelError::NonFiniteLoss { epoch, batch: b });
            }
            l1 += parts.l1;
            l2 += parts.l2;
            joint += parts.joint;
            batches += 1;
        }
        let n = batches as f64;
        let entry = EpochLog { epoch, l1: l1 / n, l2: l2 / n, joint: joint / n };
        log.epochs.push(entry);
        if let Some(patience) = settings.patience {
            if entry.joint < best {
                best = entry.joint;
                stale = 0;
            } else {
                stale += 1;
                if stale >= patience {
                    log.stopped_early = true;
                    break;
                }
            }
        }
    }
    Ok(log)
}
