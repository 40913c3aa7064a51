//! Shared-encoder, two-head network for joint tag and difficulty prediction.
//!
//! A sparse TF-IDF vector `x` goes through one encoder layer
//! `z = relu(W_enc^T x + b_enc)`, then into a tag head (one logit per tag,
//! trained with binary cross-entropy) and a difficulty head (one logit per
//! level, trained with softmax cross-entropy). The training objective per
//! batch is `l1 + lambda * l2`, each term a batch mean.

mod adam;
mod baseline;
mod checkpoint;
mod extended;
mod gradcheck;
mod loss;
mod network;
mod params;
mod train;

pub use adam::{Adam, AdamConfig};
pub use baseline::{train_baseline, BaselineConfig, BaselineParams};
pub use checkpoint::{argmax, Checkpoint, DifficultyPrediction, Inference, Network, Prediction, TagScore};
pub use gradcheck::{grad_check, random_grad_check, random_instance, GradCheckReport};
pub use loss::{bce_loss, bce_loss_batch, ce_loss, ce_loss_batch, joint_loss, log_softmax, sigmoid, softmax};
pub use network::{backward, batch_loss, forward, Batch, Example, Forward, LossParts};
pub use params::{param_count, two_single_task_param_count, Dims, Heads, Linear, ModelParams, Parameters};
pub use train::{train, EpochLog, TrainConfig, TrainOutcome, TrainingLog};

use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    DimensionMismatch { what: &'static str, expected: usize, got: usize },
    #[error("tag targets must be 0 or 1, got {0}")]
    NonBinaryTarget(u8),
    #[error("difficulty index {index} out of range for {levels} levels")]
    LevelOutOfRange { index: usize, levels: usize },
    #[error("invalid training configuration: {0}")]
    InvalidConfig(String),
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("non-finite loss at epoch {epoch}, batch {batch}")]
    NonFiniteLoss { epoch: usize, batch: usize },
    #[error("parameter tensor {0} has the wrong length")]
    BadTensor(String),
}
