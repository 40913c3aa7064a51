//! Core algorithms for predicting the algorithm tags and the difficulty level
//! of competitive-programming problems from their statement text.
//!
//! The crate is `no_std` (with `alloc`) and performs no IO. Everything here is
//! a pure function over in-memory values, so it is safe to share fitted
//! vectorizers, datasets and checkpoints across threads.
//!
//! * [`corpus`] holds the problem records, the tag vocabulary, the 28-level
//!   difficulty scale, dataset construction and train/test splitting.
//! * [`text`] turns statements into L2-normalized TF-IDF vectors.
//! * [`model`] is the shared-encoder, two-head network with its joint loss,
//!   analytic gradients, Adam training loop and a one-vs-rest linear baseline.
//! * [`metrics`] implements AUROC, F1-macro, accuracy, cumulative score and
//!   MAE, plus ROC curve points.
#![no_std]

extern crate alloc;

pub mod corpus;
pub mod metrics;
pub mod model;
pub mod rng;
pub mod text;

pub use corpus::{
    DifficultyScale, Dataset, DifficultyHistogram, ProblemRecord, SplitAssignment, TagVocabulary,
};
pub use metrics::{DifficultyEval, RocCurve, TagEval};
pub use model::{Checkpoint, ModelParams, TrainConfig};
pub use text::{DocumentVector, TokenizerConfig, Vectorizer};
