//! Statement text to sparse TF-IDF features.

mod tokenize;
mod vectorizer;

pub use tokenize::{tokenize, TokenizerConfig, DEFAULT_MAX_TOKENS};
pub use vectorizer::{fnv1a64, DocumentVector, FeatureMode, Vectorizer, DEFAULT_HASH_DIM, FNV_OFFSET_BASIS};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TextError {
    #[error("cannot fit a vectorizer on an empty corpus")]
    EmptyCorpus,
    #[error("hashed feature dimension must be a power of two, got {0}")]
    DimensionNotPowerOfTwo(usize),
    #[error("unknown hash function {0:?}")]
    UnknownHash(alloc::string::String),
    #[error("vectorizer state is inconsistent: {0}")]
    Inconsistent(&'static str),
}
