//! Problem records, label spaces and dataset construction.

mod dataset;
mod record;
mod scale;
mod split;
mod vocab;

pub use dataset::{
    build_dataset, difficulty_histogram, restrict_top_k, tag_histogram, Dataset,
    DifficultyHistogram,
};
pub use record::ProblemRecord;
pub use scale::{difficulty_to_index, index_to_difficulty, DifficultyScale};
pub use split::{split, SplitAssignment, DEFAULT_SPLIT_SEED, DEFAULT_TEST_FRACTION};
pub use vocab::{canonical_tag, TagVocabulary, AMT_TAGS};

use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CorpusError {
    #[error("record has an empty id")]
    EmptyId,
    #[error("duplicate record id {0:?}")]
    DuplicateId(String),
    #[error("record {0:?} has an empty statement")]
    EmptyStatement(String),
    #[error("record {id:?}: contest_id must be >= 1, got {contest_id}")]
    InvalidContestId { id: String, contest_id: i64 },
    #[error("invalid rating {0}: expected a multiple of 100 in [800, 3500]")]
    InvalidRating(i64),
    #[error("invalid difficulty index {0}: expected 0..=27")]
    InvalidIndex(usize),
    #[error("tag vocabulary is empty")]
    EmptyVocabulary,
    #[error("duplicate tag {0:?} in vocabulary")]
    DuplicateTag(String),
    #[error("no record has a tag in the vocabulary")]
    EmptyDataset,
    #[error("top-k restriction needs 1 <= k <= {max}, got {k}")]
    InvalidTopK { k: usize, max: usize },
    #[error("test fraction must lie strictly between 0 and 1, got {0}")]
    InvalidTestFraction(f64),
    #[error("splitting needs at least 2 records, got {0}")]
    TooFewRecords(usize),
}
