use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use super::record::validate_all;
use super::{CorpusError, DifficultyScale, ProblemRecord, TagVocabulary};

/// Records that carry at least one in-vocabulary tag, with their label
/// vectors and difficulty indices aligned to `records`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    records: Vec<ProblemRecord>,
    vocab: TagVocabulary,
    scale: DifficultyScale,
    labels: Vec<Vec<u8>>,
    levels: Vec<Option<usize>>,
    dropped: usize,
}

impl Dataset {
    pub fn records(&self) -> &[ProblemRecord] {
        &self.records
    }

    pub fn vocab(&self) -> &TagVocabulary {
        &self.vocab
    }

    pub fn scale(&self) -> DifficultyScale {
        self.scale
    }

    /// Binary label vectors in vocabulary order.
    pub fn labels(&self) -> &[Vec<u8>] {
        &self.labels
    }

    /// Difficulty class per record, `None` when the rating is missing.
    pub fn levels(&self) -> &[Option<usize>] {
        &self.levels
    }

    /// Number of input records dropped for lack of an in-vocabulary tag.
    pub fn dropped(&self) -> usize {
        self.dropped
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.records.iter().map(|r| r.id.as_str())
    }

    /// Records whose id is in `ids`, in dataset order. May be empty.
    pub fn select(&self, ids: &BTreeSet<String>) -> Dataset {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| ids.contains(&self.records[i].id)).collect();
        Dataset {
            records: keep.iter().map(|&i| self.records[i].clone()).collect(),
            vocab: self.vocab.clone(),
            scale: self.scale,
            labels: keep.iter().map(|&i| self.labels[i].clone()).collect(),
            levels: keep.iter().map(|&i| self.levels[i]).collect(),
            dropped: 0,
        }
    }
}

/// Builds a dataset: validates the records, drops those whose tags miss the
/// vocabulary entirely and encodes the rest. Out-of-vocabulary tags are
/// ignored; records without a rating are kept with a missing difficulty.
pub fn build_dataset(mut records: Vec<ProblemRecord>, vocab: &TagVocabulary) -> Result<Dataset, CorpusError> {
    if vocab.is_empty() {
        return Err(CorpusError::EmptyVocabulary);
    }
    validate_all(&mut records)?;
    let scale = DifficultyScale::AMT;
    let total = records.len();
    let mut kept = Vec::with_capacity(total);
    let mut labels = Vec::with_capacity(total);
    let mut levels = Vec::with_capacity(total);
    for record in records {
        let mut y = alloc::vec![0u8; vocab.len()];
        for tag in &record.tags {
            if let Some(k) = vocab.position(tag) {
                y[k] = 1;
            }
        }
        if y.iter().all(|&v| v == 0) {
            continue;
        }
        levels.push(match record.rating {
            Some(r) => Some(scale.index_of(r)?),
            None => None,
        });
        labels.push(y);
        kept.push(record);
    }
    if kept.is_empty() {
        return Err(CorpusError::EmptyDataset);
    }
    Ok(Dataset { dropped: total - kept.len(), records: kept, vocab: vocab.clone(), scale, labels, levels })
}

/// Number of records carrying each vocabulary tag, in vocabulary order.
pub fn tag_histogram(dataset: &Dataset) -> Vec<(String, usize)> {
    let mut counts = alloc::vec![0usize; dataset.vocab.len()];
    for y in &dataset.labels {
        for (count, &bit) in counts.iter_mut().zip(y) {
            *count += bit as usize;
        }
    }
    dataset.vocab.labels().iter().cloned().zip(counts).collect()
}

/// Rating counts over records that have a rating, plus the missing count.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DifficultyHistogram {
    pub counts: BTreeMap<i64, usize>,
    pub missing: usize,
}

impl DifficultyHistogram {
    pub fn rated(&self) -> usize {
        self.counts.values().sum()
    }
}

pub fn difficulty_histogram(dataset: &Dataset) -> DifficultyHistogram {
    let mut hist = DifficultyHistogram::default();
    for record in &dataset.records {
        match record.rating {
            Some(r) => *hist.counts.entry(r).or_insert(0) += 1,
            None => hist.missing += 1,
        }
    }
    hist
}

/// Keeps the `k` most frequent tags (ties broken alphabetically) and rebuilds
/// the dataset over them. Surviving tags keep their original vocabulary order.
pub fn restrict_top_k(dataset: &Dataset, k: usize) -> Result<Dataset, CorpusError> {
    let max = dataset.vocab.len();
    if k == 0 || k > max {
        return Err(CorpusError::InvalidTopK { k, max });
    }
    let mut ranked: Vec<(usize, String, usize)> = tag_histogram(dataset)
        .into_iter()
        .enumerate()
        .map(|(pos, (tag, count))| (pos, tag, count))
        .collect();
    ranked.sort_by(|a, b| b.2.cmp(&a.2).then_with(|| a.1.cmp(&b.1)));
    let mut chosen: Vec<(usize, String)> = ranked.into_iter().take(k).map(|(pos, tag, _)| (pos, tag)).collect();
    chosen.sort_by_key(|(pos, _)| *pos);
    let vocab = TagVocabulary::new(chosen.into_iter().map(|(_, tag)| tag))?;
    let mut rebuilt = build_dataset(dataset.records.clone(), &vocab)?;
    rebuilt.dropped += dataset.dropped;
    Ok(rebuilt)
}
