//! Train and evaluate runs over a dataset file and a split.

use std::collections::BTreeSet;
use std::path::Path;

use psg_core::corpus::{build_dataset, restrict_top_k, Dataset, SplitAssignment, TagVocabulary};
use psg_core::metrics::{evaluate_difficulty, evaluate_tags, DifficultyEval, TagEval};
use psg_core::model::{
    argmax, param_count, train, train_baseline, two_single_task_param_count, BaselineConfig, Checkpoint, Dims,
    Example, Heads, Network, Parameters, TrainConfig,
};
use psg_core::text::{tokenize, FeatureMode, TokenizerConfig, Vectorizer};

use crate::error::{PsgError, Result};
use crate::io;
use crate::report::{DatasetInfo, ExperimentReport, ParamCounts, SplitInfo};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    MultiTask,
    SingleTag,
    SingleDifficulty,
    Baseline,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::MultiTask => "multi-task",
            ModelKind::SingleTag => "single-task-tag",
            ModelKind::SingleDifficulty => "single-task-difficulty",
            ModelKind::Baseline => "baseline",
        }
    }

    fn heads(self) -> Heads {
        match self {
            ModelKind::SingleTag => Heads::TagOnly,
            ModelKind::SingleDifficulty => Heads::DifficultyOnly,
            _ => Heads::Both,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub kind: ModelKind,
    /// `heads` is overridden by `kind`.
    pub train: TrainConfig,
    pub baseline: BaselineConfig,
    pub hidden: usize,
    pub features: FeatureMode,
    pub tokenizer: TokenizerConfig,
    pub thetas: Vec<usize>,
    pub threshold: f64,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            kind: ModelKind::MultiTask,
            train: TrainConfig::default(),
            baseline: BaselineConfig::default(),
            hidden: 256,
            features: FeatureMode::Hashed { dim: psg_core::text::DEFAULT_HASH_DIM },
            tokenizer: TokenizerConfig::default(),
            thetas: vec![3, 5],
            threshold: 0.5,
        }
    }
}

/// A dataset file loaded against a vocabulary, with its content hash.
#[derive(Debug, Clone)]
pub struct LoadedData {
    pub dataset: Dataset,
    pub fingerprint: String,
}

pub fn load_data(path: &Path, vocab: &TagVocabulary, top_k: Option<usize>) -> Result<LoadedData> {
    let records = io::load_jsonl(path)?;
    let mut dataset = build_dataset(records, vocab)?;
    if let Some(k) = top_k {
        dataset = restrict_top_k(&dataset, k)?;
    }
    Ok(LoadedData { dataset, fingerprint: io::fingerprint(path)? })
}

/// Train and test subsets. Split ids absent from the dataset (for example
/// records dropped by a top-k restriction) are ignored, but at least one
/// record must land on each side.
pub fn apply_split(dataset: &Dataset, split: &SplitAssignment) -> Result<(Dataset, Dataset)> {
    let present: BTreeSet<&str> = dataset.ids().collect();
    let unknown = split.train_ids.iter().chain(&split.test_ids).filter(|id| !present.contains(id.as_str())).count();
    let covered = split.train_ids.len() + split.test_ids.len() - unknown;
    if covered != dataset.len() {
        return Err(PsgError::Data(format!(
            "split covers {covered} of {} dataset records; regenerate it for this dataset",
            dataset.len()
        )));
    }
    let train = dataset.select(&split.train_ids);
    let test = dataset.select(&split.test_ids);
    if train.is_empty() || test.is_empty() {
        return Err(PsgError::Data("split leaves the train or test side empty".into()));
    }
    Ok((train, test))
}

pub fn tokenize_all(dataset: &Dataset, tokenizer: &TokenizerConfig) -> Vec<Vec<String>> {
    dataset.records().iter().map(|r| tokenize(&r.statement, tokenizer)).collect()
}

pub fn examples(dataset: &Dataset, vectorizer: &Vectorizer) -> Vec<Example> {
    dataset
        .records()
        .iter()
        .zip(dataset.labels())
        .zip(dataset.levels())
        .map(|((r, tags), level)| Example { features: vectorizer.transform(&r.statement), tags: tags.clone(), level: *level })
        .collect()
}

/// Fits the vectorizer on the training statements and trains the model.
pub fn fit(train_set: &Dataset, spec: &ExperimentSpec) -> Result<Checkpoint> {
    let vectorizer = Vectorizer::fit(&tokenize_all(train_set, &spec.tokenizer), spec.features, spec.tokenizer)?;
    let data = examples(train_set, &vectorizer);
    let (tags, levels) = (train_set.vocab().len(), train_set.scale().levels());
    let (network, log) = match spec.kind {
        ModelKind::Baseline => {
            let (params, log) = train_baseline(&data, vectorizer.dim(), tags, levels, &spec.baseline)?;
            (Network::Baseline { params, config: spec.baseline.clone() }, log)
        }
        kind => {
            let config = TrainConfig { heads: kind.heads(), ..spec.train.clone() };
            let dims = Dims { input: vectorizer.dim(), hidden: spec.hidden, tags, levels };
            let outcome = train(&data, dims, &config)?;
            (Network::TwoHead { params: outcome.params, config }, outcome.log)
        }
    };
    Ok(Checkpoint { network, vectorizer, vocab: train_set.vocab().clone(), scale: train_set.scale(), log })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub tag: Option<TagEval>,
    pub difficulty: Option<DifficultyEval>,
    /// Tag probabilities per test record, when the model has a tag head.
    pub tag_probs: Option<Vec<Vec<f64>>>,
}

pub fn check_compatible(checkpoint: &Checkpoint, dataset: &Dataset) -> Result<()> {
    if checkpoint.vocab != *dataset.vocab() {
        return Err(PsgError::Data(format!(
            "tag vocabulary mismatch: checkpoint has K={} {:?}, dataset has K={} {:?}",
            checkpoint.vocab.len(),
            checkpoint.vocab.labels(),
            dataset.vocab().len(),
            dataset.vocab().labels()
        )));
    }
    if checkpoint.scale != dataset.scale() {
        return Err(PsgError::Data("difficulty scale mismatch between checkpoint and dataset".into()));
    }
    Ok(())
}

/// Tag metrics on every test record and difficulty metrics on the rated
/// ones, for whichever heads the model has.
pub fn evaluate(checkpoint: &Checkpoint, test: &Dataset, thetas: &[usize], threshold: f64) -> Result<Evaluation> {
    check_compatible(checkpoint, test)?;
    let mut probs = Vec::new();
    let mut pred_levels = Vec::new();
    let mut true_levels = Vec::new();
    for (record, level) in test.records().iter().zip(test.levels()) {
        let out = checkpoint.infer(&checkpoint.vectorizer.transform(&record.statement))?;
        if let Some(p) = out.tag_probs {
            probs.push(p);
        }
        if let (Some(logits), Some(level)) = (out.diff_logits, level) {
            pred_levels.push(argmax(&logits));
            true_levels.push(*level);
        }
    }
    let tag = if checkpoint.has_tag_head() {
        Some(evaluate_tags(checkpoint.vocab.labels(), &probs, test.labels(), threshold)?)
    } else {
        None
    };
    let difficulty = if checkpoint.has_difficulty_head() && !true_levels.is_empty() {
        Some(evaluate_difficulty(&pred_levels, &true_levels, thetas)?)
    } else {
        None
    };
    Ok(Evaluation { tag, difficulty, tag_probs: checkpoint.has_tag_head().then_some(probs) })
}

pub fn param_counts(checkpoint: &Checkpoint) -> ParamCounts {
    let (model, dims) = match &checkpoint.network {
        Network::TwoHead { params, .. } => (params.num_params() as u64, params.dims()),
        Network::Baseline { params, .. } => {
            (params.num_params() as u64, Dims { input: params.tag.inputs, hidden: 0, tags: params.tag.outputs, levels: params.diff.outputs })
        }
    };
    let multi = param_count(dims, Heads::Both);
    let two = two_single_task_param_count(dims);
    ParamCounts { model, multi_task: multi, two_single_task: two, ratio: two as f64 / multi as f64 }
}

pub fn model_name(checkpoint: &Checkpoint) -> &'static str {
    match &checkpoint.network {
        Network::Baseline { .. } => ModelKind::Baseline.name(),
        Network::TwoHead { params, .. } => match params.heads() {
            Heads::Both => ModelKind::MultiTask.name(),
            Heads::TagOnly => ModelKind::SingleTag.name(),
            Heads::DifficultyOnly => ModelKind::SingleDifficulty.name(),
        },
    }
}

pub fn build_report(
    checkpoint: &Checkpoint,
    data: &LoadedData,
    split: &SplitAssignment,
    test: &Dataset,
    eval: &Evaluation,
) -> ExperimentReport {
    let (train_config, baseline_config, lambda) = match &checkpoint.network {
        Network::TwoHead { config, params } => {
            let lambda = (params.heads() == Heads::Both).then_some(config.lambda);
            (Some(config.clone()), None, lambda)
        }
        Network::Baseline { config, .. } => (None, Some(config.clone()), None),
    };
    ExperimentReport {
        model: model_name(checkpoint).to_string(),
        lambda,
        dataset: DatasetInfo {
            fingerprint: data.fingerprint.clone(),
            records: data.dataset.len(),
            dropped: data.dataset.dropped(),
        },
        split: SplitInfo {
            seed: split.seed,
            test_fraction: split.test_fraction,
            train: data.dataset.len() - test.len(),
            test: test.len(),
        },
        train_config,
        baseline_config,
        vocab: checkpoint.vocab.labels().to_vec(),
        tag_eval: eval.tag.clone(),
        difficulty_eval: eval.difficulty.clone(),
        param_counts: param_counts(checkpoint),
        training_log: checkpoint.log.clone(),
    }
}

/// Train on the split's training side, evaluate on its test side.
pub fn run(data: &LoadedData, split: &SplitAssignment, spec: &ExperimentSpec) -> Result<(Checkpoint, ExperimentReport)> {
    let (train_set, test_set) = apply_split(&data.dataset, split)?;
    let checkpoint = fit(&train_set, spec)?;
    let eval = evaluate(&checkpoint, &test_set, &spec.thetas, spec.threshold)?;
    let report = build_report(&checkpoint, data, split, &test_set, &eval);
    Ok((checkpoint, report))
}
