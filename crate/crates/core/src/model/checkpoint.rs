use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::baseline::{BaselineConfig, BaselineParams};
use super::loss::{sigmoid, softmax};
use super::network::forward;
use super::params::ModelParams;
use super::train::{TrainConfig, TrainingLog};
use super::ModelError;
use crate::corpus::{DifficultyScale, TagVocabulary};
use crate::text::{DocumentVector, Vectorizer};

#[derive(Debug, Clone, PartialEq)]
pub enum Network {
    TwoHead { params: ModelParams, config: TrainConfig },
    Baseline { params: BaselineParams, config: BaselineConfig },
}

/// Everything needed to score new statements.
#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub network: Network,
    pub vectorizer: Vectorizer,
    pub vocab: TagVocabulary,
    pub scale: DifficultyScale,
    pub log: TrainingLog,
}

/// Raw model outputs for one input. A missing head yields `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct Inference {
    pub tag_probs: Option<Vec<f64>>,
    pub diff_logits: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TagScore {
    pub name: String,
    pub prob: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DifficultyPrediction {
    pub rating: i64,
    pub prob_dist: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub tags: Vec<TagScore>,
    pub difficulty: Option<DifficultyPrediction>,
}

/// Index of the largest value; ties go to the lowest index.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

fn round6(p: f64) -> f64 {
    libm::round(p * 1e6) / 1e6
}

impl Checkpoint {
    pub fn has_tag_head(&self) -> bool {
        match &self.network {
            Network::TwoHead { params, .. } => params.tag_head.is_some(),
            Network::Baseline { .. } => true,
        }
    }

    pub fn has_difficulty_head(&self) -> bool {
        match &self.network {
            Network::TwoHead { params, .. } => params.diff_head.is_some(),
            Network::Baseline { .. } => true,
        }
    }

    pub fn infer(&self, x: &DocumentVector) -> Result<Inference, ModelError> {
        match &self.network {
            Network::TwoHead { params, .. } => {
                let f = forward(params, x)?;
                Ok(Inference {
                    tag_probs: f.tag_logits.map(|a| a.into_iter().map(sigmoid).collect()),
                    diff_logits: f.diff_logits,
                })
            }
            Network::Baseline { params, .. } => {
                if x.dim != params.tag.inputs {
                    return Err(ModelError::DimensionMismatch { what: "input features", expected: params.tag.inputs, got: x.dim });
                }
                Ok(Inference {
                    tag_probs: Some(params.tag_logits(x).into_iter().map(sigmoid).collect()),
                    diff_logits: Some(params.diff_logits(x)),
                })
            }
        }
    }

    /// Tags with probability `>= threshold` and the argmax difficulty.
    /// Reported probabilities are rounded to 6 decimals.
    pub fn predict(&self, statement: &str, threshold: f64) -> Result<Prediction, ModelError> {
        let x = self.vectorizer.transform(statement);
        let out = self.infer(&x)?;
        let tags = out
            .tag_probs
            .map(|probs| {
                self.vocab
                    .labels()
                    .iter()
                    .zip(probs)
                    .filter(|(_, p)| *p >= threshold)
                    .map(|(name, p)| TagScore { name: name.clone(), prob: round6(p) })
                    .collect()
            })
            .unwrap_or_default();
        let difficulty = match out.diff_logits {
            Some(logits) => {
                let rating = self.scale.rating_of(argmax(&logits)).map_err(|_| ModelError::LevelOutOfRange {
                    index: argmax(&logits),
                    levels: self.scale.levels(),
                })?;
                Some(DifficultyPrediction { rating, prob_dist: softmax(&logits).into_iter().map(round6).collect() })
            }
            None => None,
        };
        Ok(Prediction { tags, difficulty })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Dims, Heads};
    use crate::text::{FeatureMode, TokenizerConfig};
    use alloc::vec;

    fn zero_checkpoint() -> Checkpoint {
        let vectorizer = Vectorizer::fit(&[vec!["given", "n"]], FeatureMode::Hashed { dim: 64 }, TokenizerConfig::default()).unwrap();
        let dims = Dims { input: 64, hidden: 4, tags: 20, levels: 28 };
        Checkpoint {
            network: Network::TwoHead { params: ModelParams::zeros(dims, Heads::Both), config: TrainConfig::default() },
            vectorizer,
            vocab: TagVocabulary::amt(),
            scale: DifficultyScale::AMT,
            log: TrainingLog::default(),
        }
    }

    #[test]
    fn zero_params_tie_breaks() {
        let p = zero_checkpoint().predict("Given n integers", 0.5).unwrap();
        assert_eq!(p.tags.len(), 20);
        assert!(p.tags.iter().all(|t| t.prob == 0.5));
        let d = p.difficulty.unwrap();
        assert_eq!(d.rating, 800);
        assert_eq!(d.prob_dist.len(), 28);
    }

    #[test]
    fn threshold_above_one_empties_tags() {
        let p = zero_checkpoint().predict("Given n integers", 1.0 + 1e-9).unwrap();
        assert!(p.tags.is_empty());
    }

    #[test]
    fn argmax_shift_invariant_and_lowest_tie() {
        let logits = [0.1, 0.7, 0.7, -2.0];
        assert_eq!(argmax(&logits), 1);
        let shifted: Vec<f64> = logits.iter().map(|v| v + 1000.0).collect();
        assert_eq!(argmax(&shifted), 1);
    }
}
