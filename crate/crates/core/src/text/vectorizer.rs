use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{tokenize, TextError, TokenizerConfig};

pub const DEFAULT_HASH_DIM: usize = 1 << 15;
pub const FNV_OFFSET_BASIS: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;
const HASH_NAME: &str = "fnv1a-64";

/// 64-bit FNV-1a over the UTF-8 bytes of `token`.
pub fn fnv1a64(token: &str) -> u64 {
    token.bytes().fold(FNV_OFFSET_BASIS, |h, b| (h ^ b as u64).wrapping_mul(FNV_PRIME))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureMode {
    /// Tokens hashed into `dim` buckets (`dim` a power of two).
    Hashed { dim: usize },
    /// One feature per distinct training token, ordered lexicographically.
    Vocabulary,
}

/// Sparse vector with strictly increasing indices.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DocumentVector {
    pub dim: usize,
    pub entries: Vec<(usize, f64)>,
}

impl DocumentVector {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: Vec::new() }
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.entries.iter().map(|(_, v)| v * v).sum::<f64>())
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut dense = alloc::vec![0.0; self.dim];
        for &(i, v) in &self.entries {
            dense[i] = v;
        }
        dense
    }
}

#[derive(Debug, Clone, PartialEq)]
enum FeatureSpace {
    Hashed { dim: usize },
    Vocabulary { terms: BTreeMap<String, usize> },
}

/// Fitted TF-IDF transform with smoothed idf `ln((1 + n) / (1 + df)) + 1`
/// and L2-normalized output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "VectorizerRepr", try_from = "VectorizerRepr")]
pub struct Vectorizer {
    tokenizer: TokenizerConfig,
    space: FeatureSpace,
    n_docs: usize,
    df: Vec<u64>,
    idf: Vec<f64>,
}

impl Vectorizer {
    pub fn fit<S: AsRef<str>>(
        corpus: &[Vec<S>],
        mode: FeatureMode,
        tokenizer: TokenizerConfig,
    ) -> Result<Self, TextError> {
        if corpus.is_empty() {
            return Err(TextError::EmptyCorpus);
        }
        let space = match mode {
            FeatureMode::Hashed { dim } => {
                if dim == 0 || !dim.is_power_of_two() {
                    return Err(TextError::DimensionNotPowerOfTwo(dim));
                }
                FeatureSpace::Hashed { dim }
            }
            FeatureMode::Vocabulary => {
                let distinct: BTreeSet<&str> = corpus.iter().flatten().map(AsRef::as_ref).collect();
                FeatureSpace::Vocabulary {
                    terms: distinct.into_iter().enumerate().map(|(i, t)| (t.to_string(), i)).collect(),
                }
            }
        };
        let mut vectorizer = Self { tokenizer, space, n_docs: corpus.len(), df: Vec::new(), idf: Vec::new() };
        let mut df = alloc::vec![0u64; vectorizer.dim()];
        for doc in corpus {
            let features: BTreeSet<usize> = doc.iter().filter_map(|t| vectorizer.feature(t.as_ref())).collect();
            for f in features {
                df[f] += 1;
            }
        }
        vectorizer.df = df;
        vectorizer.idf = idf_weights(vectorizer.n_docs, &vectorizer.df);
        Ok(vectorizer)
    }

    pub fn dim(&self) -> usize {
        match &self.space {
            FeatureSpace::Hashed { dim } => *dim,
            FeatureSpace::Vocabulary { terms } => terms.len(),
        }
    }

    pub fn mode(&self) -> FeatureMode {
        match &self.space {
            FeatureSpace::Hashed { dim } => FeatureMode::Hashed { dim: *dim },
            FeatureSpace::Vocabulary { .. } => FeatureMode::Vocabulary,
        }
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn tokenizer(&self) -> &TokenizerConfig {
        &self.tokenizer
    }

    pub fn document_frequencies(&self) -> &[u64] {
        &self.df
    }

    pub fn idf(&self) -> &[f64] {
        &self.idf
    }

    /// Feature index of a token; `None` for unseen tokens in vocabulary mode.
    pub fn feature(&self, token: &str) -> Option<usize> {
        match &self.space {
            FeatureSpace::Hashed { dim } => Some((fnv1a64(token) & (*dim as u64 - 1)) as usize),
            FeatureSpace::Vocabulary { terms } => terms.get(token).copied(),
        }
    }

    /// Raw term counts times idf, then L2-normalized. Empty input (or input
    /// made only of unseen tokens) gives the zero vector.
    pub fn vectorize<S: AsRef<str>>(&self, tokens: &[S]) -> DocumentVector {
        let mut tf: BTreeMap<usize, u64> = BTreeMap::new();
        for token in tokens {
            if let Some(f) = self.feature(token.as_ref()) {
                *tf.entry(f).or_insert(0) += 1;
            }
        }
        let mut entries: Vec<(usize, f64)> = tf.into_iter().map(|(f, c)| (f, c as f64 * self.idf[f])).collect();
        let norm = libm::sqrt(entries.iter().map(|(_, v)| v * v).sum::<f64>());
        if norm > 0.0 {
            for (_, v) in &mut entries {
                *v /= norm;
            }
        }
        DocumentVector { dim: self.dim(), entries }
    }

    /// Tokenizes with the stored tokenizer config, then vectorizes.
    pub fn transform(&self, text: &str) -> DocumentVector {
        self.vectorize(&tokenize(text, &self.tokenizer))
    }
}

fn idf_weights(n_docs: usize, df: &[u64]) -> Vec<f64> {
    let n = n_docs as f64;
    df.iter().map(|&d| libm::log((1.0 + n) / (1.0 + d as f64)) + 1.0).collect()
}

#[derive(Serialize, Deserialize)]
struct VectorizerRepr {
    mode: String,
    dim: usize,
    n_docs: usize,
    tokenizer: TokenizerConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    hash: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    hash_seed: Option<u64>,
    /// Hashed mode: sparse `[bucket, df]` pairs for non-zero buckets.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    df: Vec<(usize, u64)>,
    /// Vocabulary mode: `[term, df]` in feature order.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    terms: Vec<(String, u64)>,
}

impl From<Vectorizer> for VectorizerRepr {
    fn from(v: Vectorizer) -> Self {
        let dim = v.dim();
        match v.space {
            FeatureSpace::Hashed { .. } => VectorizerRepr {
                mode: "hashed".to_string(),
                dim,
                n_docs: v.n_docs,
                tokenizer: v.tokenizer,
                hash: Some(HASH_NAME.to_string()),
                hash_seed: Some(FNV_OFFSET_BASIS),
                df: v.df.iter().enumerate().filter(|(_, &d)| d > 0).map(|(i, &d)| (i, d)).collect(),
                terms: Vec::new(),
            },
            FeatureSpace::Vocabulary { terms } => {
                let mut ordered: Vec<(String, usize)> = terms.into_iter().collect();
                ordered.sort_by_key(|(_, i)| *i);
                VectorizerRepr {
                    mode: "vocabulary".to_string(),
                    dim,
                    n_docs: v.n_docs,
                    tokenizer: v.tokenizer,
                    hash: None,
                    hash_seed: None,
                    df: Vec::new(),
                    terms: ordered.into_iter().map(|(t, i)| (t, v.df[i])).collect(),
                }
            }
        }
    }
}

impl TryFrom<VectorizerRepr> for Vectorizer {
    type Error = TextError;

    fn try_from(repr: VectorizerRepr) -> Result<Self, Self::Error> {
        let (space, df) = match repr.mode.as_str() {
            "hashed" => {
                let hash = repr.hash.unwrap_or_default();
                if hash != HASH_NAME || repr.hash_seed != Some(FNV_OFFSET_BASIS) {
                    return Err(TextError::UnknownHash(hash));
                }
                if repr.dim == 0 || !repr.dim.is_power_of_two() {
                    return Err(TextError::DimensionNotPowerOfTwo(repr.dim));
                }
                let mut df = alloc::vec![0u64; repr.dim];
                for (i, d) in repr.df {
                    *df.get_mut(i).ok_or(TextError::Inconsistent("df bucket out of range"))? = d;
                }
                (FeatureSpace::Hashed { dim: repr.dim }, df)
            }
            "vocabulary" => {
                if repr.terms.len() != repr.dim {
                    return Err(TextError::Inconsistent("term count differs from dim"));
                }
                let df = repr.terms.iter().map(|(_, d)| *d).collect();
                let terms: BTreeMap<String, usize> =
                    repr.terms.into_iter().enumerate().map(|(i, (t, _))| (t, i)).collect();
                if terms.len() != repr.dim {
                    return Err(TextError::Inconsistent("duplicate terms"));
                }
                (FeatureSpace::Vocabulary { terms }, df)
            }
            _ => return Err(TextError::Inconsistent("unknown mode")),
        };
        if df.iter().any(|&d| d as usize > repr.n_docs) {
            return Err(TextError::Inconsistent("df exceeds document count"));
        }
        let idf = idf_weights(repr.n_docs, &df);
        Ok(Vectorizer { tokenizer: repr.tokenizer, space, n_docs: repr.n_docs, df, idf })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn corpus() -> Vec<Vec<&'static str>> {
        vec![vec!["a", "b"], vec!["a"]]
    }

    #[test]
    fn idf_values() {
        let v = Vectorizer::fit(&corpus(), FeatureMode::Vocabulary, TokenizerConfig::default()).unwrap();
        assert_eq!(v.document_frequencies(), &[2, 1]);
        assert_eq!(v.idf()[0], 1.0);
        // ln(3/2) + 1
        assert!((v.idf()[1] - 1.405_465_108_108_164_4).abs() < 1e-12);
    }

    #[test]
    fn vectorize_example() {
        let v = Vectorizer::fit(&corpus(), FeatureMode::Vocabulary, TokenizerConfig::default()).unwrap();
        let x = v.vectorize(&["a", "a", "b"]);
        // Oracle: (2, ln 1.5 + 1) / ||.||
        let b = libm::log(1.5) + 1.0;
        let n = libm::sqrt(4.0 + b * b);
        assert!((x.entries[0].1 - 2.0 / n).abs() < 1e-15);
        assert!((x.entries[1].1 - b / n).abs() < 1e-15);
        assert!((x.entries[0].1 - 0.818_2).abs() < 1e-4);
        assert!((x.entries[1].1 - 0.575_0).abs() < 1e-4);
        assert!((x.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_and_unseen() {
        let v = Vectorizer::fit(&corpus(), FeatureMode::Vocabulary, TokenizerConfig::default()).unwrap();
        assert!(v.vectorize::<&str>(&[]).entries.is_empty());
        assert!(v.vectorize(&["zzz"]).entries.is_empty());
    }

    #[test]
    fn uniform_when_idf_is_one() {
        let docs = vec![vec!["x", "y", "z"]];
        let v = Vectorizer::fit(&docs, FeatureMode::Vocabulary, TokenizerConfig::default()).unwrap();
        let x = v.vectorize(&["x", "y", "z"]);
        for (_, val) in &x.entries {
            assert!((val - 1.0 / libm::sqrt(3.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn fit_errors() {
        let empty: Vec<Vec<&str>> = vec![];
        assert_eq!(Vectorizer::fit(&empty, FeatureMode::Vocabulary, TokenizerConfig::default()), Err(TextError::EmptyCorpus));
        assert_eq!(
            Vectorizer::fit(&corpus(), FeatureMode::Hashed { dim: 1000 }, TokenizerConfig::default()),
            Err(TextError::DimensionNotPowerOfTwo(1000))
        );
    }

    #[test]
    fn hashed_indices_in_range() {
        let v = Vectorizer::fit(&corpus(), FeatureMode::Hashed { dim: 16 }, TokenizerConfig::default()).unwrap();
        assert_eq!(v.document_frequencies().iter().sum::<u64>(), 3);
        let x = v.transform("a b c d e f g h");
        assert!(x.entries.iter().all(|&(i, _)| i < 16));
        assert!(x.entries.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn fnv_reference_values() {
        assert_eq!(fnv1a64(""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(fnv1a64("a"), 0xaf63_dc4c_8601_ec8c);
        assert_eq!(fnv1a64("foobar"), 0x8594_4171_f739_67e8);
    }
}
