//! Checkpoint directories: `params.json` (manifest), `params.bin` (all
//! tensors as little-endian f64 in manifest order) and `vectorizer.json`.

use std::path::Path;

use psg_core::corpus::{DifficultyScale, TagVocabulary};
use psg_core::model::{BaselineConfig, BaselineParams, Checkpoint, Dims, Heads, ModelParams, Network, Parameters, TrainConfig};
use psg_core::model::TrainingLog;
use psg_core::Vectorizer;
use serde::{Deserialize, Serialize};

use crate::error::{PsgError, Result};
use crate::io;

pub const MANIFEST: &str = "params.json";
pub const TENSORS: &str = "params.bin";
pub const VECTORIZER: &str = "vectorizer.json";
const FORMAT: &str = "psg-checkpoint";
const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorSpec {
    pub name: String,
    pub shape: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub format: String,
    pub version: u32,
    /// `two-head` or `baseline`.
    pub kind: String,
    pub dims: Dims,
    pub heads: Heads,
    pub dtype: String,
    pub tensors: Vec<TensorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub train_config: Option<TrainConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub baseline_config: Option<BaselineConfig>,
    pub vocab: TagVocabulary,
    pub scale: DifficultyScale,
    pub vectorizer: String,
    pub training_log: TrainingLog,
}

type Named<'a> = Vec<(&'static str, [usize; 2], &'a [f64])>;

fn network_layout(network: &Network) -> (String, Dims, Heads, Named<'_>) {
    match network {
        Network::TwoHead { params, .. } => ("two-head".into(), params.dims(), params.heads(), params.named_tensors()),
        Network::Baseline { params, .. } => {
            let dims = Dims { input: params.tag.inputs, hidden: 0, tags: params.tag.outputs, levels: params.diff.outputs };
            ("baseline".into(), dims, Heads::Both, params.named_tensors())
        }
    }
}

pub fn save(checkpoint: &Checkpoint, dir: &Path) -> Result<()> {
    let (kind, dims, heads, named) = network_layout(&checkpoint.network);
    let (train_config, baseline_config) = match &checkpoint.network {
        Network::TwoHead { config, .. } => (Some(config.clone()), None),
        Network::Baseline { config, .. } => (None, Some(config.clone())),
    };
    let manifest = Manifest {
        format: FORMAT.into(),
        version: VERSION,
        kind,
        dims,
        heads,
        dtype: "f64-le".into(),
        tensors: named.iter().map(|(name, shape, _)| TensorSpec { name: name.to_string(), shape: *shape }).collect(),
        train_config,
        baseline_config,
        vocab: checkpoint.vocab.clone(),
        scale: checkpoint.scale,
        vectorizer: VECTORIZER.into(),
        training_log: checkpoint.log.clone(),
    };
    let mut bytes = Vec::with_capacity(named.iter().map(|(_, _, t)| t.len() * 8).sum());
    for (_, _, tensor) in &named {
        for v in tensor.iter() {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
    }
    io::write_json(&dir.join(MANIFEST), &manifest)?;
    io::write_file(&dir.join(TENSORS), &bytes)?;
    io::write_json(&dir.join(VECTORIZER), &checkpoint.vectorizer)
}

pub fn load(dir: &Path) -> Result<Checkpoint> {
    let manifest_path = dir.join(MANIFEST);
    let bad = |msg: String| PsgError::Data(format!("{}: {msg}", manifest_path.display()));
    let manifest: Manifest = serde_json::from_str(&io::read_to_string(&manifest_path)?).map_err(|e| bad(e.to_string()))?;
    if manifest.format != FORMAT || manifest.version != VERSION || manifest.dtype != "f64-le" {
        return Err(bad(format!("unsupported format {} v{} ({})", manifest.format, manifest.version, manifest.dtype)));
    }
    let dims = manifest.dims;
    let mut network = match (manifest.kind.as_str(), &manifest.train_config, &manifest.baseline_config) {
        ("two-head", Some(config), None) => {
            Network::TwoHead { params: ModelParams::zeros(dims, manifest.heads), config: config.clone() }
        }
        ("baseline", None, Some(config)) => Network::Baseline {
            params: BaselineParams::zeros(dims.input, dims.tags, dims.levels),
            config: config.clone(),
        },
        (kind, _, _) => return Err(bad(format!("kind {kind:?} does not match its config"))),
    };
    let (_, _, _, named) = network_layout(&network);
    let expected: Vec<TensorSpec> =
        named.iter().map(|(name, shape, _)| TensorSpec { name: name.to_string(), shape: *shape }).collect();
    if expected != manifest.tensors {
        return Err(bad("tensor list does not match dims and heads".into()));
    }
    let bin_path = dir.join(TENSORS);
    let bytes = std::fs::read(&bin_path).map_err(|e| PsgError::io(&bin_path, e))?;
    {
        let mut tensors = match &mut network {
            Network::TwoHead { params, .. } => params.tensors_mut(),
            Network::Baseline { params, .. } => params.tensors_mut(),
        };
        let total: usize = tensors.iter().map(|t| t.len()).sum();
        if bytes.len() != total * 8 {
            return Err(PsgError::Data(format!("{}: expected {} bytes, found {}", bin_path.display(), total * 8, bytes.len())));
        }
        let mut chunks = bytes.chunks_exact(8);
        for tensor in tensors.iter_mut() {
            for v in tensor.iter_mut() {
                *v = f64::from_le_bytes(chunks.next().expect("length checked").try_into().expect("chunk of 8"));
            }
        }
    }
    let vec_path = dir.join(&manifest.vectorizer);
    let vectorizer: Vectorizer = serde_json::from_str(&io::read_to_string(&vec_path)?)
        .map_err(|e| PsgError::Data(format!("{}: {e}", vec_path.display())))?;
    // Single-task models record 0 for the absent head's size.
    let tags_ok = !manifest.heads.has_tag() || manifest.vocab.len() == dims.tags;
    let levels_ok = !manifest.heads.has_difficulty() || manifest.scale.levels() == dims.levels;
    if vectorizer.dim() != dims.input || !tags_ok || !levels_ok {
        return Err(bad("vectorizer, vocabulary or scale size disagrees with dims".into()));
    }
    Ok(Checkpoint { network, vectorizer, vocab: manifest.vocab, scale: manifest.scale, log: manifest.training_log })
}
