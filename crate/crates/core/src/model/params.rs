use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::rng::{self, streams};

/// Layer sizes: input features `V`, hidden units `H`, tags `K`, levels `D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims {
    pub input: usize,
    pub hidden: usize,
    pub tags: usize,
    pub levels: usize,
}

/// Which heads a model carries. Single-task models omit the other head.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Heads {
    #[default]
    Both,
    TagOnly,
    DifficultyOnly,
}

impl Heads {
    pub fn has_tag(self) -> bool {
        !matches!(self, Heads::DifficultyOnly)
    }

    pub fn has_difficulty(self) -> bool {
        !matches!(self, Heads::TagOnly)
    }
}

/// Affine map with an `inputs x outputs` row-major weight matrix, so the
/// weights feeding from input `i` are the contiguous row `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Linear {
    pub inputs: usize,
    pub outputs: usize,
    pub weight: Vec<f64>,
    pub bias: Vec<f64>,
}

impl Linear {
    pub fn zeros(inputs: usize, outputs: usize) -> Self {
        Self { inputs, outputs, weight: alloc::vec![0.0; inputs * outputs], bias: alloc::vec![0.0; outputs] }
    }

    /// Weights uniform in `±sqrt(6 / (fan_in + fan_out))`, zero bias.
    pub fn glorot(inputs: usize, outputs: usize, rng: &mut rng::Rng) -> Self {
        let mut layer = Self::zeros(inputs, outputs);
        if inputs + outputs > 0 {
            let limit = libm::sqrt(6.0 / (inputs + outputs) as f64);
            for w in &mut layer.weight {
                *w = rng::symmetric(rng, limit);
            }
        }
        layer
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.weight[i * self.outputs..(i + 1) * self.outputs]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.weight[i * self.outputs..(i + 1) * self.outputs]
    }

    /// `bias + W^T input` for a dense input.
    pub fn apply(&self, input: &[f64]) -> Vec<f64> {
        let mut out = self.bias.clone();
        for (i, &v) in input.iter().enumerate() {
            if v != 0.0 {
                for (o, w) in out.iter_mut().zip(self.row(i)) {
                    *o += v * w;
                }
            }
        }
        out
    }

    /// `bias + W^T input` for sparse `(index, value)` entries.
    pub fn apply_sparse(&self, entries: &[(usize, f64)]) -> Vec<f64> {
        let mut out = self.bias.clone();
        for &(i, v) in entries {
            for (o, w) in out.iter_mut().zip(self.row(i)) {
                *o += v * w;
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.weight.len() + self.bias.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Flat view over parameter tensors, in a fixed declared order.
pub trait Parameters {
    fn tensors(&self) -> Vec<&[f64]>;
    fn tensors_mut(&mut self) -> Vec<&mut [f64]>;

    fn zeros_like(&self) -> Self;

    fn num_params(&self) -> usize {
        self.tensors().iter().map(|t| t.len()).sum()
    }

    fn all_finite(&self) -> bool {
        self.tensors().iter().all(|t| t.iter().all(|v| v.is_finite()))
    }
}

/// Encoder plus optional heads. Tensor order: `W_enc, b_enc, W_tag, b_tag,
/// W_diff, b_diff`, absent heads skipped.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub encoder: Linear,
    pub tag_head: Option<Linear>,
    pub diff_head: Option<Linear>,
}

impl ModelParams {
    pub fn zeros(dims: Dims, heads: Heads) -> Self {
        Self {
            encoder: Linear::zeros(dims.input, dims.hidden),
            tag_head: heads.has_tag().then(|| Linear::zeros(dims.hidden, dims.tags)),
            diff_head: heads.has_difficulty().then(|| Linear::zeros(dims.hidden, dims.levels)),
        }
    }

    /// Glorot-uniform weights and zero biases. Each tensor draws from its own
    /// stream of `seed`, so dropping a head leaves the others unchanged.
    pub fn init(dims: Dims, heads: Heads, seed: u64) -> Self {
        Self {
            encoder: Linear::glorot(dims.input, dims.hidden, &mut rng::stream(seed, streams::ENCODER_INIT)),
            tag_head: heads
                .has_tag()
                .then(|| Linear::glorot(dims.hidden, dims.tags, &mut rng::stream(seed, streams::TAG_HEAD_INIT))),
            diff_head: heads
                .has_difficulty()
                .then(|| Linear::glorot(dims.hidden, dims.levels, &mut rng::stream(seed, streams::DIFF_HEAD_INIT))),
        }
    }

    pub fn dims(&self) -> Dims {
        Dims {
            input: self.encoder.inputs,
            hidden: self.encoder.outputs,
            tags: self.tag_head.as_ref().map_or(0, |h| h.outputs),
            levels: self.diff_head.as_ref().map_or(0, |h| h.outputs),
        }
    }

    pub fn heads(&self) -> Heads {
        match (self.tag_head.is_some(), self.diff_head.is_some()) {
            (true, false) => Heads::TagOnly,
            (false, true) => Heads::DifficultyOnly,
            _ => Heads::Both,
        }
    }

    /// `(name, [rows, cols], data)` for every tensor in declared order.
    /// Bias vectors report `[len, 1]`.
    pub fn named_tensors(&self) -> Vec<(&'static str, [usize; 2], &[f64])> {
        let mut out = alloc::vec![
            ("W_enc", [self.encoder.inputs, self.encoder.outputs], self.encoder.weight.as_slice()),
            ("b_enc", [self.encoder.outputs, 1], self.encoder.bias.as_slice()),
        ];
        if let Some(h) = &self.tag_head {
            out.push(("W_tag", [h.inputs, h.outputs], h.weight.as_slice()));
            out.push(("b_tag", [h.outputs, 1], h.bias.as_slice()));
        }
        if let Some(h) = &self.diff_head {
            out.push(("W_diff", [h.inputs, h.outputs], h.weight.as_slice()));
            out.push(("b_diff", [h.outputs, 1], h.bias.as_slice()));
        }
        out
    }
}

impl Parameters for ModelParams {
    fn tensors(&self) -> Vec<&[f64]> {
        self.named_tensors().into_iter().map(|(_, _, t)| t).collect()
    }

    fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        let mut out: Vec<&mut [f64]> = alloc::vec![&mut self.encoder.weight, &mut self.encoder.bias];
        if let Some(h) = &mut self.tag_head {
            out.push(&mut h.weight);
            out.push(&mut h.bias);
        }
        if let Some(h) = &mut self.diff_head {
            out.push(&mut h.weight);
            out.push(&mut h.bias);
        }
        out
    }

    fn zeros_like(&self) -> Self {
        ModelParams::zeros(self.dims(), self.heads())
    }
}

/// Exact parameter count of a model with the given heads:
/// `VH + H` for the encoder, `HK + K` and `HD + D` for the heads.
pub fn param_count(dims: Dims, heads: Heads) -> u64 {
    let (v, h, k, d) = (dims.input as u64, dims.hidden as u64, dims.tags as u64, dims.levels as u64);
    let mut total = v * h + h;
    if heads.has_tag() {
        total += h * k + k;
    }
    if heads.has_difficulty() {
        total += h * d + d;
    }
    total
}

/// Combined size of a tag-only and a difficulty-only model, each with its
/// own encoder.
pub fn two_single_task_param_count(dims: Dims) -> u64 {
    param_count(dims, Heads::TagOnly) + param_count(dims, Heads::DifficultyOnly)
}
