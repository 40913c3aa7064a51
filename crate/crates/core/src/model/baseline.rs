//! One-vs-rest logistic regression on the TF-IDF features for tags, plus a
//! softmax regression for difficulty. No shared layer, so no lambda.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::adam::{Adam, AdamConfig};
use super::loss::{bce_loss, ce_loss, sigmoid, softmax};
use super::network::{Example, LossParts};
use super::params::{Dims, Heads, Linear, Parameters};
use super::train::{check_examples, clear_rows, run_minibatches, validate_adam, LoopSettings, TrainingLog};
use super::ModelError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaselineConfig {
    pub learning_rate: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub seed: u64,
    pub adam: AdamConfig,
}

impl Default for BaselineConfig {
    fn default() -> Self {
        Self { learning_rate: 1e-2, batch_size: 32, epochs: 20, seed: 42, adam: AdamConfig::default() }
    }
}

/// `tag` maps features to K logits, `diff` maps features to D logits.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineParams {
    pub tag: Linear,
    pub diff: Linear,
}

impl BaselineParams {
    pub fn zeros(input: usize, tags: usize, levels: usize) -> Self {
        Self { tag: Linear::zeros(input, tags), diff: Linear::zeros(input, levels) }
    }

    pub fn named_tensors(&self) -> Vec<(&'static str, [usize; 2], &[f64])> {
        alloc::vec![
            ("W_tag", [self.tag.inputs, self.tag.outputs], self.tag.weight.as_slice()),
            ("b_tag", [self.tag.outputs, 1], self.tag.bias.as_slice()),
            ("W_diff", [self.diff.inputs, self.diff.outputs], self.diff.weight.as_slice()),
            ("b_diff", [self.diff.outputs, 1], self.diff.bias.as_slice()),
        ]
    }

    pub fn tag_logits(&self, x: &crate::text::DocumentVector) -> Vec<f64> {
        self.tag.apply_sparse(&x.entries)
    }

    pub fn diff_logits(&self, x: &crate::text::DocumentVector) -> Vec<f64> {
        self.diff.apply_sparse(&x.entries)
    }
}

impl Parameters for BaselineParams {
    fn tensors(&self) -> Vec<&[f64]> {
        self.named_tensors().into_iter().map(|(_, _, t)| t).collect()
    }

    fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        alloc::vec![&mut self.tag.weight, &mut self.tag.bias, &mut self.diff.weight, &mut self.diff.bias]
    }

    fn zeros_like(&self) -> Self {
        Self::zeros(self.tag.inputs, self.tag.outputs, self.diff.outputs)
    }
}

fn accumulate(layer_grad: &mut Linear, x: &[(usize, f64)], da: &[f64]) {
    for &(i, v) in x {
        for (g, d) in layer_grad.row_mut(i).iter_mut().zip(da) {
            *g += v * d;
        }
    }
    for (g, d) in layer_grad.bias.iter_mut().zip(da) {
        *g += d;
    }
}

/// Zero-initialized, trained with minibatch Adam on mean BCE (tags) plus
/// masked mean CE (difficulty).
pub fn train_baseline(
    examples: &[Example],
    input: usize,
    tags: usize,
    levels: usize,
    config: &BaselineConfig,
) -> Result<(BaselineParams, TrainingLog), ModelError> {
    if !(config.learning_rate > 0.0 && config.learning_rate.is_finite()) || config.batch_size == 0 || config.epochs == 0 {
        return Err(ModelError::InvalidConfig(alloc::format!("invalid baseline config {config:?}")));
    }
    validate_adam(&config.adam)?;
    check_examples(examples, Dims { input, hidden: 0, tags, levels }, Heads::Both)?;
    let mut params = BaselineParams::zeros(input, tags, levels);
    let mut grads = params.zeros_like();
    let mut adam = Adam::new(&params, config.learning_rate, config.adam);
    let settings = LoopSettings { epochs: config.epochs, batch_size: config.batch_size, seed: config.seed, patience: None };
    let log = run_minibatches(examples, &settings, |batch| {
        let n = batch.len() as f64;
        let labeled = batch.iter().filter(|ex| ex.level.is_some()).count();
        let (mut l1, mut l2) = (0.0, 0.0);
        for ex in batch {
            let x = &ex.features.entries;
            let a = params.tag_logits(&ex.features);
            l1 += bce_loss(&a, &ex.tags)?;
            let scale = 1.0 / (tags.max(1) as f64 * n);
            let da: Vec<f64> = a.iter().zip(&ex.tags).map(|(&a, &y)| (sigmoid(a) - y as f64) * scale).collect();
            accumulate(&mut grads.tag, x, &da);
            if let Some(d) = ex.level {
                let a = params.diff_logits(&ex.features);
                l2 += ce_loss(&a, d)?;
                let mut da = softmax(&a);
                da[d] -= 1.0;
                let scale = 1.0 / labeled as f64;
                da.iter_mut().for_each(|v| *v *= scale);
                accumulate(&mut grads.diff, x, &da);
            }
        }
        adam.step(&mut params, &grads);
        for layer in [&mut grads.tag, &mut grads.diff] {
            clear_rows(layer, batch);
            layer.bias.fill(0.0);
        }
        let l1 = l1 / n;
        let l2 = if labeled == 0 { 0.0 } else { l2 / labeled as f64 };
        Ok(LossParts { l1, l2, joint: l1 + l2, labeled })
    })?;
    Ok((params, log))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::DocumentVector;
    use alloc::vec;

    fn toy() -> Vec<Example> {
        // Feature 0 marks label 0, feature 1 marks label 1.
        (0..16)
            .map(|i| {
                let (a, b) = ((i % 2) as u8, ((i / 2) % 2) as u8);
                let mut entries = vec![(2, 0.3)];
                if a == 1 {
                    entries.push((0, 1.0));
                }
                if b == 1 {
                    entries.push((1, 1.0));
                }
                entries.sort_by_key(|e| e.0);
                Example { features: DocumentVector { dim: 3, entries }, tags: vec![a, b], level: Some((a + b) as usize) }
            })
            .collect()
    }

    #[test]
    fn separable_toy_is_fit() {
        let data = toy();
        let cfg = BaselineConfig { learning_rate: 0.1, batch_size: 4, epochs: 60, seed: 1, ..Default::default() };
        let (params, _) = train_baseline(&data, 3, 2, 3, &cfg).unwrap();
        for ex in &data {
            let a = params.tag_logits(&ex.features);
            for (logit, &y) in a.iter().zip(&ex.tags) {
                assert_eq!((sigmoid(*logit) >= 0.5) as u8, y);
            }
        }
    }

    #[test]
    fn same_seed_same_model() {
        let cfg = BaselineConfig { epochs: 3, batch_size: 5, ..Default::default() };
        assert_eq!(train_baseline(&toy(), 3, 2, 3, &cfg).unwrap(), train_baseline(&toy(), 3, 2, 3, &cfg).unwrap());
    }
}
