use alloc::vec::Vec;

use super::loss::{bce_loss, ce_loss, sigmoid, softmax};
use super::params::{ModelParams, Parameters};
use super::ModelError;
use crate::text::DocumentVector;

/// One training or evaluation sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub features: DocumentVector,
    /// Binary tag targets in vocabulary order.
    pub tags: Vec<u8>,
    /// Difficulty class, `None` when unknown.
    pub level: Option<usize>,
}

pub type Batch<'a> = [&'a Example];

#[derive(Debug, Clone, PartialEq)]
pub struct Forward {
    /// Encoder pre-activations.
    pub pre: Vec<f64>,
    pub z: Vec<f64>,
    pub tag_logits: Option<Vec<f64>>,
    pub diff_logits: Option<Vec<f64>>,
}

pub fn forward(params: &ModelParams, x: &DocumentVector) -> Result<Forward, ModelError> {
    let inputs = params.encoder.inputs;
    if x.dim != inputs {
        return Err(ModelError::DimensionMismatch { what: "input features", expected: inputs, got: x.dim });
    }
    if let Some(&(i, _)) = x.entries.iter().find(|(i, _)| *i >= inputs) {
        return Err(ModelError::DimensionMismatch { what: "feature index", expected: inputs, got: i });
    }
    let pre = params.encoder.apply_sparse(&x.entries);
    let z: Vec<f64> = pre.iter().map(|&p| if p > 0.0 { p } else { 0.0 }).collect();
    Ok(Forward {
        tag_logits: params.tag_head.as_ref().map(|h| h.apply(&z)),
        diff_logits: params.diff_head.as_ref().map(|h| h.apply(&z)),
        pre,
        z,
    })
}

/// Batch losses. `joint = l1 + w * l2` where `w` is `lambda` for models with
/// a tag head and 1 for difficulty-only models.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LossParts {
    pub l1: f64,
    pub l2: f64,
    pub joint: f64,
    /// Samples in the batch with a difficulty target.
    pub labeled: usize,
}

fn difficulty_weight(params: &ModelParams, lambda: f64) -> f64 {
    if params.tag_head.is_some() {
        lambda
    } else {
        1.0
    }
}

fn check_lambda(lambda: f64) -> Result<(), ModelError> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(ModelError::InvalidConfig(alloc::format!("lambda must be finite and >= 0, got {lambda}")));
    }
    Ok(())
}

pub fn batch_loss(params: &ModelParams, batch: &Batch, lambda: f64) -> Result<LossParts, ModelError> {
    check_lambda(lambda)?;
    let mut l1 = 0.0;
    let mut l2 = 0.0;
    let mut labeled = 0usize;
    for ex in batch {
        let f = forward(params, &ex.features)?;
        if let Some(a) = &f.tag_logits {
            l1 += bce_loss(a, &ex.tags)?;
        }
        if let (Some(a), Some(d)) = (&f.diff_logits, ex.level) {
            l2 += ce_loss(a, d)?;
            labeled += 1;
        }
    }
    Ok(finish(params, lambda, batch.len(), l1, l2, labeled))
}

fn finish(params: &ModelParams, lambda: f64, n: usize, l1_sum: f64, l2_sum: f64, labeled: usize) -> LossParts {
    let l1 = if n == 0 { 0.0 } else { l1_sum / n as f64 };
    let l2 = if labeled == 0 { 0.0 } else { l2_sum / labeled as f64 };
    LossParts { l1, l2, joint: l1 + difficulty_weight(params, lambda) * l2, labeled }
}

/// Analytic gradients of the batch joint loss with respect to every
/// parameter. The ReLU derivative at 0 is taken as 0.
pub fn backward(params: &ModelParams, batch: &Batch, lambda: f64) -> Result<(ModelParams, LossParts), ModelError> {
    let mut grads = params.zeros_like();
    let parts = backward_into(params, batch, lambda, &mut grads)?;
    Ok((grads, parts))
}

/// Like [`backward`] but accumulates into `grads`, which the caller must
/// have zeroed.
pub(crate) fn backward_into(
    params: &ModelParams,
    batch: &Batch,
    lambda: f64,
    grads: &mut ModelParams,
) -> Result<LossParts, ModelError> {
    check_lambda(lambda)?;
    let n = batch.len();
    let labeled = batch.iter().filter(|ex| ex.level.is_some()).count();
    let weight = difficulty_weight(params, lambda);
    let hidden = params.encoder.outputs;
    let mut l1_sum = 0.0;
    let mut l2_sum = 0.0;

    for ex in batch {
        let f = forward(params, &ex.features)?;
        let mut dz = alloc::vec![0.0; hidden];

        if let (Some(head), Some(logits), Some(g)) = (&params.tag_head, &f.tag_logits, grads.tag_head.as_mut()) {
            l1_sum += bce_loss(logits, &ex.tags)?;
            let scale = 1.0 / (head.outputs as f64 * n as f64);
            let da: Vec<f64> = logits.iter().zip(&ex.tags).map(|(&a, &y)| (sigmoid(a) - y as f64) * scale).collect();
            accumulate_head(head, g, &f.z, &da, &mut dz);
        }

        if let (Some(head), Some(logits), Some(d)) = (&params.diff_head, &f.diff_logits, ex.level) {
            l2_sum += ce_loss(logits, d)?;
            if weight != 0.0 {
                let g = grads.diff_head.as_mut().expect("gradient buffer mirrors params");
                let scale = weight / labeled as f64;
                let mut da = softmax(logits);
                da[d] -= 1.0;
                for v in &mut da {
                    *v *= scale;
                }
                accumulate_head(head, g, &f.z, &da, &mut dz);
            }
        }

        for (h, dp) in dz.iter_mut().enumerate() {
            if f.pre[h] <= 0.0 {
                *dp = 0.0;
            }
        }
        for &(i, x) in &ex.features.entries {
            for (g, dp) in grads.encoder.row_mut(i).iter_mut().zip(&dz) {
                *g += x * dp;
            }
        }
        for (g, dp) in grads.encoder.bias.iter_mut().zip(&dz) {
            *g += dp;
        }
    }
    Ok(finish(params, lambda, n, l1_sum, l2_sum, labeled))
}

/// Head gradients for output gradient `da`, and backpropagation into `dz`.
fn accumulate_head(head: &super::Linear, grad: &mut super::Linear, z: &[f64], da: &[f64], dz: &mut [f64]) {
    for (h, &zh) in z.iter().enumerate() {
        if zh != 0.0 {
            for (g, &d) in grad.row_mut(h).iter_mut().zip(da) {
                *g += zh * d;
            }
        }
        let row = head.row(h);
        dz[h] += row.iter().zip(da).map(|(w, d)| w * d).sum::<f64>();
    }
    for (g, &d) in grad.bias.iter_mut().zip(da) {
        *g += d;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::params::{Dims, Heads};
    use crate::rng;
    use alloc::vec;

    const DIMS: Dims = Dims { input: 10, hidden: 4, tags: 3, levels: 5 };

    fn example(entries: Vec<(usize, f64)>, level: Option<usize>) -> Example {
        Example { features: DocumentVector { dim: DIMS.input, entries }, tags: vec![1, 0, 1], level }
    }

    #[test]
    fn zero_params_give_zero_logits() {
        let p = ModelParams::zeros(DIMS, Heads::Both);
        let f = forward(&p, &DocumentVector { dim: 10, entries: vec![(2, 0.6), (7, 0.8)] }).unwrap();
        assert!(f.z.iter().all(|&v| v == 0.0));
        assert!(f.tag_logits.unwrap().iter().all(|&v| v == 0.0));
        assert!(f.diff_logits.unwrap().iter().all(|&v| v == 0.0));
        assert_eq!(sigmoid(0.0), 0.5);
    }

    #[test]
    fn zero_input_gives_relu_bias() {
        let mut p = ModelParams::init(DIMS, Heads::Both, 1);
        p.encoder.bias = vec![0.5, -0.25, 0.0, 2.0];
        let f = forward(&p, &DocumentVector::zeros(10)).unwrap();
        assert_eq!(f.z, vec![0.5, 0.0, 0.0, 2.0]);
    }

    /// Independent dense oracle: explicit triple loops over full matrices.
    #[allow(clippy::needless_range_loop)]
    fn dense_oracle(p: &ModelParams, x: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let mut z = vec![0.0; DIMS.hidden];
        for h in 0..DIMS.hidden {
            let mut acc = p.encoder.bias[h];
            for i in 0..DIMS.input {
                acc += p.encoder.weight[i * DIMS.hidden + h] * x[i];
            }
            z[h] = acc.max(0.0);
        }
        let head = |l: &super::super::Linear| {
            (0..l.outputs)
                .map(|o| l.bias[o] + (0..l.inputs).map(|h| l.weight[h * l.outputs + o] * z[h]).sum::<f64>())
                .collect::<Vec<f64>>()
        };
        let t = head(p.tag_head.as_ref().unwrap());
        let d = head(p.diff_head.as_ref().unwrap());
        (z, t, d)
    }

    #[test]
    fn forward_matches_dense_oracle() {
        let mut p = ModelParams::init(DIMS, Heads::Both, 7);
        let mut r = rng::stream(7, 99);
        for t in [&mut p.encoder.bias] {
            for b in t.iter_mut() {
                *b = rng::symmetric(&mut r, 0.3);
            }
        }
        let entries: Vec<(usize, f64)> = (0..10).filter(|i| i % 3 != 1).map(|i| (i, rng::symmetric(&mut r, 1.0))).collect();
        let x = DocumentVector { dim: 10, entries };
        let f = forward(&p, &x).unwrap();
        let (z, t, d) = dense_oracle(&p, &x.to_dense());
        for (a, b) in f.z.iter().zip(&z).chain(f.tag_logits.as_ref().unwrap().iter().zip(&t)).chain(f.diff_logits.as_ref().unwrap().iter().zip(&d)) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let p = ModelParams::zeros(DIMS, Heads::Both);
        assert!(matches!(forward(&p, &DocumentVector::zeros(11)), Err(ModelError::DimensionMismatch { .. })));
        let bad = DocumentVector { dim: 10, entries: vec![(10, 1.0)] };
        assert!(matches!(forward(&p, &bad), Err(ModelError::DimensionMismatch { .. })));
    }

    #[test]
    fn lambda_zero_leaves_diff_head_gradient_zero() {
        let p = ModelParams::init(DIMS, Heads::Both, 3);
        let a = example(vec![(1, 0.6), (4, 0.8)], Some(2));
        let b = example(vec![(0, 1.0)], Some(4));
        let (g, parts) = backward(&p, &[&a, &b], 0.0).unwrap();
        let head = g.diff_head.unwrap();
        assert!(head.weight.iter().chain(&head.bias).all(|&v| v == 0.0));
        assert!(parts.l2 > 0.0);
        assert_eq!(parts.joint, parts.l1);
    }

    #[test]
    fn zero_inputs_give_zero_encoder_weight_gradient() {
        let p = ModelParams::init(DIMS, Heads::Both, 3);
        let a = example(vec![], Some(1));
        let (g, _) = backward(&p, &[&a], 10.0).unwrap();
        assert!(g.encoder.weight.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn uniform_predictor_losses() {
        let p = ModelParams::zeros(DIMS, Heads::Both);
        let a = example(vec![(1, 1.0)], Some(2));
        let parts = batch_loss(&p, &[&a], 2.0).unwrap();
        assert!((parts.l1 - core::f64::consts::LN_2).abs() < 1e-12);
        assert!((parts.l2 - libm::log(5.0)).abs() < 1e-12);
        assert_eq!(parts.joint, parts.l1 + 2.0 * parts.l2);
    }

    #[test]
    fn masked_and_invalid_levels() {
        let p = ModelParams::init(DIMS, Heads::Both, 3);
        let a = example(vec![(1, 1.0)], None);
        let parts = batch_loss(&p, &[&a], 1.0).unwrap();
        assert_eq!((parts.l2, parts.labeled), (0.0, 0));
        let bad = example(vec![(1, 1.0)], Some(5));
        assert!(matches!(batch_loss(&p, &[&bad], 1.0), Err(ModelError::LevelOutOfRange { .. })));
        assert!(matches!(batch_loss(&p, &[&a], -1.0), Err(ModelError::InvalidConfig(_))));
    }
}
