//! Double-double evaluation of the batch loss, used by the finite-difference
//! gradient check. In plain f64 the loss carries roundoff near `ulp(loss)`,
//! which swamps `f(θ+ε) - f(θ-ε)` for coordinates whose gradient is around
//! 1e-6. Here the perturbed coordinate is held exactly as `θ ± ε` and every
//! operation keeps about 106 bits.

use alloc::vec::Vec;

use super::network::Batch;
use super::params::{Linear, ModelParams};

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const LN2: Dd = Dd { hi: core::f64::consts::LN_2, lo: 2.319_046_813_846_299_6e-17 };

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn new(v: f64) -> Dd {
        Dd { hi: v, lo: 0.0 }
    }

    pub fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let r = quick_two_sum(s, e + t);
        quick_two_sum(r.hi, r.lo + f)
    }

    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    pub fn sub(self, b: Dd) -> Dd {
        self.add(b.neg())
    }

    pub fn mul(self, b: Dd) -> Dd {
        let p = self.hi * b.hi;
        let e = libm::fma(self.hi, b.hi, -p) + (self.hi * b.lo + self.lo * b.hi);
        quick_two_sum(p, e)
    }

    pub fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self.sub(b.mul(Dd::new(q1)));
        let q2 = r.hi / b.hi;
        let r = r.sub(b.mul(Dd::new(q2)));
        let q3 = r.hi / b.hi;
        quick_two_sum(q1, q2).add(Dd::new(q3))
    }

    fn scale(self, exp: i32) -> Dd {
        Dd { hi: libm::scalbn(self.hi, exp), lo: libm::scalbn(self.lo, exp) }
    }

    pub fn max_zero(self) -> Dd {
        if self.hi > 0.0 {
            self
        } else {
            Dd::ZERO
        }
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 {
            self.neg()
        } else {
            self
        }
    }

    pub fn exp(self) -> Dd {
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        // x = k ln2 + r, then e^r from a Taylor series on r / 2^10 followed
        // by ten squarings carried out on e^r - 1 to avoid cancellation.
        let k = libm::round(self.hi / LN2.hi);
        let r = self.sub(LN2.mul(Dd::new(k))).scale(-10);
        let mut sum = r;
        let mut term = r;
        for n in 2..30 {
            term = term.mul(r).div(Dd::new(n as f64));
            sum = sum.add(term);
            if libm::fabs(term.hi) < 1e-36 {
                break;
            }
        }
        for _ in 0..10 {
            sum = sum.mul(sum.add(Dd::new(2.0)));
        }
        sum.add(Dd::ONE).scale(k as i32)
    }

    /// Natural log by one Newton step from the f64 estimate.
    pub fn ln(self) -> Dd {
        let y = Dd::new(libm::log(self.hi));
        y.add(self.mul(y.neg().exp())).sub(Dd::ONE)
    }
}

/// A single parameter shifted by `offset`, addressed as in
/// [`super::Parameters::tensors`].
#[derive(Debug, Clone, Copy)]
pub(crate) struct Probe {
    pub tensor: usize,
    pub index: usize,
    pub offset: f64,
}

fn value(layer: &[f64], tensor: usize, index: usize, probe: Option<Probe>) -> Dd {
    let v = Dd::new(layer[index]);
    match probe {
        Some(p) if p.tensor == tensor && p.index == index => v.add(Dd::new(p.offset)),
        _ => v,
    }
}

/// `bias + W^T input` for a layer whose weight and bias are tensors `t` and
/// `t + 1`.
fn apply(layer: &Linear, t: usize, input: &[(usize, Dd)], probe: Option<Probe>) -> Vec<Dd> {
    (0..layer.outputs)
        .map(|o| {
            let mut acc = value(&layer.bias, t + 1, o, probe);
            for &(i, v) in input {
                acc = acc.add(v.mul(value(&layer.weight, t, i * layer.outputs + o, probe)));
            }
            acc
        })
        .collect()
}

/// Joint batch loss with the same definition as [`super::batch_loss`], plus
/// the sign pattern of every encoder pre-activation.
pub(crate) fn joint_loss_dd(params: &ModelParams, batch: &Batch, lambda: f64, probe: Option<Probe>) -> (Dd, Vec<bool>) {
    let tag_t = 2;
    let diff_t = if params.tag_head.is_some() { 4 } else { 2 };
    let mut l1 = Dd::ZERO;
    let mut l2 = Dd::ZERO;
    let mut labeled = 0usize;
    let mut pattern = Vec::new();
    for ex in batch {
        let x: Vec<(usize, Dd)> = ex.features.entries.iter().map(|&(i, v)| (i, Dd::new(v))).collect();
        let pre = apply(&params.encoder, 0, &x, probe);
        pattern.extend(pre.iter().map(|p| p.hi > 0.0));
        let z: Vec<(usize, Dd)> = pre.into_iter().map(Dd::max_zero).enumerate().collect();
        if let Some(head) = &params.tag_head {
            let logits = apply(head, tag_t, &z, probe);
            let mut total = Dd::ZERO;
            for (a, &y) in logits.iter().zip(&ex.tags) {
                let softplus = a.max_zero().add(Dd::ONE.add(a.abs().neg().exp()).ln());
                total = total.add(if y == 1 { softplus.sub(*a) } else { softplus });
            }
            if !logits.is_empty() {
                l1 = l1.add(total.div(Dd::new(logits.len() as f64)));
            }
        }
        if let (Some(head), Some(d)) = (&params.diff_head, ex.level) {
            let logits = apply(head, diff_t, &z, probe);
            let max = logits.iter().map(|a| a.hi).fold(f64::NEG_INFINITY, f64::max);
            let max = Dd::new(max);
            let total = logits.iter().fold(Dd::ZERO, |acc, a| acc.add(a.sub(max).exp()));
            l2 = l2.add(max.add(total.ln()).sub(logits[d]));
            labeled += 1;
        }
    }
    if !batch.is_empty() {
        l1 = l1.div(Dd::new(batch.len() as f64));
    }
    if labeled > 0 {
        l2 = l2.div(Dd::new(labeled as f64));
    }
    let weight = if params.tag_head.is_some() { lambda } else { 1.0 };
    (l1.add(l2.mul(Dd::new(weight))), pattern)
}
