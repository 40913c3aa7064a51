use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::params::Parameters;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self { beta1: 0.9, beta2: 0.999, epsilon: 1e-8 }
    }
}

/// Adam with bias correction. Moment buffers mirror the parameter tensors.
#[derive(Debug, Clone)]
pub struct Adam {
    config: AdamConfig,
    learning_rate: f64,
    first: Vec<Vec<f64>>,
    second: Vec<Vec<f64>>,
    steps: i32,
}

impl Adam {
    pub fn new<P: Parameters>(params: &P, learning_rate: f64, config: AdamConfig) -> Self {
        let zeros: Vec<Vec<f64>> = params.tensors().iter().map(|t| alloc::vec![0.0; t.len()]).collect();
        Self { config, learning_rate, first: zeros.clone(), second: zeros, steps: 0 }
    }

    pub fn steps(&self) -> i32 {
        self.steps
    }

    pub fn step<P: Parameters>(&mut self, params: &mut P, grads: &P) {
        self.steps += 1;
        let AdamConfig { beta1, beta2, epsilon } = self.config;
        let correction1 = 1.0 - libm::pow(beta1, self.steps as f64);
        let correction2 = 1.0 - libm::pow(beta2, self.steps as f64);
        let lr = self.learning_rate;
        let grads = grads.tensors();
        for (((theta, g), m), v) in params.tensors_mut().into_iter().zip(grads).zip(&mut self.first).zip(&mut self.second) {
            for j in 0..theta.len() {
                let gj = g[j];
                m[j] = beta1 * m[j] + (1.0 - beta1) * gj;
                v[j] = beta2 * v[j] + (1.0 - beta2) * gj * gj;
                let m_hat = m[j] / correction1;
                let v_hat = v[j] / correction2;
                theta[j] -= lr * m_hat / (libm::sqrt(v_hat) + epsilon);
            }
        }
    }
}
