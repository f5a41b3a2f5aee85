//! Linear models: multinomial softmax regression trained with full-batch
//! Adam, and one-vs-rest linear SVMs trained with Pegasos-style stochastic
//! subgradient descent.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::exec;
use crate::features::SparseVector;

use super::{derive_seed, stable_softmax, AdamState};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LrModel {
    /// Row-per-class weights, `weights[c * dim + j]`.
    pub(crate) weights: Vec<f64>,
    pub(crate) bias: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LrParams {
    pub l2: f64,
    pub epochs: usize,
    pub learning_rate: f64,
}

impl Default for LrParams {
    fn default() -> Self {
        LrParams {
            l2: 1e-4,
            epochs: 200,
            learning_rate: 0.01,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    /// One hyperplane per class, `weights[c * dim + j]`; no bias term.
    pub(crate) weights: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SvmParams {
    pub lambda: f64,
    pub epochs: usize,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams {
            lambda: 1e-4,
            epochs: 50,
        }
    }
}

fn class_logits(weights: &[f64], bias: Option<&[f64]>, x: &SparseVector, n_classes: usize) -> Vec<f64> {
    let dim = x.dim();
    let mut logits: Vec<f64> = match bias {
        Some(b) => b.to_vec(),
        None => vec![0.0; n_classes],
    };
    for (c, logit) in logits.iter_mut().enumerate() {
        let row = c * dim;
        for (j, v) in x.iter() {
            *logit += weights[row + j as usize] * v;
        }
    }
    logits
}

/// Softmax regression with L2 regularization, trained full-batch with Adam.
/// Weights start at zero, so training is deterministic without a seed.
pub(crate) fn train_lr(
    params: &LrParams,
    x: &[SparseVector],
    y: &[usize],
    n_classes: usize,
) -> LrModel {
    let n = x.len();
    let dim = x[0].dim();
    let mut weights = vec![0.0f64; n_classes * dim];
    let mut bias = vec![0.0f64; n_classes];
    let mut grad_w = vec![0.0f64; n_classes * dim];
    let mut grad_b = vec![0.0f64; n_classes];
    let mut adam_w = AdamState::new(n_classes * dim);
    let mut adam_b = AdamState::new(n_classes);
    let inv_n = 1.0 / n as f64;

    for epoch in 0..params.epochs {
        grad_w.fill(0.0);
        grad_b.fill(0.0);
        for (vec, &cls) in x.iter().zip(y) {
            let probs = stable_softmax(&class_logits(&weights, Some(&bias), vec, n_classes));
            for c in 0..n_classes {
                let g = (probs[c] - if c == cls { 1.0 } else { 0.0 }) * inv_n;
                grad_b[c] += g;
                let row = c * dim;
                for (j, v) in vec.iter() {
                    grad_w[row + j as usize] += g * v;
                }
            }
        }
        for (g, w) in grad_w.iter_mut().zip(&weights) {
            *g += params.l2 * w;
        }
        let t = epoch + 1;
        adam_w.step(&mut weights, &grad_w, t, params.learning_rate);
        adam_b.step(&mut bias, &grad_b, t, params.learning_rate);
    }

    LrModel { weights, bias }
}

impl LrModel {
    pub(crate) fn predict_scores(&self, x: &SparseVector, n_classes: usize) -> Vec<f64> {
        stable_softmax(&class_logits(&self.weights, Some(&self.bias), x, n_classes))
    }
}

/// One-vs-rest Pegasos. Each class's pass visits the samples in a freshly
/// shuffled order every epoch, with a per-class rng derived from the seed so
/// the classes can train concurrently.
pub(crate) fn train_svm(
    params: &SvmParams,
    x: &[SparseVector],
    y: &[usize],
    n_classes: usize,
    seed: u64,
) -> SvmModel {
    let n = x.len();
    let dim = x[0].dim();
    let lambda = params.lambda;

    let rows = exec::par_map((0..n_classes).collect::<Vec<usize>>(), |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, c as u64));
        // w is kept as scale * v to make the shrink step O(1).
        let mut v = vec![0.0f64; dim];
        let mut scale = 1.0f64;
        let mut order: Vec<usize> = (0..n).collect();
        let mut t = 0u64;
        for _ in 0..params.epochs {
            order.shuffle(&mut rng);
            for &i in &order {
                t += 1;
                let eta = 1.0 / (lambda * t as f64);
                scale *= 1.0 - eta * lambda;
                if scale < 1e-9 {
                    for w in v.iter_mut() {
                        *w *= scale;
                    }
                    scale = 1.0;
                }
                let target = if y[i] == c { 1.0 } else { -1.0 };
                let mut dot = 0.0;
                for (j, val) in x[i].iter() {
                    dot += v[j as usize] * val;
                }
                if target * scale * dot < 1.0 {
                    let step = eta * target / scale;
                    for (j, val) in x[i].iter() {
                        v[j as usize] += step * val;
                    }
                }
            }
        }
        for w in v.iter_mut() {
            *w *= scale;
        }
        v
    });

    let mut weights = Vec::with_capacity(n_classes * dim);
    for row in rows {
        weights.extend(row);
    }
    SvmModel { weights }
}

impl SvmModel {
    /// Raw one-vs-rest margins; not a probability distribution.
    pub(crate) fn predict_scores(&self, x: &SparseVector, n_classes: usize) -> Vec<f64> {
        class_logits(&self.weights, None, x, n_classes)
    }
}
