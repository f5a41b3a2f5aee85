//! Single-hidden-layer perceptron: ReLU activation, softmax output,
//! cross-entropy loss, Adam updates, seeded per-epoch shuffling.
//!
//! `batch_loss`, `batch_gradients`, and the flat parameter accessors exist
//! so the analytic gradients can be verified against central finite
//! differences; training uses the same accumulation code.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::features::SparseVector;

use super::{stable_softmax, AdamState};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpModel {
    pub(crate) hidden: usize,
    pub(crate) dim: usize,
    pub(crate) n_classes: usize,
    /// Input-to-hidden weights, `w1[j * hidden + h]` (feature-major).
    pub(crate) w1: Vec<f64>,
    pub(crate) b1: Vec<f64>,
    /// Hidden-to-output weights, `w2[h * n_classes + c]`.
    pub(crate) w2: Vec<f64>,
    pub(crate) b2: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MlpParams {
    pub hidden: usize,
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for MlpParams {
    fn default() -> Self {
        MlpParams {
            hidden: 20,
            epochs: 100,
            batch_size: 32,
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// Gradient buffers shaped like the model parameters.
#[derive(Debug, Clone)]
pub struct MlpGradients {
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: Vec<f64>,
}

impl MlpModel {
    /// Glorot-uniform initialization (`±sqrt(6 / (fan_in + fan_out))`),
    /// zero biases. Draw order is w1 then w2, feature-major.
    pub fn init(dim: usize, n_classes: usize, hidden: usize, rng: &mut ChaCha8Rng) -> Self {
        let bound1 = (6.0 / (dim + hidden) as f64).sqrt();
        let bound2 = (6.0 / (hidden + n_classes) as f64).sqrt();
        let draw = |rng: &mut ChaCha8Rng, bound: f64| (2.0 * rng.random::<f64>() - 1.0) * bound;
        let w1 = (0..dim * hidden).map(|_| draw(rng, bound1)).collect();
        let w2 = (0..hidden * n_classes).map(|_| draw(rng, bound2)).collect();
        MlpModel {
            hidden,
            dim,
            n_classes,
            w1,
            b1: vec![0.0; hidden],
            w2,
            b2: vec![0.0; n_classes],
        }
    }

    /// All-zero parameters; forward passes produce uniform softmax scores.
    pub fn zeroed(dim: usize, n_classes: usize, hidden: usize) -> Self {
        MlpModel {
            hidden,
            dim,
            n_classes,
            w1: vec![0.0; dim * hidden],
            b1: vec![0.0; hidden],
            w2: vec![0.0; hidden * n_classes],
            b2: vec![0.0; n_classes],
        }
    }

    pub fn param_count(&self) -> usize {
        self.w1.len() + self.b1.len() + self.w2.len() + self.b2.len()
    }

    /// Flat parameter access in w1, b1, w2, b2 order.
    pub fn param(&self, index: usize) -> f64 {
        let (slice, offset) = self.locate(index);
        match slice {
            0 => self.w1[offset],
            1 => self.b1[offset],
            2 => self.w2[offset],
            _ => self.b2[offset],
        }
    }

    pub fn set_param(&mut self, index: usize, value: f64) {
        let (slice, offset) = self.locate(index);
        match slice {
            0 => self.w1[offset] = value,
            1 => self.b1[offset] = value,
            2 => self.w2[offset] = value,
            _ => self.b2[offset] = value,
        }
    }

    fn locate(&self, index: usize) -> (u8, usize) {
        let mut i = index;
        if i < self.w1.len() {
            return (0, i);
        }
        i -= self.w1.len();
        if i < self.b1.len() {
            return (1, i);
        }
        i -= self.b1.len();
        if i < self.w2.len() {
            return (2, i);
        }
        (3, i - self.w2.len())
    }

    /// Hidden pre-activations for a sparse input.
    fn hidden_pre(&self, x: &SparseVector) -> Vec<f64> {
        let mut z1 = self.b1.clone();
        for (j, v) in x.iter() {
            let row = j as usize * self.hidden;
            for (h, z) in z1.iter_mut().enumerate() {
                *z += v * self.w1[row + h];
            }
        }
        z1
    }

    fn logits_from_hidden(&self, a1: &[f64]) -> Vec<f64> {
        let mut logits = self.b2.clone();
        for (h, &a) in a1.iter().enumerate() {
            if a != 0.0 {
                let row = h * self.n_classes;
                for (c, logit) in logits.iter_mut().enumerate() {
                    *logit += a * self.w2[row + c];
                }
            }
        }
        logits
    }

    pub(crate) fn predict_scores(&self, x: &SparseVector) -> Vec<f64> {
        let a1: Vec<f64> = self.hidden_pre(x).into_iter().map(|z| z.max(0.0)).collect();
        stable_softmax(&self.logits_from_hidden(&a1))
    }

    /// Mean cross-entropy of the batch.
    pub fn batch_loss(&self, x: &[SparseVector], y: &[usize]) -> f64 {
        let mut total = 0.0;
        for (vec, &cls) in x.iter().zip(y) {
            let a1: Vec<f64> = self.hidden_pre(vec).into_iter().map(|z| z.max(0.0)).collect();
            let logits = self.logits_from_hidden(&a1);
            let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let log_sum: f64 = logits.iter().map(|&l| (l - max).exp()).sum::<f64>().ln() + max;
            total += log_sum - logits[cls];
        }
        total / x.len() as f64
    }

    /// Analytic gradients of [`Self::batch_loss`] with respect to every
    /// parameter.
    pub fn batch_gradients(&self, x: &[SparseVector], y: &[usize]) -> MlpGradients {
        let mut grads = MlpGradients {
            w1: vec![0.0; self.w1.len()],
            b1: vec![0.0; self.b1.len()],
            w2: vec![0.0; self.w2.len()],
            b2: vec![0.0; self.b2.len()],
        };
        self.accumulate_batch(x, y, &mut grads);
        grads
    }

    /// Adds the batch's gradients into `grads` (which must start zeroed).
    fn accumulate_batch(&self, x: &[SparseVector], y: &[usize], grads: &mut MlpGradients) {
        let inv_b = 1.0 / x.len() as f64;
        let hidden = self.hidden;
        let n_classes = self.n_classes;
        for (vec, &cls) in x.iter().zip(y) {
            let z1 = self.hidden_pre(vec);
            let a1: Vec<f64> = z1.iter().map(|&z| z.max(0.0)).collect();
            let probs = stable_softmax(&self.logits_from_hidden(&a1));

            let mut dz2 = probs;
            dz2[cls] -= 1.0;
            for d in dz2.iter_mut() {
                *d *= inv_b;
            }

            for (c, &d) in dz2.iter().enumerate() {
                grads.b2[c] += d;
            }
            let mut dz1 = vec![0.0f64; hidden];
            for h in 0..hidden {
                let row = h * n_classes;
                if a1[h] != 0.0 {
                    for (c, &d) in dz2.iter().enumerate() {
                        grads.w2[row + c] += a1[h] * d;
                    }
                }
                if z1[h] > 0.0 {
                    let mut da = 0.0;
                    for (c, &d) in dz2.iter().enumerate() {
                        da += self.w2[row + c] * d;
                    }
                    dz1[h] = da;
                }
            }
            for (h, &d) in dz1.iter().enumerate() {
                grads.b1[h] += d;
            }
            for (j, v) in vec.iter() {
                let row = j as usize * hidden;
                for (h, &d) in dz1.iter().enumerate() {
                    if d != 0.0 {
                        grads.w1[row + h] += v * d;
                    }
                }
            }
        }
    }
}

pub(crate) fn train(
    params: &MlpParams,
    x: &[SparseVector],
    y: &[usize],
    n_classes: usize,
    seed: u64,
) -> MlpModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut model = MlpModel::init(x[0].dim(), n_classes, params.hidden.max(1), &mut rng);

    let mut adam_w1 = AdamState::with_betas(model.w1.len(), params.beta1, params.beta2, params.epsilon);
    let mut adam_b1 = AdamState::with_betas(model.b1.len(), params.beta1, params.beta2, params.epsilon);
    let mut adam_w2 = AdamState::with_betas(model.w2.len(), params.beta1, params.beta2, params.epsilon);
    let mut adam_b2 = AdamState::with_betas(model.b2.len(), params.beta1, params.beta2, params.epsilon);
    let mut grads = MlpGradients {
        w1: vec![0.0; model.w1.len()],
        b1: vec![0.0; model.b1.len()],
        w2: vec![0.0; model.w2.len()],
        b2: vec![0.0; model.b2.len()],
    };

    let mut order: Vec<usize> = (0..x.len()).collect();
    let batch_size = params.batch_size.max(1);
    let mut t = 0usize;
    for _ in 0..params.epochs {
        order.shuffle(&mut rng);
        for batch in order.chunks(batch_size) {
            let bx: Vec<SparseVector> = batch.iter().map(|&i| x[i].clone()).collect();
            let by: Vec<usize> = batch.iter().map(|&i| y[i]).collect();
            grads.w1.fill(0.0);
            grads.b1.fill(0.0);
            grads.w2.fill(0.0);
            grads.b2.fill(0.0);
            model.accumulate_batch(&bx, &by, &mut grads);
            t += 1;
            adam_w1.step(&mut model.w1, &grads.w1, t, params.learning_rate);
            adam_b1.step(&mut model.b1, &grads.b1, t, params.learning_rate);
            adam_w2.step(&mut model.w2, &grads.w2, t, params.learning_rate);
            adam_b2.step(&mut model.b2, &grads.b2, t, params.learning_rate);
        }
    }
    model
}
