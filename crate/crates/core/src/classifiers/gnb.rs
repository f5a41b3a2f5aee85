//! Gaussian naive Bayes over dense expansions of sparse vectors.

use serde::{Deserialize, Serialize};

use crate::features::SparseVector;

use super::stable_softmax;

/// Per-class, per-feature Gaussian parameters. Variances already include the
/// smoothing epsilon (`var_smoothing_ratio` times the largest global feature
/// variance), so every stored variance is strictly positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GnbModel {
    pub(crate) means: Vec<Vec<f64>>,
    pub(crate) variances: Vec<Vec<f64>>,
    pub(crate) log_prior: Vec<f64>,
    /// Per class: sum over features of the log-likelihood of a zero value.
    /// Lets prediction touch only the nonzero entries of a query.
    pub(crate) zero_loglik: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GnbParams {
    pub var_smoothing_ratio: f64,
}

impl Default for GnbParams {
    fn default() -> Self {
        GnbParams {
            var_smoothing_ratio: 1e-9,
        }
    }
}

const LN_2PI: f64 = 1.837_877_066_409_345_5;

fn log_density(value: f64, mean: f64, variance: f64) -> f64 {
    -0.5 * ((LN_2PI + variance.ln()) + (value - mean) * (value - mean) / variance)
}

pub(crate) fn train(
    params: &GnbParams,
    x: &[SparseVector],
    y: &[usize],
    n_classes: usize,
) -> GnbModel {
    let n = x.len();
    let dim = x[0].dim();

    let mut class_count = vec![0usize; n_classes];
    let mut sum = vec![vec![0.0f64; dim]; n_classes];
    let mut sum_sq = vec![vec![0.0f64; dim]; n_classes];
    let mut global_sum = vec![0.0f64; dim];
    let mut global_sum_sq = vec![0.0f64; dim];

    for (vec, &cls) in x.iter().zip(y) {
        class_count[cls] += 1;
        for (j, v) in vec.iter() {
            sum[cls][j as usize] += v;
            sum_sq[cls][j as usize] += v * v;
            global_sum[j as usize] += v;
            global_sum_sq[j as usize] += v * v;
        }
    }

    // Epsilon scales with the data so that uniformly rescaling all features
    // rescales the smoothed variances too, keeping the argmax unchanged.
    let mut max_var = 0.0f64;
    for j in 0..dim {
        let mean = global_sum[j] / n as f64;
        let var = (global_sum_sq[j] / n as f64 - mean * mean).max(0.0);
        max_var = max_var.max(var);
    }
    let mut epsilon = params.var_smoothing_ratio * max_var;
    if epsilon <= 0.0 {
        epsilon = params.var_smoothing_ratio;
    }

    let mut means = vec![vec![0.0f64; dim]; n_classes];
    let mut variances = vec![vec![epsilon; dim]; n_classes];
    let mut log_prior = vec![f64::NEG_INFINITY; n_classes];
    for c in 0..n_classes {
        if class_count[c] == 0 {
            continue;
        }
        let nc = class_count[c] as f64;
        log_prior[c] = (nc / n as f64).ln();
        for j in 0..dim {
            let mean = sum[c][j] / nc;
            let var = (sum_sq[c][j] / nc - mean * mean).max(0.0);
            means[c][j] = mean;
            variances[c][j] = var + epsilon;
        }
    }

    let zero_loglik = (0..n_classes)
        .map(|c| {
            (0..dim)
                .map(|j| log_density(0.0, means[c][j], variances[c][j]))
                .sum()
        })
        .collect();

    GnbModel {
        means,
        variances,
        log_prior,
        zero_loglik,
    }
}

impl GnbModel {
    /// Posterior distribution over classes (softmax of joint log-likelihoods).
    pub(crate) fn predict_scores(&self, x: &SparseVector) -> Vec<f64> {
        let n_classes = self.log_prior.len();
        let mut joint = Vec::with_capacity(n_classes);
        for c in 0..n_classes {
            if self.log_prior[c] == f64::NEG_INFINITY {
                joint.push(f64::NEG_INFINITY);
                continue;
            }
            let mut ll = self.log_prior[c] + self.zero_loglik[c];
            for (j, v) in x.iter() {
                let j = j as usize;
                ll += log_density(v, self.means[c][j], self.variances[c][j])
                    - log_density(0.0, self.means[c][j], self.variances[c][j]);
            }
            joint.push(ll);
        }
        stable_softmax(&joint)
    }
}
