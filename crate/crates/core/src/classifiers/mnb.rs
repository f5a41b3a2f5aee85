//! Multinomial naive Bayes with Laplace smoothing.

use serde::{Deserialize, Serialize};

use crate::features::SparseVector;

use super::stable_softmax;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MnbModel {
    /// `ln P(term j | class c)`; per class these exponentiate and sum to 1.
    pub(crate) feature_log_prob: Vec<Vec<f64>>,
    pub(crate) log_prior: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MnbParams {
    pub alpha: f64,
}

impl Default for MnbParams {
    fn default() -> Self {
        MnbParams { alpha: 1.0 }
    }
}

pub(crate) fn train(
    params: &MnbParams,
    x: &[SparseVector],
    y: &[usize],
    n_classes: usize,
) -> MnbModel {
    let dim = x[0].dim();
    let n = x.len() as f64;
    let alpha = params.alpha;

    let mut class_count = vec![0usize; n_classes];
    let mut feature_count = vec![vec![0.0f64; dim]; n_classes];
    let mut class_total = vec![0.0f64; n_classes];
    for (vec, &cls) in x.iter().zip(y) {
        class_count[cls] += 1;
        for (j, v) in vec.iter() {
            feature_count[cls][j as usize] += v;
            class_total[cls] += v;
        }
    }

    let mut feature_log_prob = vec![vec![0.0f64; dim]; n_classes];
    let mut log_prior = vec![f64::NEG_INFINITY; n_classes];
    for c in 0..n_classes {
        if class_count[c] == 0 {
            // Keep a uniform term distribution for classes absent from the
            // training set; the -inf prior removes them from the posterior.
            let uniform = (1.0 / dim as f64).ln();
            feature_log_prob[c].fill(uniform);
            continue;
        }
        log_prior[c] = (class_count[c] as f64 / n).ln();
        let denom = (class_total[c] + alpha * dim as f64).ln();
        for (lp, count) in feature_log_prob[c].iter_mut().zip(&feature_count[c]) {
            *lp = (count + alpha).ln() - denom;
        }
    }

    MnbModel {
        feature_log_prob,
        log_prior,
    }
}

impl MnbModel {
    pub(crate) fn predict_scores(&self, x: &SparseVector) -> Vec<f64> {
        let joint: Vec<f64> = self
            .log_prior
            .iter()
            .enumerate()
            .map(|(c, &prior)| {
                if prior == f64::NEG_INFINITY {
                    return f64::NEG_INFINITY;
                }
                let mut ll = prior;
                for (j, v) in x.iter() {
                    ll += v * self.feature_log_prob[c][j as usize];
                }
                ll
            })
            .collect();
        stable_softmax(&joint)
    }
}
