//! k-nearest-neighbour classification under cosine distance.

use serde::{Deserialize, Serialize};

use crate::features::SparseVector;

/// Lazy learner: stores the training set verbatim.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    pub(crate) k: usize,
    pub(crate) x: Vec<SparseVector>,
    pub(crate) y: Vec<usize>,
    pub(crate) norms: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct KnnParams {
    pub k: usize,
}

impl Default for KnnParams {
    fn default() -> Self {
        KnnParams { k: 5 }
    }
}

pub(crate) fn train(params: &KnnParams, x: &[SparseVector], y: &[usize]) -> KnnModel {
    KnnModel {
        k: params.k.max(1),
        x: x.to_vec(),
        y: y.to_vec(),
        norms: x.iter().map(SparseVector::norm).collect(),
    }
}

impl KnnModel {
    /// Vote fractions over the k nearest training vectors. Distance ties
    /// break toward the lower training index.
    pub(crate) fn predict_scores(&self, x: &SparseVector, n_classes: usize) -> Vec<f64> {
        let q_norm = x.norm();
        let mut dists: Vec<(f64, usize)> = self
            .x
            .iter()
            .enumerate()
            .map(|(i, train_vec)| {
                let denom = q_norm * self.norms[i];
                let cosine = if denom > 0.0 {
                    x.dot(train_vec) / denom
                } else {
                    0.0
                };
                (1.0 - cosine, i)
            })
            .collect();
        dists.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

        let k = self.k.min(dists.len());
        let mut scores = vec![0.0f64; n_classes];
        for &(_, i) in dists.iter().take(k) {
            scores[self.y[i]] += 1.0 / k as f64;
        }
        scores
    }
}
