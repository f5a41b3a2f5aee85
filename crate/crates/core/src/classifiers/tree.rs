//! CART decision trees (Gini impurity) and random forests built from them.
//!
//! Split search only visits features that are nonzero somewhere in the
//! node's samples; the implicit zero group is reconstructed from the node's
//! class counts. Candidate thresholds are midpoints between consecutive
//! distinct values. Gain ties break toward the lowest feature index, then
//! the lowest threshold. An impure node with any valid split is always
//! split, so an unlimited-depth tree memorizes duplicate-free training data.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::exec;
use crate::features::SparseVector;

use super::{argmax_lowest, derive_seed};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Leaf {
        /// Class fractions of the training samples that reached this leaf.
        scores: Vec<f64>,
    },
    Split {
        feature: u32,
        threshold: f64,
        left: u32,
        right: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeModel {
    pub(crate) nodes: Vec<TreeNode>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub(crate) trees: Vec<TreeModel>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct DtParams {
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
}

impl Default for DtParams {
    fn default() -> Self {
        DtParams {
            max_depth: None,
            min_samples_split: 2,
        }
    }
}

/// How many features each forest split considers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureSubset {
    Sqrt,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct RfParams {
    pub n_trees: usize,
    pub bootstrap: bool,
    pub feature_subset: FeatureSubset,
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
}

impl Default for RfParams {
    fn default() -> Self {
        RfParams {
            n_trees: 100,
            bootstrap: true,
            feature_subset: FeatureSubset::Sqrt,
            max_depth: None,
            min_samples_split: 2,
        }
    }
}

fn gini(counts: &[usize], total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let t = total as f64;
    1.0 - counts
        .iter()
        .map(|&c| {
            let p = c as f64 / t;
            p * p
        })
        .sum::<f64>()
}

struct TreeBuilder<'a> {
    x: &'a [SparseVector],
    y: &'a [usize],
    n_classes: usize,
    min_samples_split: usize,
    max_depth: Option<usize>,
    /// `Some((k, rng))` draws k candidate features per split (forest mode).
    subsample: Option<(usize, ChaCha8Rng)>,
    nodes: Vec<TreeNode>,
}

struct BestSplit {
    gain: f64,
    feature: u32,
    threshold: f64,
}

impl<'a> TreeBuilder<'a> {
    fn leaf(&mut self, counts: &[usize], total: usize) -> u32 {
        let scores = counts
            .iter()
            .map(|&c| c as f64 / total as f64)
            .collect();
        self.nodes.push(TreeNode::Leaf { scores });
        (self.nodes.len() - 1) as u32
    }

    fn grow(&mut self, samples: &[u32], depth: usize) -> u32 {
        let n = samples.len();
        let mut counts = vec![0usize; self.n_classes];
        for &s in samples {
            counts[self.y[s as usize]] += 1;
        }
        let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
        let depth_capped = self.max_depth.is_some_and(|d| depth >= d);
        if pure || n < self.min_samples_split || depth_capped {
            return self.leaf(&counts, n);
        }

        // Nonzero (value, sample) entries grouped per present feature;
        // BTreeMap keeps feature iteration in index order.
        let mut per_feature: BTreeMap<u32, Vec<(f64, u32)>> = BTreeMap::new();
        for &s in samples {
            for (j, v) in self.x[s as usize].iter() {
                per_feature.entry(j).or_default().push((v, s));
            }
        }

        let candidates: Vec<u32> = match &mut self.subsample {
            Some((k, rng)) => {
                let dim = self.x[0].dim();
                let mut drawn: Vec<u32> = rand::seq::index::sample(rng, dim, (*k).min(dim))
                    .into_iter()
                    .map(|i| i as u32)
                    .collect();
                drawn.sort_unstable();
                drawn.retain(|j| per_feature.contains_key(j));
                drawn
            }
            None => per_feature.keys().copied().collect(),
        };

        let mut best: Option<BestSplit> = None;
        for j in candidates {
            let entries = per_feature.get_mut(&j).expect("candidate is present");
            entries.sort_by(|a, b| a.0.total_cmp(&b.0));

            // Distinct value groups with per-class counts, including the
            // implicit zero group.
            let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
            let mut nonzero_counts = vec![0usize; self.n_classes];
            for &(v, s) in entries.iter() {
                let cls = self.y[s as usize];
                nonzero_counts[cls] += 1;
                match groups.last_mut() {
                    Some((gv, gc)) if *gv == v => gc[cls] += 1,
                    _ => {
                        let mut gc = vec![0usize; self.n_classes];
                        gc[cls] += 1;
                        groups.push((v, gc));
                    }
                }
            }
            if entries.len() < n {
                let zero_counts: Vec<usize> = counts
                    .iter()
                    .zip(&nonzero_counts)
                    .map(|(&all, &nz)| all - nz)
                    .collect();
                let pos = groups
                    .iter()
                    .position(|(v, _)| *v > 0.0)
                    .unwrap_or(groups.len());
                groups.insert(pos, (0.0, zero_counts));
            }
            if groups.len() < 2 {
                continue;
            }

            let node_gini = gini(&counts, n);
            let mut left_counts = vec![0usize; self.n_classes];
            let mut left_n = 0usize;
            for g in 0..groups.len() - 1 {
                for (lc, &gc) in left_counts.iter_mut().zip(&groups[g].1) {
                    *lc += gc;
                }
                left_n += groups[g].1.iter().sum::<usize>();
                let threshold = (groups[g].0 + groups[g + 1].0) / 2.0;
                if threshold <= groups[g].0 || threshold >= groups[g + 1].0 {
                    // Midpoint collapsed onto a value; the partition would
                    // not separate the groups.
                    continue;
                }
                let right_n = n - left_n;
                let right_counts: Vec<usize> = counts
                    .iter()
                    .zip(&left_counts)
                    .map(|(&all, &l)| all - l)
                    .collect();
                let weighted = (left_n as f64 * gini(&left_counts, left_n)
                    + right_n as f64 * gini(&right_counts, right_n))
                    / n as f64;
                let gain = node_gini - weighted;
                if best.as_ref().is_none_or(|b| gain > b.gain) {
                    best = Some(BestSplit {
                        gain,
                        feature: j,
                        threshold,
                    });
                }
            }
        }

        let Some(best) = best else {
            return self.leaf(&counts, n);
        };

        // Stable partition preserves sample order for the children.
        let mut left_samples = Vec::new();
        let mut right_samples = Vec::new();
        for &s in samples {
            if self.x[s as usize].get(best.feature) <= best.threshold {
                left_samples.push(s);
            } else {
                right_samples.push(s);
            }
        }
        debug_assert!(!left_samples.is_empty() && !right_samples.is_empty());

        self.nodes.push(TreeNode::Leaf { scores: Vec::new() });
        let index = (self.nodes.len() - 1) as u32;
        let left = self.grow(&left_samples, depth + 1);
        let right = self.grow(&right_samples, depth + 1);
        self.nodes[index as usize] = TreeNode::Split {
            feature: best.feature,
            threshold: best.threshold,
            left,
            right,
        };
        index
    }
}

fn build_tree(
    x: &[SparseVector],
    y: &[usize],
    n_classes: usize,
    max_depth: Option<usize>,
    min_samples_split: usize,
    samples: Vec<u32>,
    subsample: Option<(usize, ChaCha8Rng)>,
) -> TreeModel {
    let mut builder = TreeBuilder {
        x,
        y,
        n_classes,
        min_samples_split: min_samples_split.max(2),
        max_depth,
        subsample,
        nodes: Vec::new(),
    };
    let root = builder.grow(&samples, 0);
    debug_assert_eq!(root, 0);
    TreeModel {
        nodes: builder.nodes,
    }
}

pub(crate) fn train_tree(
    params: &DtParams,
    x: &[SparseVector],
    y: &[usize],
    n_classes: usize,
) -> TreeModel {
    let samples: Vec<u32> = (0..x.len() as u32).collect();
    build_tree(
        x,
        y,
        n_classes,
        params.max_depth,
        params.min_samples_split,
        samples,
        None,
    )
}

pub(crate) fn train_forest(
    params: &RfParams,
    x: &[SparseVector],
    y: &[usize],
    n_classes: usize,
    seed: u64,
) -> ForestModel {
    let n = x.len();
    let dim = x[0].dim();
    let k = ((dim as f64).sqrt().floor() as usize).max(1);

    let trees = exec::par_map((0..params.n_trees).collect::<Vec<usize>>(), |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, t as u64));
        let samples: Vec<u32> = if params.bootstrap {
            (0..n).map(|_| rng.random_range(0..n) as u32).collect()
        } else {
            (0..n as u32).collect()
        };
        let subsample = match params.feature_subset {
            FeatureSubset::Sqrt => Some((k, rng)),
            FeatureSubset::All => None,
        };
        build_tree(
            x,
            y,
            n_classes,
            params.max_depth,
            params.min_samples_split,
            samples,
            subsample,
        )
    });
    ForestModel { trees }
}

impl TreeModel {
    pub(crate) fn leaf_scores(&self, x: &SparseVector) -> &[f64] {
        let mut at = 0usize;
        loop {
            match &self.nodes[at] {
                TreeNode::Leaf { scores } => return scores,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if x.get(*feature) <= *threshold {
                        *left as usize
                    } else {
                        *right as usize
                    };
                }
            }
        }
    }

    pub(crate) fn predict_scores(&self, x: &SparseVector) -> Vec<f64> {
        self.leaf_scores(x).to_vec()
    }
}

impl ForestModel {
    /// Majority vote: each tree votes its leaf argmax; scores are vote
    /// fractions.
    pub(crate) fn predict_scores(&self, x: &SparseVector, n_classes: usize) -> Vec<f64> {
        let mut scores = vec![0.0f64; n_classes];
        let weight = 1.0 / self.trees.len() as f64;
        for tree in &self.trees {
            let vote = argmax_lowest(tree.leaf_scores(x));
            scores[vote] += weight;
        }
        scores
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(dim: usize, entries: &[(u32, f64)]) -> SparseVector {
        SparseVector::from_entries(dim, entries.to_vec()).unwrap()
    }

    fn xor_fixture() -> (Vec<SparseVector>, Vec<usize>) {
        let x = vec![
            sv(2, &[]),
            sv(2, &[(1, 1.0)]),
            sv(2, &[(0, 1.0)]),
            sv(2, &[(0, 1.0), (1, 1.0)]),
        ];
        let y = vec![0, 1, 1, 0];
        (x, y)
    }

    #[test]
    fn unlimited_depth_memorizes_xor() {
        // Every split of XOR data has zero Gini gain at the root; the tree
        // must still split and reach 100% training accuracy.
        let (x, y) = xor_fixture();
        let tree = train_tree(&DtParams::default(), &x, &y, 2);
        for (vec, &cls) in x.iter().zip(&y) {
            assert_eq!(argmax_lowest(&tree.predict_scores(vec)), cls);
        }
    }

    #[test]
    fn max_depth_zero_is_a_single_leaf() {
        let (x, y) = xor_fixture();
        let tree = train_tree(
            &DtParams {
                max_depth: Some(0),
                min_samples_split: 2,
            },
            &x,
            &y,
            2,
        );
        assert_eq!(tree.nodes.len(), 1);
        assert_eq!(tree.predict_scores(&x[0]), vec![0.5, 0.5]);
    }

    #[test]
    fn leaf_scores_are_class_fractions() {
        let x = vec![
            sv(1, &[(0, 1.0)]),
            sv(1, &[(0, 1.0)]),
            sv(1, &[(0, 5.0)]),
        ];
        let y = vec![0, 1, 1];
        let tree = train_tree(&DtParams::default(), &x, &y, 2);
        // value 5.0 isolates class 1; the low side keeps the 50/50 pair but
        // cannot be separated further (duplicate vectors).
        assert_eq!(tree.predict_scores(&sv(1, &[(0, 5.0)])), vec![0.0, 1.0]);
        assert_eq!(tree.predict_scores(&sv(1, &[(0, 1.0)])), vec![0.5, 0.5]);
    }

    #[test]
    fn single_tree_forest_without_bootstrap_equals_tree() {
        let (x, y) = xor_fixture();
        let params = RfParams {
            n_trees: 1,
            bootstrap: false,
            feature_subset: FeatureSubset::All,
            max_depth: None,
            min_samples_split: 2,
        };
        let forest = train_forest(&params, &x, &y, 2, 99);
        let tree = train_tree(&DtParams::default(), &x, &y, 2);
        assert_eq!(forest.trees[0], tree);
        for vec in &x {
            assert_eq!(
                argmax_lowest(&forest.predict_scores(vec, 2)),
                argmax_lowest(&tree.predict_scores(vec))
            );
        }
    }

    #[test]
    fn forest_training_is_deterministic_per_seed() {
        let (x, y) = xor_fixture();
        let params = RfParams {
            n_trees: 5,
            ..RfParams::default()
        };
        let a = train_forest(&params, &x, &y, 2, 3);
        let b = train_forest(&params, &x, &y, 2, 3);
        assert_eq!(a, b);
    }

    #[test]
    fn forest_votes_sum_to_one() {
        let (x, y) = xor_fixture();
        let params = RfParams {
            n_trees: 7,
            ..RfParams::default()
        };
        let forest = train_forest(&params, &x, &y, 2, 1);
        let scores = forest.predict_scores(&x[0], 2);
        assert!((scores.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
