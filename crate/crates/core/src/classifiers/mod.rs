//! The eight classifiers over sparse feature vectors, behind one config /
//! train / predict surface.
//!
//! Probabilistic algorithms (everything except the SVM) return normalized
//! class distributions from [`TrainedModel::predict_scores`]; the SVM
//! returns raw one-vs-rest margins. [`TrainedModel::predict_label`] is the
//! argmax with ties broken toward the lowest class index.

mod gnb;
mod knn;
mod linear;
pub mod mlp;
mod mnb;
mod tree;

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::SparseVector;
use crate::multilabel::MultiLabelModel;

pub use gnb::{GnbModel, GnbParams};
pub use knn::{KnnModel, KnnParams};
pub use linear::{LrModel, LrParams, SvmModel, SvmParams};
pub use mlp::{MlpModel, MlpParams};
pub use mnb::{MnbModel, MnbParams};
pub use tree::{DtParams, FeatureSubset, ForestModel, RfParams, TreeModel, TreeNode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Gnb,
    Mnb,
    Dt,
    Rf,
    Lr,
    Svm,
    Knn,
    Mlp,
}

pub const ALL_ALGORITHMS: [Algorithm; 8] = [
    Algorithm::Gnb,
    Algorithm::Mnb,
    Algorithm::Dt,
    Algorithm::Rf,
    Algorithm::Lr,
    Algorithm::Svm,
    Algorithm::Knn,
    Algorithm::Mlp,
];

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Gnb => "gnb",
            Algorithm::Mnb => "mnb",
            Algorithm::Dt => "dt",
            Algorithm::Rf => "rf",
            Algorithm::Lr => "lr",
            Algorithm::Svm => "svm",
            Algorithm::Knn => "knn",
            Algorithm::Mlp => "mlp",
        }
    }

    /// Name used in result tables, e.g. `MLP+TFIDF`.
    pub fn table_name(self) -> &'static str {
        match self {
            Algorithm::Gnb => "GNB",
            Algorithm::Mnb => "MNB",
            Algorithm::Dt => "DT",
            Algorithm::Rf => "RF",
            Algorithm::Lr => "LR",
            Algorithm::Svm => "SVM",
            Algorithm::Knn => "KNN",
            Algorithm::Mlp => "MLP",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gnb" => Ok(Algorithm::Gnb),
            "mnb" => Ok(Algorithm::Mnb),
            "dt" => Ok(Algorithm::Dt),
            "rf" => Ok(Algorithm::Rf),
            "lr" => Ok(Algorithm::Lr),
            "svm" => Ok(Algorithm::Svm),
            "knn" => Ok(Algorithm::Knn),
            "mlp" => Ok(Algorithm::Mlp),
            other => Err(Error::InvalidConfig(format!("unknown algorithm {other:?}"))),
        }
    }

    /// True when predict_scores returns a normalized distribution.
    pub fn is_probabilistic(self) -> bool {
        self != Algorithm::Svm
    }

    /// Discriminative algorithms refuse single-class training sets.
    fn requires_two_classes(self) -> bool {
        matches!(self, Algorithm::Lr | Algorithm::Svm | Algorithm::Mlp)
    }
}

/// Per-algorithm hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "lowercase")]
pub enum AlgoParams {
    Gnb(GnbParams),
    Mnb(MnbParams),
    Dt(DtParams),
    Rf(RfParams),
    Lr(LrParams),
    Svm(SvmParams),
    Knn(KnnParams),
    Mlp(MlpParams),
}

impl AlgoParams {
    pub fn defaults_for(algorithm: Algorithm) -> Self {
        match algorithm {
            Algorithm::Gnb => AlgoParams::Gnb(GnbParams::default()),
            Algorithm::Mnb => AlgoParams::Mnb(MnbParams::default()),
            Algorithm::Dt => AlgoParams::Dt(DtParams::default()),
            Algorithm::Rf => AlgoParams::Rf(RfParams::default()),
            Algorithm::Lr => AlgoParams::Lr(LrParams::default()),
            Algorithm::Svm => AlgoParams::Svm(SvmParams::default()),
            Algorithm::Knn => AlgoParams::Knn(KnnParams::default()),
            Algorithm::Mlp => AlgoParams::Mlp(MlpParams::default()),
        }
    }

    fn algorithm(&self) -> Algorithm {
        match self {
            AlgoParams::Gnb(_) => Algorithm::Gnb,
            AlgoParams::Mnb(_) => Algorithm::Mnb,
            AlgoParams::Dt(_) => Algorithm::Dt,
            AlgoParams::Rf(_) => Algorithm::Rf,
            AlgoParams::Lr(_) => Algorithm::Lr,
            AlgoParams::Svm(_) => Algorithm::Svm,
            AlgoParams::Knn(_) => Algorithm::Knn,
            AlgoParams::Mlp(_) => Algorithm::Mlp,
        }
    }
}

/// Training configuration: algorithm, seed, and hyperparameters. The
/// hyperparameters are recorded in every saved model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub params: AlgoParams,
}

impl ModelConfig {
    pub fn new(algorithm: Algorithm, seed: u64) -> Self {
        ModelConfig {
            algorithm,
            seed,
            params: AlgoParams::defaults_for(algorithm),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.params.algorithm() != self.algorithm {
            return Err(Error::InvalidConfig(format!(
                "hyperparameters are for {}, config says {}",
                self.params.algorithm().as_str(),
                self.algorithm.as_str()
            )));
        }
        Ok(())
    }
}

/// Scores per class: probabilities for probabilistic algorithms, raw
/// margins for the SVM.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassScores {
    pub scores: Vec<f64>,
}

impl ClassScores {
    pub fn argmax(&self) -> usize {
        argmax_lowest(&self.scores)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
enum ModelKind {
    Gnb(GnbModel),
    Mnb(MnbModel),
    Dt(TreeModel),
    Rf(ForestModel),
    Lr(LrModel),
    Svm(SvmModel),
    Knn(KnnModel),
    Mlp(MlpModel),
}

/// A fitted classifier. Immutable after training; prediction is pure and
/// safe for concurrent callers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    config: ModelConfig,
    n_classes: usize,
    dim: usize,
    kind: ModelKind,
}

impl TrainedModel {
    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn algorithm(&self) -> Algorithm {
        self.config.algorithm
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// One score per class; a normalized distribution except for the SVM.
    pub fn predict_scores(&self, x: &SparseVector) -> Result<ClassScores> {
        if x.dim() != self.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                found: x.dim(),
            });
        }
        let scores = match &self.kind {
            ModelKind::Gnb(m) => m.predict_scores(x),
            ModelKind::Mnb(m) => m.predict_scores(x),
            ModelKind::Dt(m) => m.predict_scores(x),
            ModelKind::Rf(m) => m.predict_scores(x, self.n_classes),
            ModelKind::Lr(m) => m.predict_scores(x, self.n_classes),
            ModelKind::Svm(m) => m.predict_scores(x, self.n_classes),
            ModelKind::Knn(m) => m.predict_scores(x, self.n_classes),
            ModelKind::Mlp(m) => m.predict_scores(x),
        };
        Ok(ClassScores { scores })
    }

    /// Argmax of the scores; exact ties go to the lowest class index.
    pub fn predict_label(&self, x: &SparseVector) -> Result<usize> {
        Ok(self.predict_scores(x)?.argmax())
    }

    /// Positive-class score of a binary model, suitable for thresholding:
    /// the class-1 probability, or softmaxed margins for the SVM.
    pub fn positive_score(&self, x: &SparseVector) -> Result<f64> {
        if self.n_classes != 2 {
            return Err(Error::NotBinary {
                expected: 2,
                found: self.n_classes,
            });
        }
        let scores = self.predict_scores(x)?.scores;
        if self.config.algorithm.is_probabilistic() {
            Ok(scores[1])
        } else {
            Ok(stable_softmax(&scores)[1])
        }
    }
}

/// Trains `config.algorithm` on the given vectors and class indices.
///
/// `n_classes` fixes the score dimension even when some class is absent
/// from the training set. Training is deterministic given the seed.
pub fn train(
    config: &ModelConfig,
    x: &[SparseVector],
    y: &[usize],
    n_classes: usize,
) -> Result<TrainedModel> {
    config.validate()?;
    if x.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let dim = x[0].dim();
    for vec in x {
        if vec.dim() != dim {
            return Err(Error::DimMismatch {
                expected: dim,
                found: vec.dim(),
            });
        }
    }
    if let Some(&bad) = y.iter().find(|&&c| c >= n_classes) {
        return Err(Error::ClassOutOfRange {
            index: bad,
            n_classes,
        });
    }
    if config.algorithm.requires_two_classes() {
        let distinct: HashSet<usize> = y.iter().copied().collect();
        if distinct.len() < 2 {
            return Err(Error::SingleClass {
                algorithm: config.algorithm.as_str().to_string(),
            });
        }
    }
    if config.algorithm == Algorithm::Mnb {
        for vec in x {
            if vec.iter().any(|(_, v)| v < 0.0) {
                return Err(Error::NegativeWeight);
            }
        }
    }

    let kind = match &config.params {
        AlgoParams::Gnb(p) => ModelKind::Gnb(gnb::train(p, x, y, n_classes)),
        AlgoParams::Mnb(p) => ModelKind::Mnb(mnb::train(p, x, y, n_classes)),
        AlgoParams::Dt(p) => ModelKind::Dt(tree::train_tree(p, x, y, n_classes)),
        AlgoParams::Rf(p) => ModelKind::Rf(tree::train_forest(p, x, y, n_classes, config.seed)),
        AlgoParams::Lr(p) => ModelKind::Lr(linear::train_lr(p, x, y, n_classes)),
        AlgoParams::Svm(p) => ModelKind::Svm(linear::train_svm(p, x, y, n_classes, config.seed)),
        AlgoParams::Knn(p) => ModelKind::Knn(knn::train(p, x, y)),
        AlgoParams::Mlp(p) => ModelKind::Mlp(mlp::train(p, x, y, n_classes, config.seed)),
    };

    Ok(TrainedModel {
        config: config.clone(),
        n_classes,
        dim,
        kind,
    })
}

/// Elementwise `max(0, a)`.
pub fn relu(a: &[f64]) -> Vec<f64> {
    a.iter().map(|&v| v.max(0.0)).collect()
}

/// Index of the largest score; exact ties go to the lowest index.
pub fn argmax_lowest(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

/// Softmax via log-sum-exp; `-inf` entries map to probability zero.
pub(crate) fn stable_softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return vec![1.0 / logits.len() as f64; logits.len()];
    }
    let exps: Vec<f64> = logits.iter().map(|&l| (l - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

/// Splitmix-style stream separation for per-item rngs.
pub(crate) fn derive_seed(base: u64, index: u64) -> u64 {
    base.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Adam optimizer state for one parameter group.
#[derive(Debug, Clone)]
pub(crate) struct AdamState {
    m: Vec<f64>,
    v: Vec<f64>,
    beta1: f64,
    beta2: f64,
    epsilon: f64,
}

impl AdamState {
    pub(crate) fn new(len: usize) -> Self {
        Self::with_betas(len, 0.9, 0.999, 1e-8)
    }

    pub(crate) fn with_betas(len: usize, beta1: f64, beta2: f64, epsilon: f64) -> Self {
        AdamState {
            m: vec![0.0; len],
            v: vec![0.0; len],
            beta1,
            beta2,
            epsilon,
        }
    }

    /// One bias-corrected Adam update; `t` counts steps from 1.
    pub(crate) fn step(&mut self, params: &mut [f64], grads: &[f64], t: usize, lr: f64) {
        let correction1 = 1.0 - self.beta1.powi(t as i32);
        let correction2 = 1.0 - self.beta2.powi(t as i32);
        for i in 0..params.len() {
            let g = grads[i];
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * g;
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * g * g;
            let m_hat = self.m[i] / correction1;
            let v_hat = self.v[i] / correction2;
            params[i] -= lr * m_hat / (v_hat.sqrt() + self.epsilon);
        }
    }
}

/// On-disk model file: a single- or multi-label model plus the vocabulary
/// hash it was trained against and (for single-label) the class names.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SavedModelFile {
    #[serde(rename = "single-label")]
    Single {
        format_version: u32,
        labels: Vec<String>,
        vocab_hash: String,
        model: TrainedModel,
    },
    #[serde(rename = "multi-label")]
    Multi {
        format_version: u32,
        vocab_hash: String,
        model: MultiLabelModel,
    },
}

impl SavedModelFile {
    pub fn single(model: TrainedModel, labels: Vec<String>, vocab_hash: String) -> Self {
        SavedModelFile::Single {
            format_version: crate::corpus::FORMAT_VERSION,
            labels,
            vocab_hash,
            model,
        }
    }

    pub fn multi(model: MultiLabelModel, vocab_hash: String) -> Self {
        SavedModelFile::Multi {
            format_version: crate::corpus::FORMAT_VERSION,
            vocab_hash,
            model,
        }
    }

    pub fn vocab_hash(&self) -> &str {
        match self {
            SavedModelFile::Single { vocab_hash, .. } => vocab_hash,
            SavedModelFile::Multi { vocab_hash, .. } => vocab_hash,
        }
    }

    /// Refuses a vocabulary whose content hash differs from the one this
    /// model was trained against.
    pub fn verify_vocabulary(
        &self,
        vocab: &crate::features::Vocabulary,
        normalization: &crate::textnorm::NormalizationConfig,
    ) -> Result<()> {
        let actual = crate::features::vocabulary_hash(vocab, normalization);
        if actual != self.vocab_hash() {
            return Err(Error::VocabHashMismatch {
                expected: self.vocab_hash().to_string(),
                found: actual,
            });
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string(self).expect("model serializes");
        std::fs::write(path, json).map_err(|e| Error::io(path.display().to_string(), e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        let file: SavedModelFile =
            serde_json::from_str(&text).map_err(|e| Error::json(path.display().to_string(), e))?;
        let version = match &file {
            SavedModelFile::Single { format_version, .. } => *format_version,
            SavedModelFile::Multi { format_version, .. } => *format_version,
        };
        if version != crate::corpus::FORMAT_VERSION {
            return Err(Error::FormatVersion {
                expected: crate::corpus::FORMAT_VERSION,
                found: version,
            });
        }
        Ok(file)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sv(dim: usize, entries: &[(u32, f64)]) -> SparseVector {
        SparseVector::from_entries(dim, entries.to_vec()).unwrap()
    }

    fn toy() -> (Vec<SparseVector>, Vec<usize>) {
        let x = vec![
            sv(3, &[(0, 2.0)]),
            sv(3, &[(0, 1.0), (2, 0.5)]),
            sv(3, &[(1, 2.0)]),
            sv(3, &[(1, 1.0), (2, 0.5)]),
        ];
        let y = vec![0, 0, 1, 1];
        (x, y)
    }

    #[test]
    fn relu_matches_definition() {
        assert_eq!(relu(&[-2.0]), vec![0.0]);
        assert_eq!(relu(&[3.5]), vec![3.5]);
        assert_eq!(relu(&[0.0]), vec![0.0]);
        assert_eq!(relu(&[-1.0, 0.5, -0.2]), vec![0.0, 0.5, 0.0]);
    }

    #[test]
    fn argmax_breaks_ties_toward_lowest_index() {
        assert_eq!(argmax_lowest(&[0.2, 0.5, 0.3]), 1);
        assert_eq!(argmax_lowest(&[0.5, 0.5]), 0);
        assert_eq!(argmax_lowest(&[1.0]), 0);
    }

    #[test]
    fn predict_label_is_argmax_of_scores() {
        let (x, y) = toy();
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for algorithm in ALL_ALGORITHMS {
            let model = train(&ModelConfig::new(algorithm, 5), &x, &y, 2).unwrap();
            for _ in 0..500 {
                let mut entries: Vec<(u32, f64)> = Vec::new();
                for j in 0..3u32 {
                    if rng.random::<f64>() < 0.6 {
                        entries.push((j, rng.random::<f64>() * 2.0));
                    }
                }
                let q = sv(3, &entries);
                let scores = model.predict_scores(&q).unwrap();
                assert_eq!(
                    model.predict_label(&q).unwrap(),
                    argmax_lowest(&scores.scores)
                );
            }
        }
    }

    #[test]
    fn probabilistic_scores_sum_to_one() {
        let (x, y) = toy();
        for algorithm in ALL_ALGORITHMS {
            if !algorithm.is_probabilistic() {
                continue;
            }
            let model = train(&ModelConfig::new(algorithm, 1), &x, &y, 2).unwrap();
            let scores = model.predict_scores(&x[0]).unwrap().scores;
            let total: f64 = scores.iter().sum();
            assert!(
                (total - 1.0).abs() < 1e-9,
                "{}: sum {total}",
                algorithm.as_str()
            );
            assert!(scores.iter().all(|&s| (0.0..=1.0).contains(&s)));
        }
    }

    #[test]
    fn discriminative_algorithms_reject_single_class() {
        let x = vec![sv(2, &[(0, 1.0)]), sv(2, &[(1, 1.0)])];
        let y = vec![0, 0];
        for algorithm in [Algorithm::Lr, Algorithm::Svm, Algorithm::Mlp] {
            assert!(matches!(
                train(&ModelConfig::new(algorithm, 0), &x, &y, 2),
                Err(Error::SingleClass { .. })
            ));
        }
        // Generative / vote-based algorithms accept it.
        assert!(train(&ModelConfig::new(Algorithm::Gnb, 0), &x, &y, 2).is_ok());
    }

    #[test]
    fn mnb_rejects_negative_weights() {
        let x = vec![sv(1, &[(0, -1.0)]), sv(1, &[(0, 1.0)])];
        let y = vec![0, 1];
        assert!(matches!(
            train(&ModelConfig::new(Algorithm::Mnb, 0), &x, &y, 2),
            Err(Error::NegativeWeight)
        ));
    }

    #[test]
    fn train_validates_shapes() {
        let x = vec![sv(2, &[(0, 1.0)])];
        assert!(matches!(
            train(&ModelConfig::new(Algorithm::Gnb, 0), &[], &[], 2),
            Err(Error::EmptyTrainingSet)
        ));
        assert!(matches!(
            train(&ModelConfig::new(Algorithm::Gnb, 0), &x, &[0, 1], 2),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            train(&ModelConfig::new(Algorithm::Gnb, 0), &x, &[5], 2),
            Err(Error::ClassOutOfRange { .. })
        ));
        let ragged = vec![sv(2, &[(0, 1.0)]), sv(3, &[(1, 1.0)])];
        assert!(matches!(
            train(&ModelConfig::new(Algorithm::Gnb, 0), &ragged, &[0, 1], 2),
            Err(Error::DimMismatch { .. })
        ));
        let model = train(&ModelConfig::new(Algorithm::Gnb, 0), &x, &[0], 2).unwrap();
        assert!(matches!(
            model.predict_scores(&sv(3, &[])),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn knn_self_query_with_k1_is_perfect() {
        let (x, y) = toy();
        let mut config = ModelConfig::new(Algorithm::Knn, 0);
        config.params = AlgoParams::Knn(KnnParams { k: 1 });
        let model = train(&config, &x, &y, 2).unwrap();
        for (vec, &cls) in x.iter().zip(&y) {
            assert_eq!(model.predict_label(vec).unwrap(), cls);
            assert_eq!(model.predict_scores(vec).unwrap().scores[cls], 1.0);
        }
    }

    #[test]
    fn training_twice_serializes_identically() {
        let (x, y) = toy();
        for algorithm in ALL_ALGORITHMS {
            let config = ModelConfig::new(algorithm, 1234);
            let a = train(&config, &x, &y, 2).unwrap();
            let b = train(&config, &x, &y, 2).unwrap();
            assert_eq!(
                serde_json::to_string(&a).unwrap(),
                serde_json::to_string(&b).unwrap(),
                "{} not byte-deterministic",
                algorithm.as_str()
            );
        }
    }

    #[test]
    fn saved_model_round_trips_with_identical_predictions() {
        let (x, y) = toy();
        let config = ModelConfig::new(Algorithm::Mlp, 3);
        let model = train(&config, &x, &y, 2).unwrap();
        let file = SavedModelFile::single(model.clone(), vec!["A".into(), "B".into()], "h".into());
        let tmp = tempfile::NamedTempFile::new().unwrap();
        file.save(tmp.path()).unwrap();
        let loaded = SavedModelFile::load(tmp.path()).unwrap();
        let SavedModelFile::Single { model: reloaded, .. } = loaded else {
            panic!("expected single-label file");
        };
        for vec in &x {
            assert_eq!(
                model.predict_scores(vec).unwrap(),
                reloaded.predict_scores(vec).unwrap()
            );
        }
    }
}
