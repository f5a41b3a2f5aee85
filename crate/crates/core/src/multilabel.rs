//! Binary-relevance multi-label classification: one independent binary
//! classifier per schema label, thresholded positive-class scores.

use serde::{Deserialize, Serialize};

use crate::classifiers::{train, ModelConfig, TrainedModel};
use crate::corpus::LabelSchema;
use crate::error::{Error, Result};
use crate::exec;
use crate::features::SparseVector;
use crate::metrics::{self, MultiLabelReport};

/// Binary membership flags over the schema's labels, in schema order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelVector {
    bits: Vec<bool>,
}

impl LabelVector {
    pub fn zeros(len: usize) -> Self {
        LabelVector {
            bits: vec![false; len],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        LabelVector { bits }
    }

    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut bits = vec![false; len];
        for &i in indices {
            bits[i] = true;
        }
        LabelVector { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, index: usize) -> bool {
        self.bits[index]
    }

    pub fn set(&mut self, index: usize, value: bool) {
        self.bits[index] = value;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn to_indices(&self) -> Vec<usize> {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect()
    }
}

/// One binary classifier per label plus the decision threshold.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MultiLabelModel {
    models: Vec<TrainedModel>,
    threshold: f64,
    schema: LabelSchema,
}

impl MultiLabelModel {
    pub fn schema(&self) -> &LabelSchema {
        &self.schema
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn models(&self) -> &[TrainedModel] {
        &self.models
    }

    pub fn dim(&self) -> usize {
        self.models[0].dim()
    }

    /// Positive-class score per label (probability for probabilistic base
    /// models; softmaxed margins for SVM).
    pub fn predict_scores(&self, x: &SparseVector) -> Result<Vec<f64>> {
        self.models.iter().map(|m| m.positive_score(x)).collect()
    }

    /// Thresholds each label's positive score independently; an all-zero
    /// vector is valid output (no label cleared the threshold).
    pub fn predict_label_vector(&self, x: &SparseVector) -> Result<LabelVector> {
        let scores = self.predict_scores(x)?;
        Ok(LabelVector::from_bits(
            scores.iter().map(|&s| s >= self.threshold).collect(),
        ))
    }

    /// Per-label fraction of test documents whose predicted bit matches the
    /// true bit.
    pub fn per_label_accuracy(
        &self,
        x_test: &[SparseVector],
        y_test: &[LabelVector],
    ) -> Result<Vec<f64>> {
        if x_test.is_empty() {
            return Err(Error::EmptyInput);
        }
        if x_test.len() != y_test.len() {
            return Err(Error::LengthMismatch {
                left: x_test.len(),
                right: y_test.len(),
            });
        }
        let predicted = self.predict_all(x_test)?;
        let n_labels = self.schema.len();
        let mut correct = vec![0usize; n_labels];
        for (pred, truth) in predicted.iter().zip(y_test) {
            for (l, slot) in correct.iter_mut().enumerate() {
                if pred.get(l) == truth.get(l) {
                    *slot += 1;
                }
            }
        }
        Ok(correct
            .into_iter()
            .map(|c| c as f64 / x_test.len() as f64)
            .collect())
    }

    /// Predicts label vectors for a batch (parallel across documents).
    pub fn predict_all(&self, xs: &[SparseVector]) -> Result<Vec<LabelVector>> {
        exec::par_map(xs.iter().collect(), |x| self.predict_label_vector(x))
            .into_iter()
            .collect()
    }

    /// Scores for a batch (parallel across documents).
    pub fn predict_scores_all(&self, xs: &[SparseVector]) -> Result<Vec<Vec<f64>>> {
        exec::par_map(xs.iter().collect(), |x| self.predict_scores(x))
            .into_iter()
            .collect()
    }

    /// Full multi-label evaluation report on a test set.
    pub fn evaluate(
        &self,
        x_test: &[SparseVector],
        y_test: &[LabelVector],
    ) -> Result<MultiLabelReport> {
        let predicted = self.predict_all(x_test)?;
        let scores = self.predict_scores_all(x_test)?;
        metrics::multilabel_report(y_test, &predicted, Some(&scores), &self.schema)
    }
}

/// Trains one binary model per schema label on targets `y[i].get(label)`.
///
/// Label `l`'s model uses seed `config.seed + l`, so per-label training can
/// run concurrently without changing results. Every label needs at least one
/// positive and one negative example.
pub fn train_binary_relevance(
    config: &ModelConfig,
    x: &[SparseVector],
    y: &[LabelVector],
    schema: &LabelSchema,
    threshold: f64,
) -> Result<MultiLabelModel> {
    if x.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::InvalidThreshold(threshold));
    }
    let n_labels = schema.len();
    for vec in y {
        if vec.len() != n_labels {
            return Err(Error::ShapeMismatch(format!(
                "label vector has {} bits, schema has {}",
                vec.len(),
                n_labels
            )));
        }
    }
    for l in 0..n_labels {
        let positives = y.iter().filter(|v| v.get(l)).count();
        if positives == 0 || positives == y.len() {
            return Err(Error::DegenerateLabel {
                label: schema.name(l).to_string(),
                missing: if positives == 0 { "positive" } else { "negative" }.to_string(),
            });
        }
    }

    let models: Result<Vec<TrainedModel>> = exec::par_map((0..n_labels).collect(), |l| {
        let mut label_config = config.clone();
        label_config.seed = config.seed.wrapping_add(l as u64);
        let targets: Vec<usize> = y.iter().map(|v| usize::from(v.get(l))).collect();
        train(&label_config, x, &targets, 2)
    })
    .into_iter()
    .collect();

    Ok(MultiLabelModel {
        models: models?,
        threshold,
        schema: schema.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifiers::Algorithm;
    use crate::corpus::LabelMode;

    fn vec2(dim: usize, entries: &[(u32, f64)]) -> SparseVector {
        SparseVector::from_entries(dim, entries.to_vec()).unwrap()
    }

    fn two_label_fixture() -> (Vec<SparseVector>, Vec<LabelVector>, LabelSchema) {
        // Feature 0 marks label A, feature 1 marks label B.
        let schema =
            LabelSchema::new(vec!["A".into(), "B".into()], LabelMode::MultiLabel).unwrap();
        let x = vec![
            vec2(2, &[(0, 1.0)]),
            vec2(2, &[(1, 1.0)]),
            vec2(2, &[(0, 1.0), (1, 1.0)]),
            vec2(2, &[(0, 0.0)]),
        ];
        let y = vec![
            LabelVector::from_bits(vec![true, false]),
            LabelVector::from_bits(vec![false, true]),
            LabelVector::from_bits(vec![true, true]),
            LabelVector::from_bits(vec![false, false]),
        ];
        (x, y, schema)
    }

    #[test]
    fn separable_labels_reach_perfect_training_accuracy() {
        let (x, y, schema) = two_label_fixture();
        let config = ModelConfig::new(Algorithm::Dt, 1);
        let model = train_binary_relevance(&config, &x, &y, &schema, 0.5).unwrap();
        let acc = model.per_label_accuracy(&x, &y).unwrap();
        assert_eq!(acc, vec![1.0, 1.0]);
    }

    #[test]
    fn degenerate_label_is_named_in_error() {
        let schema = LabelSchema::new(vec!["OnlyPos".into()], LabelMode::MultiLabel).unwrap();
        let x = vec![vec2(1, &[(0, 1.0)]), vec2(1, &[])];
        let y = vec![
            LabelVector::from_bits(vec![true]),
            LabelVector::from_bits(vec![true]),
        ];
        let config = ModelConfig::new(Algorithm::Mnb, 0);
        match train_binary_relevance(&config, &x, &y, &schema, 0.5) {
            Err(Error::DegenerateLabel { label, missing }) => {
                assert_eq!(label, "OnlyPos");
                assert_eq!(missing, "negative");
            }
            other => panic!("expected degenerate-label error, got {other:?}"),
        }
    }

    #[test]
    fn per_label_predictions_match_independent_binary_models() {
        let (x, y, schema) = two_label_fixture();
        let config = ModelConfig::new(Algorithm::Mnb, 9);
        let model = train_binary_relevance(&config, &x, &y, &schema, 0.5).unwrap();

        for l in 0..schema.len() {
            let mut solo_config = config.clone();
            solo_config.seed = config.seed + l as u64;
            let targets: Vec<usize> = y.iter().map(|v| usize::from(v.get(l))).collect();
            let solo = train(&solo_config, &x, &targets, 2).unwrap();
            for doc in &x {
                let joint = model.predict_label_vector(doc).unwrap().get(l);
                let alone = solo.positive_score(doc).unwrap() >= 0.5;
                assert_eq!(joint, alone);
            }
        }
    }

    #[test]
    fn raising_threshold_never_adds_labels() {
        let (x, y, schema) = two_label_fixture();
        let config = ModelConfig::new(Algorithm::Mnb, 5);
        let low = train_binary_relevance(&config, &x, &y, &schema, 0.3).unwrap();
        let high = train_binary_relevance(&config, &x, &y, &schema, 0.7).unwrap();
        for doc in &x {
            let loose = low.predict_label_vector(doc).unwrap();
            let strict = high.predict_label_vector(doc).unwrap();
            for l in 0..schema.len() {
                assert!(!(strict.get(l) && !loose.get(l)));
            }
        }
    }

    #[test]
    fn news_article_style_document_gets_its_three_labels() {
        // A document built from Economic, Politic, and News keywords must
        // come back with exactly those bits set.
        use crate::harness::{generate_synthetic_corpus, tokenize_corpus, SynthSpec};

        let spec = SynthSpec::multi_label(vec![25; 9], 0.2, 21);
        let (corpus, report) = generate_synthetic_corpus(&spec).unwrap();
        let schema = corpus.schema().clone();
        let norm = crate::textnorm::NormalizationConfig::default();
        let tokens = tokenize_corpus(&corpus, &norm);
        let vocab = crate::features::build_vocabulary(
            &tokens,
            &crate::features::VectorizerConfig {
                mode: crate::features::FeatureMode::Tfidf,
                min_df: 1,
                max_features: None,
            },
        )
        .unwrap();
        let x: Vec<SparseVector> = tokens
            .iter()
            .map(|t| crate::features::vectorize(t, &vocab))
            .collect();
        let y: Vec<LabelVector> = corpus
            .documents()
            .iter()
            .map(|d| LabelVector::from_indices(schema.len(), &d.labels))
            .collect();
        let model =
            train_binary_relevance(&ModelConfig::new(Algorithm::Mnb, 4), &x, &y, &schema, 0.5)
                .unwrap();

        let wanted = ["Economic", "Politic", "News"];
        let mut article = Vec::new();
        for name in wanted {
            let label = schema.index_of(name).unwrap();
            for keyword in report.keywords[label].iter().take(12) {
                article.push(keyword.clone());
            }
        }
        let doc = crate::features::vectorize(&article, &vocab);
        let bits = model.predict_label_vector(&doc).unwrap();
        for (l, name) in schema.names().iter().enumerate() {
            assert_eq!(
                bits.get(l),
                wanted.contains(&name.as_str()),
                "label {name} bit wrong"
            );
        }
    }

    #[test]
    fn label_order_permutation_is_equivariant() {
        // GNB training ignores the seed, so swapping the schema order must
        // swap the output bits exactly: no cross-label coupling.
        let (x, y, schema) = two_label_fixture();
        let config = ModelConfig::new(Algorithm::Gnb, 3);
        let forward = train_binary_relevance(&config, &x, &y, &schema, 0.5).unwrap();

        let schema_rev =
            LabelSchema::new(vec!["B".into(), "A".into()], LabelMode::MultiLabel).unwrap();
        let y_rev: Vec<LabelVector> = y
            .iter()
            .map(|v| LabelVector::from_bits(vec![v.get(1), v.get(0)]))
            .collect();
        let reversed = train_binary_relevance(&config, &x, &y_rev, &schema_rev, 0.5).unwrap();
        for doc in &x {
            let f = forward.predict_label_vector(doc).unwrap();
            let r = reversed.predict_label_vector(doc).unwrap();
            assert_eq!(f.get(0), r.get(1));
            assert_eq!(f.get(1), r.get(0));
        }
    }
}
