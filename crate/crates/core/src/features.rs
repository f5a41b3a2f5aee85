//! Vocabulary construction and unigram/bigram/trigram/TF-IDF vectorization.
//!
//! Vocabularies are built from training documents only; prediction-time
//! terms missing from the vocabulary are dropped. Term indices are assigned
//! in lexicographic (byte) order, so the same training set always produces
//! the same vocabulary.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::textnorm::NormalizationConfig;

/// The four feature modes of the experiment grid. `Tfidf` operates over
/// unigram terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureMode {
    Unigram,
    Bigram,
    Trigram,
    Tfidf,
}

pub const ALL_FEATURE_MODES: [FeatureMode; 4] = [
    FeatureMode::Unigram,
    FeatureMode::Bigram,
    FeatureMode::Trigram,
    FeatureMode::Tfidf,
];

impl FeatureMode {
    /// Word n-gram order of the term stream (TF-IDF uses unigrams).
    pub fn ngram_order(self) -> usize {
        match self {
            FeatureMode::Unigram | FeatureMode::Tfidf => 1,
            FeatureMode::Bigram => 2,
            FeatureMode::Trigram => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FeatureMode::Unigram => "unigram",
            FeatureMode::Bigram => "bigram",
            FeatureMode::Trigram => "trigram",
            FeatureMode::Tfidf => "tfidf",
        }
    }

    /// Name used in result tables, e.g. `MLP+TFIDF`.
    pub fn table_name(self) -> &'static str {
        match self {
            FeatureMode::Unigram => "Unigram",
            FeatureMode::Bigram => "Bigram",
            FeatureMode::Trigram => "Trigram",
            FeatureMode::Tfidf => "TFIDF",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "unigram" => Ok(FeatureMode::Unigram),
            "bigram" => Ok(FeatureMode::Bigram),
            "trigram" => Ok(FeatureMode::Trigram),
            "tfidf" => Ok(FeatureMode::Tfidf),
            other => Err(Error::InvalidConfig(format!("unknown feature mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VectorizerConfig {
    pub mode: FeatureMode,
    pub min_df: usize,
    pub max_features: Option<usize>,
}

impl Default for VectorizerConfig {
    fn default() -> Self {
        VectorizerConfig {
            mode: FeatureMode::Unigram,
            min_df: 1,
            max_features: None,
        }
    }
}

/// Sparse non-negative feature vector: strictly increasing indices, no
/// stored zeros.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseVector {
    indices: Vec<u32>,
    values: Vec<f64>,
    dim: usize,
}

impl SparseVector {
    pub fn zeros(dim: usize) -> Self {
        SparseVector {
            indices: Vec::new(),
            values: Vec::new(),
            dim,
        }
    }

    /// Builds from (index, weight) pairs; pairs must be in strictly
    /// increasing index order, in range, and nonzero.
    pub fn from_entries(dim: usize, entries: Vec<(u32, f64)>) -> Result<Self> {
        let mut indices = Vec::with_capacity(entries.len());
        let mut values = Vec::with_capacity(entries.len());
        for (i, v) in entries {
            if i as usize >= dim {
                return Err(Error::DimMismatch {
                    expected: dim,
                    found: i as usize,
                });
            }
            if let Some(&last) = indices.last() {
                if i <= last {
                    return Err(Error::InvalidConfig(
                        "sparse entries must have strictly increasing indices".into(),
                    ));
                }
            }
            if v != 0.0 {
                indices.push(i);
                values.push(v);
            }
        }
        Ok(SparseVector {
            indices,
            values,
            dim,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.indices.iter().copied().zip(self.values.iter().copied())
    }

    pub fn get(&self, index: u32) -> f64 {
        match self.indices.binary_search(&index) {
            Ok(pos) => self.values[pos],
            Err(_) => 0.0,
        }
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut dense = vec![0.0; self.dim];
        for (i, v) in self.iter() {
            dense[i as usize] = v;
        }
        dense
    }

    /// Sparse dot product by index merge.
    pub fn dot(&self, other: &SparseVector) -> f64 {
        let mut acc = 0.0;
        let (mut a, mut b) = (0usize, 0usize);
        while a < self.indices.len() && b < other.indices.len() {
            match self.indices[a].cmp(&other.indices[b]) {
                std::cmp::Ordering::Less => a += 1,
                std::cmp::Ordering::Greater => b += 1,
                std::cmp::Ordering::Equal => {
                    acc += self.values[a] * other.values[b];
                    a += 1;
                    b += 1;
                }
            }
        }
        acc
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Term-to-index map with document frequencies, frozen over a training set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Vocabulary {
    mode: FeatureMode,
    /// Terms in index order (lexicographic).
    terms: Vec<String>,
    doc_freq: Vec<u32>,
    n_docs: usize,
    #[serde(skip)]
    index: HashMap<String, u32>,
}

impl PartialEq for Vocabulary {
    fn eq(&self, other: &Self) -> bool {
        self.mode == other.mode
            && self.terms == other.terms
            && self.doc_freq == other.doc_freq
            && self.n_docs == other.n_docs
    }
}

fn ngram_stream(tokens: &[String], order: usize) -> Vec<String> {
    if order == 1 {
        return tokens.to_vec();
    }
    if tokens.len() < order {
        return Vec::new();
    }
    tokens.windows(order).map(|w| w.join(" ")).collect()
}

impl Vocabulary {
    pub fn mode(&self) -> FeatureMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn doc_freq(&self) -> &[u32] {
        &self.doc_freq
    }

    pub fn index_of(&self, term: &str) -> Option<u32> {
        self.index.get(term).copied()
    }

    /// Smoothed inverse document frequency: `ln((1+N)/(1+df)) + 1`.
    pub fn idf(&self, term_index: u32) -> f64 {
        let n = self.n_docs as f64;
        let df = self.doc_freq[term_index as usize] as f64;
        ((1.0 + n) / (1.0 + df)).ln() + 1.0
    }

    fn rebuild_index(&mut self) {
        self.index = self
            .terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32))
            .collect();
    }
}

/// Builds a vocabulary over the n-gram stream of the training documents.
///
/// Document frequency counts documents, not occurrences. Terms with
/// `df >= min_df` survive; if `max_features` is set the survivors are capped
/// by (df descending, term ascending) before index assignment.
pub fn build_vocabulary(train_docs: &[Vec<String>], config: &VectorizerConfig) -> Result<Vocabulary> {
    if train_docs.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if train_docs.iter().all(|d| d.is_empty()) {
        return Err(Error::EmptyVocabulary(
            "all documents are empty after tokenization".into(),
        ));
    }
    let order = config.mode.ngram_order();
    let mut df: BTreeMap<String, u32> = BTreeMap::new();
    for tokens in train_docs {
        let stream = ngram_stream(tokens, order);
        let mut seen: Vec<&String> = stream.iter().collect();
        seen.sort_unstable();
        seen.dedup();
        for term in seen {
            *df.entry(term.clone()).or_insert(0) += 1;
        }
    }

    // BTreeMap iteration is already in lexicographic term order.
    let mut survivors: Vec<(String, u32)> = df
        .into_iter()
        .filter(|&(_, d)| d as usize >= config.min_df)
        .collect();
    if survivors.is_empty() {
        return Err(Error::EmptyVocabulary(format!(
            "no {} term reaches min_df={}",
            config.mode.as_str(),
            config.min_df
        )));
    }
    if let Some(cap) = config.max_features {
        survivors.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        survivors.truncate(cap);
        survivors.sort_by(|a, b| a.0.cmp(&b.0));
    }

    let mut vocab = Vocabulary {
        mode: config.mode,
        terms: survivors.iter().map(|(t, _)| t.clone()).collect(),
        doc_freq: survivors.iter().map(|&(_, d)| d).collect(),
        n_docs: train_docs.len(),
        index: HashMap::new(),
    };
    vocab.rebuild_index();
    Ok(vocab)
}

/// Raw term counts of a document over the vocabulary's n-gram stream.
/// Out-of-vocabulary terms are silently dropped.
pub fn vectorize_counts(tokens: &[String], vocab: &Vocabulary) -> SparseVector {
    let stream = ngram_stream(tokens, vocab.mode.ngram_order());
    let mut counts: HashMap<u32, f64> = HashMap::new();
    for term in &stream {
        if let Some(i) = vocab.index_of(term) {
            *counts.entry(i).or_insert(0.0) += 1.0;
        }
    }
    let mut entries: Vec<(u32, f64)> = counts.into_iter().collect();
    entries.sort_unstable_by_key(|&(i, _)| i);
    SparseVector::from_entries(vocab.len(), entries).expect("counts are valid entries")
}

/// TF-IDF weighting of a count vector: `tf * (ln((1+N)/(1+df)) + 1)`,
/// followed by L2 normalization (skipped for the zero vector).
pub fn tfidf_transform(counts: &SparseVector, vocab: &Vocabulary) -> SparseVector {
    let mut entries: Vec<(u32, f64)> = counts
        .iter()
        .map(|(i, tf)| (i, tf * vocab.idf(i)))
        .collect();
    let norm: f64 = entries.iter().map(|(_, w)| w * w).sum::<f64>().sqrt();
    if norm > 0.0 {
        for (_, w) in entries.iter_mut() {
            *w /= norm;
        }
    }
    SparseVector::from_entries(counts.dim(), entries).expect("tfidf entries are valid")
}

/// Vectorizes a document according to the vocabulary's mode (counts, or
/// TF-IDF-weighted counts when the vocabulary was built in TF-IDF mode).
pub fn vectorize(tokens: &[String], vocab: &Vocabulary) -> SparseVector {
    let counts = vectorize_counts(tokens, vocab);
    if vocab.mode == FeatureMode::Tfidf {
        tfidf_transform(&counts, vocab)
    } else {
        counts
    }
}

/// On-disk vocabulary: the term table plus the normalization flags the
/// training pipeline used, so prediction reproduces the same token stream.
#[derive(Serialize, Deserialize)]
struct VocabularyFile {
    format_version: u32,
    normalization: NormalizationConfig,
    vocabulary: Vocabulary,
}

/// Content hash (SHA-256) of a vocabulary plus its normalization contract.
/// Models store this hash; `predict` refuses a vocabulary that does not
/// match.
pub fn vocabulary_hash(vocab: &Vocabulary, normalization: &NormalizationConfig) -> String {
    let file = VocabularyFile {
        format_version: crate::corpus::FORMAT_VERSION,
        normalization: normalization.clone(),
        vocabulary: vocab.clone(),
    };
    let canonical = serde_json::to_string(&file).expect("vocabulary serializes");
    let digest = Sha256::digest(canonical.as_bytes());
    hex::encode(digest)
}

pub fn save_vocabulary(
    vocab: &Vocabulary,
    normalization: &NormalizationConfig,
    path: &Path,
) -> Result<()> {
    let file = VocabularyFile {
        format_version: crate::corpus::FORMAT_VERSION,
        normalization: normalization.clone(),
        vocabulary: vocab.clone(),
    };
    let json = serde_json::to_string(&file).expect("vocabulary serializes");
    std::fs::write(path, json).map_err(|e| Error::io(path.display().to_string(), e))
}

pub fn load_vocabulary(path: &Path) -> Result<(Vocabulary, NormalizationConfig)> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let file: VocabularyFile =
        serde_json::from_str(&text).map_err(|e| Error::json(path.display().to_string(), e))?;
    if file.format_version != crate::corpus::FORMAT_VERSION {
        return Err(Error::FormatVersion {
            expected: crate::corpus::FORMAT_VERSION,
            found: file.format_version,
        });
    }
    let mut vocab = file.vocabulary;
    vocab.rebuild_index();
    Ok((vocab, file.normalization))
}
