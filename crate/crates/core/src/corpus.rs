//! Document/label data model, corpus files, statistics, and train/test splits.
//!
//! Corpus files are UTF-8 line-delimited JSON: the first line is a header
//! `{"format_version":1}`, every following line one record with fields `id`,
//! `text`, and `labels` (label names, not indices). Schema files are a single
//! JSON object with `format_version`, `mode`, and the ordered `names` list.

use std::collections::HashSet;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textnorm::{self, NormalizationConfig};

pub const FORMAT_VERSION: u32 = 1;

/// The eight single-label classes, in schema order.
pub const SINGLE_LABEL_NAMES: [&str; 8] = [
    "History",
    "Culture",
    "Economic",
    "Health",
    "Politic",
    "Scientific",
    "Sport",
    "Technology",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LabelMode {
    #[serde(rename = "single-label")]
    SingleLabel,
    #[serde(rename = "multi-label")]
    MultiLabel,
}

impl LabelMode {
    pub fn as_str(self) -> &'static str {
        match self {
            LabelMode::SingleLabel => "single-label",
            LabelMode::MultiLabel => "multi-label",
        }
    }
}

/// Ordered label list plus classification mode. The position of a name in
/// the list is its stable label index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SchemaRepr", into = "SchemaRepr")]
pub struct LabelSchema {
    names: Vec<String>,
    mode: LabelMode,
}

#[derive(Serialize, Deserialize)]
struct SchemaRepr {
    #[serde(default = "default_version")]
    format_version: u32,
    mode: LabelMode,
    names: Vec<String>,
}

fn default_version() -> u32 {
    FORMAT_VERSION
}

impl TryFrom<SchemaRepr> for LabelSchema {
    type Error = Error;
    fn try_from(repr: SchemaRepr) -> Result<Self> {
        if repr.format_version != FORMAT_VERSION {
            return Err(Error::FormatVersion {
                expected: FORMAT_VERSION,
                found: repr.format_version,
            });
        }
        LabelSchema::new(repr.names, repr.mode)
    }
}

impl From<LabelSchema> for SchemaRepr {
    fn from(schema: LabelSchema) -> Self {
        SchemaRepr {
            format_version: FORMAT_VERSION,
            mode: schema.mode,
            names: schema.names,
        }
    }
}

impl LabelSchema {
    pub fn new(names: Vec<String>, mode: LabelMode) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::InvalidSchema("no label names".into()));
        }
        let mut seen = HashSet::new();
        for name in &names {
            if name.is_empty() {
                return Err(Error::InvalidSchema("empty label name".into()));
            }
            if !seen.insert(name.clone()) {
                return Err(Error::InvalidSchema(format!("duplicate label {name:?}")));
            }
        }
        Ok(LabelSchema { names, mode })
    }

    /// The default 8-class single-label schema.
    pub fn single_label_default() -> Self {
        LabelSchema {
            names: SINGLE_LABEL_NAMES.iter().map(|s| s.to_string()).collect(),
            mode: LabelMode::SingleLabel,
        }
    }

    /// The default 9-label multi-label schema (the 8 classes plus News).
    pub fn multi_label_default() -> Self {
        let mut names: Vec<String> = SINGLE_LABEL_NAMES.iter().map(|s| s.to_string()).collect();
        names.push("News".to_string());
        LabelSchema {
            names,
            mode: LabelMode::MultiLabel,
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn mode(&self) -> LabelMode {
        self.mode
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string(self).expect("schema serializes");
        std::fs::write(path, json + "\n").map_err(|e| Error::io(path.display().to_string(), e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        serde_json::from_str(&text).map_err(|e| Error::json(path.display().to_string(), e))
    }
}

/// One document: unique id, raw text, and its label indices (sorted,
/// deduplicated; a singleton in single-label mode).
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub id: String,
    pub text: String,
    pub labels: Vec<usize>,
}

impl Document {
    /// Validates a document against `schema`: label indices in range,
    /// exactly one label in single-label mode, at least one in multi-label
    /// mode, and text that survives default normalization.
    pub fn new(id: String, text: String, mut labels: Vec<usize>, schema: &LabelSchema) -> Result<Self> {
        labels.sort_unstable();
        labels.dedup();
        if labels.is_empty() {
            return Err(Error::InvalidDocument {
                id,
                message: "empty label set".into(),
            });
        }
        if schema.mode() == LabelMode::SingleLabel && labels.len() != 1 {
            return Err(Error::InvalidDocument {
                id,
                message: format!("{} labels in single-label mode", labels.len()),
            });
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= schema.len()) {
            return Err(Error::InvalidDocument {
                id,
                message: format!("label index {bad} out of range"),
            });
        }
        if textnorm::normalize(&text, &NormalizationConfig::default()).is_empty() {
            return Err(Error::InvalidDocument {
                id,
                message: "text is empty after normalization".into(),
            });
        }
        Ok(Document { id, text, labels })
    }
}

/// An immutable labelled corpus. Safe to share read-only across workers.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    schema: LabelSchema,
    documents: Vec<Document>,
}

/// Corpus-level counts over normalized, whitespace-tokenized text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub docs_per_label: Vec<usize>,
    pub total_words: usize,
    pub min_doc_length: usize,
    pub max_doc_length: usize,
    pub mean_doc_length: f64,
    pub mean_labels_per_doc: f64,
}

#[derive(Serialize, Deserialize)]
struct CorpusHeader {
    format_version: u32,
}

#[derive(Serialize, Deserialize)]
struct RecordRepr {
    id: String,
    text: String,
    labels: Vec<String>,
}

impl Corpus {
    pub fn new(schema: LabelSchema, documents: Vec<Document>) -> Result<Self> {
        let mut ids = HashSet::new();
        for doc in &documents {
            if !ids.insert(doc.id.clone()) {
                return Err(Error::InvalidDocument {
                    id: doc.id.clone(),
                    message: "duplicate id".into(),
                });
            }
            if doc.labels.is_empty() || doc.labels.iter().any(|&l| l >= schema.len()) {
                return Err(Error::InvalidDocument {
                    id: doc.id.clone(),
                    message: "labels inconsistent with schema".into(),
                });
            }
        }
        Ok(Corpus { schema, documents })
    }

    pub fn schema(&self) -> &LabelSchema {
        &self.schema
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    /// Writes the line-delimited corpus file (header line, then one record
    /// per line with labels as names).
    pub fn save(&self, path: &Path) -> Result<()> {
        let file =
            std::fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        let mut out = std::io::BufWriter::new(file);
        let io_err = |e| Error::io(path.display().to_string(), e);
        let header = serde_json::to_string(&CorpusHeader {
            format_version: FORMAT_VERSION,
        })
        .expect("header serializes");
        writeln!(out, "{header}").map_err(io_err)?;
        for doc in &self.documents {
            let record = RecordRepr {
                id: doc.id.clone(),
                text: doc.text.clone(),
                labels: doc
                    .labels
                    .iter()
                    .map(|&l| self.schema.name(l).to_string())
                    .collect(),
            };
            let line = serde_json::to_string(&record).expect("record serializes");
            writeln!(out, "{line}").map_err(io_err)?;
        }
        out.flush().map_err(io_err)
    }
}

/// Loads and validates a corpus file against `schema`. Errors carry the
/// 1-based line number of the offending record.
pub fn load_corpus(path: &Path, schema: &LabelSchema) -> Result<Corpus> {
    let display = path.display().to_string();
    let file = std::fs::File::open(path).map_err(|e| Error::io(display.clone(), e))?;
    let reader = BufReader::new(file);

    let mut documents = Vec::new();
    let mut ids: HashSet<String> = HashSet::new();
    let mut lines = reader.lines().enumerate();

    let (_, header_line) = lines.next().ok_or_else(|| Error::MalformedRecord {
        path: display.clone(),
        line: 1,
        message: "missing header line".into(),
    })?;
    let header_line = header_line.map_err(|e| Error::io(display.clone(), e))?;
    let header: CorpusHeader =
        serde_json::from_str(&header_line).map_err(|_| Error::MalformedRecord {
            path: display.clone(),
            line: 1,
            message: "expected {\"format_version\":1} header".into(),
        })?;
    if header.format_version != FORMAT_VERSION {
        return Err(Error::FormatVersion {
            expected: FORMAT_VERSION,
            found: header.format_version,
        });
    }

    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::io(display.clone(), e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record: RecordRepr =
            serde_json::from_str(&line).map_err(|e| Error::MalformedRecord {
                path: display.clone(),
                line: line_no,
                message: e.to_string(),
            })?;
        if record.labels.is_empty() {
            return Err(Error::MalformedRecord {
                path: display.clone(),
                line: line_no,
                message: format!("document {:?} has an empty label set", record.id),
            });
        }
        let mut labels = Vec::with_capacity(record.labels.len());
        for name in &record.labels {
            match schema.index_of(name) {
                Some(i) => labels.push(i),
                None => {
                    return Err(Error::UnknownLabel {
                        path: display.clone(),
                        line: line_no,
                        label: name.clone(),
                    })
                }
            }
        }
        if !ids.insert(record.id.clone()) {
            return Err(Error::DuplicateId {
                path: display.clone(),
                line: line_no,
                id: record.id,
            });
        }
        let doc = Document::new(record.id, record.text, labels, schema).map_err(|e| {
            Error::MalformedRecord {
                path: display.clone(),
                line: line_no,
                message: e.to_string(),
            }
        })?;
        documents.push(doc);
    }

    Corpus::new(schema.clone(), documents)
}

/// Word counts and label counts for a non-empty corpus. Words are counted on
/// default-normalized, whitespace-tokenized text so statistics and features
/// agree on what a word is.
pub fn corpus_stats(corpus: &Corpus) -> Result<CorpusStats> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let norm = NormalizationConfig::default();
    let mut docs_per_label = vec![0usize; corpus.schema().len()];
    let mut total_words = 0usize;
    let mut total_labels = 0usize;
    let mut min_len = usize::MAX;
    let mut max_len = 0usize;
    for doc in corpus.documents() {
        let words = textnorm::tokenize(&textnorm::normalize(&doc.text, &norm)).len();
        total_words += words;
        min_len = min_len.min(words);
        max_len = max_len.max(words);
        total_labels += doc.labels.len();
        for &l in &doc.labels {
            docs_per_label[l] += 1;
        }
    }
    let n = corpus.len() as f64;
    Ok(CorpusStats {
        docs_per_label,
        total_words,
        min_doc_length: min_len,
        max_doc_length: max_len,
        mean_doc_length: total_words as f64 / n,
        mean_labels_per_doc: total_labels as f64 / n,
    })
}

fn round_half_up(x: f64) -> usize {
    (x + 0.5).floor() as usize
}

/// Deterministic train/test split. Returns index lists into
/// `corpus.documents()`, each sorted by original position.
pub fn split_indices(
    corpus: &Corpus,
    train_fraction: f64,
    seed: u64,
    stratified: bool,
) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidFraction(train_fraction));
    }
    let n = corpus.len();
    if n < 2 {
        return Err(Error::CorpusTooSmall(n));
    }
    let total_train = round_half_up(train_fraction * n as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train: Vec<usize>;

    if stratified {
        if corpus.schema().mode() == LabelMode::MultiLabel {
            return Err(Error::StratifyMultiLabel);
        }
        let n_classes = corpus.schema().len();
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
        for (i, doc) in corpus.documents().iter().enumerate() {
            groups[doc.labels[0]].push(i);
        }
        for (c, group) in groups.iter().enumerate() {
            if !group.is_empty() && group.len() < 2 {
                return Err(Error::StratifyTooFewDocs {
                    label: corpus.schema().name(c).to_string(),
                    count: group.len(),
                });
            }
        }
        // Largest-remainder apportionment: per-class floor counts, then the
        // remaining train slots go to the classes with the largest
        // fractional parts (ties to the lower class index).
        let targets: Vec<f64> = groups
            .iter()
            .map(|g| train_fraction * g.len() as f64)
            .collect();
        let mut counts: Vec<usize> = targets.iter().map(|&t| t.floor() as usize).collect();
        let assigned: usize = counts.iter().sum();
        let mut order: Vec<usize> = (0..n_classes).collect();
        order.sort_by(|&a, &b| {
            let fa = targets[a] - targets[a].floor();
            let fb = targets[b] - targets[b].floor();
            fb.partial_cmp(&fa).unwrap().then(a.cmp(&b))
        });
        let mut deficit = total_train.saturating_sub(assigned);
        for &c in &order {
            if deficit == 0 {
                break;
            }
            if counts[c] < groups[c].len() {
                counts[c] += 1;
                deficit -= 1;
            }
        }
        train = Vec::with_capacity(total_train);
        for (c, group) in groups.iter_mut().enumerate() {
            group.shuffle(&mut rng);
            train.extend(group.iter().take(counts[c]));
        }
    } else {
        let mut all: Vec<usize> = (0..n).collect();
        all.shuffle(&mut rng);
        train = all.into_iter().take(total_train).collect();
    }

    train.sort_unstable();
    let train_set: HashSet<usize> = train.iter().copied().collect();
    let test: Vec<usize> = (0..n).filter(|i| !train_set.contains(i)).collect();
    Ok((train, test))
}

/// Splits a corpus into disjoint train/test corpora covering the input.
/// Train size is `round(train_fraction * N)` (half-up); residual documents
/// go to the test side. The same seed always produces the same partition.
pub fn split(
    corpus: &Corpus,
    train_fraction: f64,
    seed: u64,
    stratified: bool,
) -> Result<(Corpus, Corpus)> {
    let (train_idx, test_idx) = split_indices(corpus, train_fraction, seed, stratified)?;
    let pick = |idxs: &[usize]| {
        let docs = idxs
            .iter()
            .map(|&i| corpus.documents()[i].clone())
            .collect();
        Corpus::new(corpus.schema().clone(), docs)
    };
    Ok((pick(&train_idx)?, pick(&test_idx)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(id: &str, text: &str, labels: &[usize], schema: &LabelSchema) -> Document {
        Document::new(id.to_string(), text.to_string(), labels.to_vec(), schema).unwrap()
    }

    fn small_corpus(n_per_class: usize, n_classes: usize) -> Corpus {
        let names: Vec<String> = (0..n_classes).map(|c| format!("C{c}")).collect();
        let schema = LabelSchema::new(names, LabelMode::SingleLabel).unwrap();
        let mut docs = Vec::new();
        for c in 0..n_classes {
            for i in 0..n_per_class {
                docs.push(doc(&format!("d{c}_{i}"), "کور ته ځم", &[c], &schema));
            }
        }
        Corpus::new(schema, docs).unwrap()
    }

    #[test]
    fn default_schemas_match_expected_shape() {
        let single = LabelSchema::single_label_default();
        assert_eq!(single.len(), 8);
        assert_eq!(single.name(0), "History");
        let multi = LabelSchema::multi_label_default();
        assert_eq!(multi.len(), 9);
        assert_eq!(multi.name(8), "News");
        assert_eq!(multi.mode(), LabelMode::MultiLabel);
    }

    #[test]
    fn schema_rejects_duplicates_and_empties() {
        assert!(LabelSchema::new(vec!["A".into(), "A".into()], LabelMode::SingleLabel).is_err());
        assert!(LabelSchema::new(vec!["".into()], LabelMode::SingleLabel).is_err());
        assert!(LabelSchema::new(vec![], LabelMode::SingleLabel).is_err());
    }

    #[test]
    fn load_two_valid_records() {
        let schema = LabelSchema::multi_label_default();
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "{{\"format_version\":1}}").unwrap();
        writeln!(
            file,
            "{{\"id\":\"d001\",\"text\":\"کور ته ځم\",\"labels\":[\"Sport\",\"News\"]}}"
        )
        .unwrap();
        writeln!(
            file,
            "{{\"id\":\"d002\",\"text\":\"ښار کې\",\"labels\":[\"Health\"]}}"
        )
        .unwrap();
        let corpus = load_corpus(file.path(), &schema).unwrap();
        assert_eq!(corpus.len(), 2);
        assert_eq!(corpus.documents()[0].labels, vec![6, 8]);
    }

    #[test]
    fn load_reports_unknown_label_with_line() {
        let schema = LabelSchema::single_label_default();
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "{{\"format_version\":1}}").unwrap();
        writeln!(
            file,
            "{{\"id\":\"d001\",\"text\":\"کور\",\"labels\":[\"Astronomy\"]}}"
        )
        .unwrap();
        match load_corpus(file.path(), &schema) {
            Err(Error::UnknownLabel { line, label, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(label, "Astronomy");
            }
            other => panic!("expected unknown-label error, got {other:?}"),
        }
    }

    #[test]
    fn load_rejects_duplicate_ids() {
        let schema = LabelSchema::single_label_default();
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "{{\"format_version\":1}}").unwrap();
        for _ in 0..2 {
            writeln!(
                file,
                "{{\"id\":\"dup\",\"text\":\"کور\",\"labels\":[\"Sport\"]}}"
            )
            .unwrap();
        }
        assert!(matches!(
            load_corpus(file.path(), &schema),
            Err(Error::DuplicateId { line: 3, .. })
        ));
    }

    #[test]
    fn load_rejects_text_that_normalizes_to_empty() {
        let schema = LabelSchema::single_label_default();
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "{{\"format_version\":1}}").unwrap();
        writeln!(
            file,
            "{{\"id\":\"d001\",\"text\":\"123 !!\",\"labels\":[\"Sport\"]}}"
        )
        .unwrap();
        assert!(matches!(
            load_corpus(file.path(), &schema),
            Err(Error::MalformedRecord { line: 2, .. })
        ));
    }

    #[test]
    fn save_load_round_trip() {
        let corpus = small_corpus(3, 4);
        let file = tempfile::NamedTempFile::new().unwrap();
        corpus.save(file.path()).unwrap();
        let reloaded = load_corpus(file.path(), corpus.schema()).unwrap();
        assert_eq!(reloaded, corpus);
    }

    #[test]
    fn stats_count_words_and_labels() {
        let schema = LabelSchema::multi_label_default();
        let docs = vec![doc("a", "یو دوه درې څلور پنځه", &[0, 8], &schema)];
        let corpus = Corpus::new(schema, docs).unwrap();
        let stats = corpus_stats(&corpus).unwrap();
        assert_eq!(stats.total_words, 5);
        assert_eq!(stats.mean_labels_per_doc, 2.0);
        assert_eq!(stats.min_doc_length, 5);
        assert_eq!(stats.max_doc_length, 5);
    }

    #[test]
    fn stats_single_label_identity() {
        let corpus = small_corpus(2, 3);
        let stats = corpus_stats(&corpus).unwrap();
        assert_eq!(stats.mean_labels_per_doc, 1.0);
        assert_eq!(stats.docs_per_label.iter().sum::<usize>(), corpus.len());
    }

    #[test]
    fn stats_empty_corpus_errors() {
        let schema = LabelSchema::single_label_default();
        let corpus = Corpus::new(schema, vec![]).unwrap();
        assert!(matches!(corpus_stats(&corpus), Err(Error::EmptyCorpus)));
    }

    #[test]
    fn stats_are_permutation_invariant() {
        let corpus = small_corpus(5, 3);
        let mut docs = corpus.documents().to_vec();
        docs.reverse();
        let reversed = Corpus::new(corpus.schema().clone(), docs).unwrap();
        assert_eq!(
            corpus_stats(&corpus).unwrap(),
            corpus_stats(&reversed).unwrap()
        );
    }

    #[test]
    fn split_sizes_match_paper_ratio() {
        let corpus = small_corpus(100, 8);
        let (train, test) = split(&corpus, 0.8, 7, false).unwrap();
        assert_eq!(train.len(), 640);
        assert_eq!(test.len(), 160);
    }

    #[test]
    fn split_same_seed_is_identical() {
        let corpus = small_corpus(10, 4);
        let ids = |c: &Corpus| -> Vec<String> {
            c.documents().iter().map(|d| d.id.clone()).collect()
        };
        let (a_train, a_test) = split(&corpus, 0.7, 7, false).unwrap();
        let (b_train, b_test) = split(&corpus, 0.7, 7, false).unwrap();
        assert_eq!(ids(&a_train), ids(&b_train));
        assert_eq!(ids(&a_test), ids(&b_test));
    }

    #[test]
    fn split_is_a_partition() {
        let corpus = small_corpus(13, 3);
        let (train, test) = split(&corpus, 0.6, 3, false).unwrap();
        let mut ids: Vec<&str> = train
            .documents()
            .iter()
            .chain(test.documents())
            .map(|d| d.id.as_str())
            .collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), corpus.len());
    }

    #[test]
    fn stratified_split_preserves_class_counts() {
        let corpus = small_corpus(25, 4);
        let (train, _) = split(&corpus, 0.8, 11, true).unwrap();
        let stats = corpus_stats(&train).unwrap();
        assert_eq!(stats.docs_per_label, vec![20, 20, 20, 20]);
    }

    #[test]
    fn stratified_split_rejects_multilabel() {
        let schema = LabelSchema::multi_label_default();
        let docs = vec![
            doc("a", "کور ته", &[0], &schema),
            doc("b", "ښار کې", &[1], &schema),
        ];
        let corpus = Corpus::new(schema, docs).unwrap();
        assert!(matches!(
            split(&corpus, 0.5, 1, true),
            Err(Error::StratifyMultiLabel)
        ));
    }

    #[test]
    fn stratified_split_rejects_tiny_classes() {
        let schema =
            LabelSchema::new(vec!["A".into(), "B".into()], LabelMode::SingleLabel).unwrap();
        let docs = vec![
            doc("a", "کور ته", &[0], &schema),
            doc("b", "ښار کې", &[0], &schema),
            doc("c", "یو دوه", &[1], &schema),
        ];
        let corpus = Corpus::new(schema, docs).unwrap();
        match split(&corpus, 0.5, 1, true) {
            Err(Error::StratifyTooFewDocs { label, count }) => {
                assert_eq!(label, "B");
                assert_eq!(count, 1);
            }
            other => panic!("expected stratify error, got {other:?}"),
        }
    }

    #[test]
    fn split_rejects_bad_fraction() {
        let corpus = small_corpus(5, 2);
        assert!(matches!(
            split(&corpus, 0.0, 1, false),
            Err(Error::InvalidFraction(_))
        ));
        assert!(matches!(
            split(&corpus, 1.0, 1, false),
            Err(Error::InvalidFraction(_))
        ));
    }

    #[test]
    fn single_label_documents_take_exactly_one_label() {
        let schema = LabelSchema::single_label_default();
        assert!(Document::new("x".into(), "کور".into(), vec![0, 1], &schema).is_err());
        assert!(Document::new("x".into(), "کور".into(), vec![], &schema).is_err());
    }
}
