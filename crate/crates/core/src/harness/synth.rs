//! Synthetic corpus generator: planted-keyword documents over the Pashto
//! alphabet, standing in for private data.
//!
//! Each label owns a pool of unique keyword tokens; documents mix keywords
//! of their labels with shared noise tokens at a configurable rate. The
//! generator returns its own bookkeeping so tests can verify corpus
//! statistics against the plan.

use std::collections::HashSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Document, LabelMode, LabelSchema};
use crate::error::{Error, Result};
use crate::textnorm::PASHTO_LETTERS;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SynthSpec {
    pub schema: LabelSchema,
    /// Documents carrying each label. In single-label mode this is the
    /// exact class size; in multi-label mode each count is consumed as a
    /// quota while documents draw 1-4 labels.
    pub docs_per_label: Vec<usize>,
    pub keywords_per_label: usize,
    /// Probability that a token is drawn from the shared noise pool.
    pub noise_rate: f64,
    pub noise_vocab: usize,
    /// Inclusive token-count range per document.
    pub doc_len: (usize, usize),
    /// Inclusive labels-per-document range (multi-label mode only);
    /// the default (1, 4) averages 2.5 labels per document.
    pub labels_per_doc: (usize, usize),
    pub seed: u64,
}

impl SynthSpec {
    pub fn single_label(docs_per_class: usize, noise_rate: f64, seed: u64) -> Self {
        let schema = LabelSchema::single_label_default();
        let n = schema.len();
        SynthSpec {
            schema,
            docs_per_label: vec![docs_per_class; n],
            keywords_per_label: 30,
            noise_rate,
            noise_vocab: 50,
            doc_len: (40, 70),
            labels_per_doc: (1, 1),
            seed,
        }
    }

    pub fn multi_label(docs_per_label: Vec<usize>, noise_rate: f64, seed: u64) -> Self {
        SynthSpec {
            schema: LabelSchema::multi_label_default(),
            docs_per_label,
            keywords_per_label: 30,
            noise_rate,
            noise_vocab: 50,
            doc_len: (40, 70),
            labels_per_doc: (1, 4),
            seed,
        }
    }
}

/// Ground-truth composition recorded by the generator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SynthReport {
    pub docs_per_label: Vec<usize>,
    pub total_docs: usize,
    pub mean_labels_per_doc: f64,
    pub keywords: Vec<Vec<String>>,
    pub noise_words: Vec<String>,
}

fn validate(spec: &SynthSpec) -> Result<()> {
    let n_labels = spec.schema.len();
    if n_labels < 2 {
        return Err(Error::InvalidSynthSpec("need at least 2 labels".into()));
    }
    if spec.docs_per_label.len() != n_labels {
        return Err(Error::InvalidSynthSpec(format!(
            "{} label sizes for {} labels",
            spec.docs_per_label.len(),
            n_labels
        )));
    }
    if spec.docs_per_label.contains(&0) {
        return Err(Error::InvalidSynthSpec("label sizes must be positive".into()));
    }
    if !(0.0..1.0).contains(&spec.noise_rate) {
        return Err(Error::InvalidSynthSpec(format!(
            "noise rate {} outside [0, 1)",
            spec.noise_rate
        )));
    }
    if spec.keywords_per_label == 0 {
        return Err(Error::InvalidSynthSpec("need at least 1 keyword per label".into()));
    }
    if spec.noise_rate > 0.0 && spec.noise_vocab == 0 {
        return Err(Error::InvalidSynthSpec(
            "noise rate > 0 needs a noise vocabulary".into(),
        ));
    }
    if spec.doc_len.0 == 0 || spec.doc_len.0 > spec.doc_len.1 {
        return Err(Error::InvalidSynthSpec(format!(
            "bad document length range {:?}",
            spec.doc_len
        )));
    }
    if spec.schema.mode() == LabelMode::MultiLabel {
        let (lo, hi) = spec.labels_per_doc;
        if lo == 0 || lo > hi || hi > n_labels {
            return Err(Error::InvalidSynthSpec(format!(
                "bad labels-per-doc range {:?}",
                spec.labels_per_doc
            )));
        }
    }
    Ok(())
}

fn fresh_word(rng: &mut ChaCha8Rng, taken: &mut HashSet<String>) -> String {
    loop {
        let len = rng.random_range(4..=7);
        let word: String = (0..len)
            .map(|_| PASHTO_LETTERS[rng.random_range(0..PASHTO_LETTERS.len())])
            .collect();
        if taken.insert(word.clone()) {
            return word;
        }
    }
}

fn doc_text(
    rng: &mut ChaCha8Rng,
    spec: &SynthSpec,
    labels: &[usize],
    keywords: &[Vec<String>],
    noise: &[String],
) -> String {
    let len = rng.random_range(spec.doc_len.0..=spec.doc_len.1);
    let mut tokens = Vec::with_capacity(len);
    for _ in 0..len {
        if spec.noise_rate > 0.0 && rng.random::<f64>() < spec.noise_rate {
            tokens.push(noise[rng.random_range(0..noise.len())].as_str());
        } else {
            let label = labels[rng.random_range(0..labels.len())];
            let pool = &keywords[label];
            tokens.push(pool[rng.random_range(0..pool.len())].as_str());
        }
    }
    tokens.join(" ")
}

/// Multi-label quota dealer: draws a label-set size, then fills it with
/// distinct labels sampled proportionally to their remaining quotas, so the
/// final per-label document counts equal the spec exactly.
fn deal_label_sets(rng: &mut ChaCha8Rng, spec: &SynthSpec) -> Vec<Vec<usize>> {
    let mut remaining = spec.docs_per_label.clone();
    let mut sets = Vec::new();
    while remaining.iter().sum::<usize>() > 0 {
        let nonzero = remaining.iter().filter(|&&q| q > 0).count();
        let want = rng.random_range(spec.labels_per_doc.0..=spec.labels_per_doc.1);
        let k = want.min(nonzero);
        let mut chosen: Vec<usize> = Vec::with_capacity(k);
        for _ in 0..k {
            let total: usize = remaining
                .iter()
                .enumerate()
                .filter(|(l, _)| !chosen.contains(l))
                .map(|(_, &q)| q)
                .sum();
            let mut r = rng.random_range(0..total);
            for (l, &q) in remaining.iter().enumerate() {
                if q == 0 || chosen.contains(&l) {
                    continue;
                }
                if r < q {
                    chosen.push(l);
                    break;
                }
                r -= q;
            }
        }
        chosen.sort_unstable();
        for &l in &chosen {
            remaining[l] -= 1;
        }
        sets.push(chosen);
    }
    sets
}

pub fn generate_synthetic_corpus(spec: &SynthSpec) -> Result<(Corpus, SynthReport)> {
    validate(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n_labels = spec.schema.len();

    let mut taken = HashSet::new();
    let keywords: Vec<Vec<String>> = (0..n_labels)
        .map(|_| {
            (0..spec.keywords_per_label)
                .map(|_| fresh_word(&mut rng, &mut taken))
                .collect()
        })
        .collect();
    let noise: Vec<String> = (0..spec.noise_vocab)
        .map(|_| fresh_word(&mut rng, &mut taken))
        .collect();

    let label_sets: Vec<Vec<usize>> = match spec.schema.mode() {
        LabelMode::SingleLabel => {
            let mut sets = Vec::new();
            for (label, &count) in spec.docs_per_label.iter().enumerate() {
                sets.extend(std::iter::repeat_n(vec![label], count));
            }
            sets
        }
        LabelMode::MultiLabel => deal_label_sets(&mut rng, spec),
    };

    let mut documents = Vec::with_capacity(label_sets.len());
    let mut total_labels = 0usize;
    for (i, labels) in label_sets.iter().enumerate() {
        total_labels += labels.len();
        let text = doc_text(&mut rng, spec, labels, &keywords, &noise);
        documents.push(Document::new(
            format!("d{:05}", i + 1),
            text,
            labels.clone(),
            &spec.schema,
        )?);
    }

    let total_docs = documents.len();
    let corpus = Corpus::new(spec.schema.clone(), documents)?;
    Ok((
        corpus,
        SynthReport {
            docs_per_label: spec.docs_per_label.clone(),
            total_docs,
            mean_labels_per_doc: total_labels as f64 / total_docs as f64,
            keywords,
            noise_words: noise,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::corpus_stats;

    #[test]
    fn single_label_counts_match_plan() {
        let spec = SynthSpec::single_label(10, 0.3, 42);
        let (corpus, report) = generate_synthetic_corpus(&spec).unwrap();
        let stats = corpus_stats(&corpus).unwrap();
        assert_eq!(stats.docs_per_label, report.docs_per_label);
        assert_eq!(corpus.len(), 80);
        assert_eq!(report.mean_labels_per_doc, 1.0);
    }

    #[test]
    fn multi_label_quotas_are_exact() {
        let sizes = vec![30, 25, 40, 20, 35, 30, 25, 30, 28];
        let spec = SynthSpec::multi_label(sizes.clone(), 0.3, 7);
        let (corpus, report) = generate_synthetic_corpus(&spec).unwrap();
        let stats = corpus_stats(&corpus).unwrap();
        assert_eq!(stats.docs_per_label, sizes);
        assert_eq!(report.docs_per_label, sizes);
        assert!((stats.mean_labels_per_doc - report.mean_labels_per_doc).abs() < 1e-12);
    }

    #[test]
    fn labels_per_doc_average_near_two_and_a_half() {
        let spec = SynthSpec::multi_label(vec![150; 9], 0.3, 42);
        let (_, report) = generate_synthetic_corpus(&spec).unwrap();
        assert!(
            (report.mean_labels_per_doc - 2.5).abs() < 0.2,
            "mean labels/doc {}",
            report.mean_labels_per_doc
        );
    }

    #[test]
    fn zero_noise_documents_contain_only_label_keywords() {
        let mut spec = SynthSpec::single_label(5, 0.0, 3);
        spec.noise_vocab = 0;
        let (corpus, report) = generate_synthetic_corpus(&spec).unwrap();
        for doc in corpus.documents() {
            let pool: HashSet<&str> = report.keywords[doc.labels[0]]
                .iter()
                .map(String::as_str)
                .collect();
            for token in doc.text.split_whitespace() {
                assert!(pool.contains(token), "{token} not a keyword of the class");
            }
        }
    }

    #[test]
    fn generation_is_deterministic_per_seed() {
        let spec = SynthSpec::multi_label(vec![12; 9], 0.2, 5);
        let (a, _) = generate_synthetic_corpus(&spec).unwrap();
        let (b, _) = generate_synthetic_corpus(&spec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn degenerate_specs_are_rejected() {
        let mut spec = SynthSpec::single_label(5, 0.3, 1);
        spec.docs_per_label[0] = 0;
        assert!(generate_synthetic_corpus(&spec).is_err());

        let mut spec = SynthSpec::single_label(5, 1.0, 1);
        spec.noise_rate = 1.0;
        assert!(generate_synthetic_corpus(&spec).is_err());

        let mut spec = SynthSpec::multi_label(vec![5; 9], 0.2, 1);
        spec.labels_per_doc = (0, 4);
        assert!(generate_synthetic_corpus(&spec).is_err());
    }
}
