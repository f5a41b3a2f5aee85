//! The experiment engine: run the (classifier x feature) grid over one
//! shared split, evaluate every cell, and write tables, charts, models, and
//! a hashed output manifest.
//!
//! Grid cells are independent work items: the split is fixed up front, each
//! feature mode's vocabulary is built once from the training side only, and
//! cell `i` trains with seed `grid_seed XOR i`, so concurrent execution
//! cannot change any result.

pub mod config;
pub mod emit;
mod synth;

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::classifiers::{train, Algorithm, ModelConfig, SavedModelFile, TrainedModel};
use crate::corpus::{split_indices, Corpus, LabelMode};
use crate::error::{Error, Result};
use crate::exec;
use crate::features::{
    build_vocabulary, save_vocabulary, vectorize, vocabulary_hash, FeatureMode, SparseVector,
    VectorizerConfig, Vocabulary,
};
use crate::metrics::{classification_report, ClassReport, MultiLabelReport};
use crate::multilabel::{train_binary_relevance, LabelVector, MultiLabelModel};
use crate::textnorm::{normalize, tokenize, NormalizationConfig};

pub use config::{load_run_config, HyperParams, RunConfig};
pub use emit::{ChartMetric, TableFormat};
pub use synth::{generate_synthetic_corpus, SynthReport, SynthSpec};

/// A validated grid request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub algorithms: Vec<Algorithm>,
    pub features: Vec<FeatureMode>,
    pub seed: u64,
    pub train_fraction: f64,
    pub stratified: bool,
    pub normalization: NormalizationConfig,
    pub min_df: usize,
    pub max_features: Option<usize>,
    /// Multi-label decision threshold.
    pub threshold: f64,
    pub hyper: HyperParams,
}

impl GridSpec {
    /// The paper's full grid: all eight algorithms, all four feature modes,
    /// 80/20 split.
    pub fn full(seed: u64) -> Self {
        GridSpec {
            algorithms: crate::classifiers::ALL_ALGORITHMS.to_vec(),
            features: crate::features::ALL_FEATURE_MODES.to_vec(),
            seed,
            train_fraction: 0.8,
            stratified: false,
            normalization: NormalizationConfig::default(),
            min_df: 1,
            max_features: None,
            threshold: 0.5,
            hyper: HyperParams::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.algorithms.is_empty() {
            return Err(Error::InvalidConfig("no algorithms selected".into()));
        }
        if self.features.is_empty() {
            return Err(Error::InvalidConfig("no feature modes selected".into()));
        }
        let mut algorithms = self.algorithms.clone();
        algorithms.dedup();
        if algorithms.len() != self.algorithms.len() {
            return Err(Error::InvalidConfig("duplicate algorithm in grid".into()));
        }
        let mut features = self.features.clone();
        features.dedup();
        if features.len() != self.features.len() {
            return Err(Error::InvalidConfig("duplicate feature mode in grid".into()));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::InvalidFraction(self.train_fraction));
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(Error::InvalidThreshold(self.threshold));
        }
        Ok(())
    }
}

/// The fitted model of a successful cell (kept in memory only).
#[derive(Debug, Clone)]
pub enum FittedModel {
    Single(TrainedModel),
    Multi(MultiLabelModel),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum CellOutcome {
    Single {
        accuracy: f64,
        report: ClassReport,
    },
    Multi {
        report: MultiLabelReport,
    },
    Failed {
        reason: String,
    },
}

/// One grid cell's outcome. Wall-clock time and the fitted model are
/// runtime-only fields: they never enter the serialized results, so
/// re-emitting from `results.json` is byte-deterministic.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunResult {
    pub algorithm: Algorithm,
    pub feature_mode: FeatureMode,
    pub cell_index: usize,
    pub model_path: Option<String>,
    pub outcome: CellOutcome,
    #[serde(skip)]
    pub wall_seconds: f64,
    #[serde(skip)]
    pub fitted: Option<FittedModel>,
}

impl RunResult {
    /// Technique name in the published style, e.g. `MLP+TFIDF`.
    pub fn cell_name(&self) -> String {
        format!(
            "{}+{}",
            self.algorithm.table_name(),
            self.feature_mode.table_name()
        )
    }

    pub fn is_failed(&self) -> bool {
        matches!(self.outcome, CellOutcome::Failed { .. })
    }
}

/// A completed grid run plus the per-mode vocabularies (for persistence).
pub struct GridRun {
    pub results: Vec<RunResult>,
    pub vocabularies: Vec<(FeatureMode, Option<Vocabulary>)>,
}

struct ModeData {
    vocabulary: Option<Vocabulary>,
    train_x: Vec<SparseVector>,
    test_x: Vec<SparseVector>,
    error: Option<String>,
}

enum Targets {
    Single {
        train: Vec<usize>,
        test: Vec<usize>,
    },
    Multi {
        train: Vec<LabelVector>,
        test: Vec<LabelVector>,
    },
}

/// Normalizes and tokenizes every document (parallel across documents).
pub fn tokenize_corpus(corpus: &Corpus, normalization: &NormalizationConfig) -> Vec<Vec<String>> {
    exec::par_map(corpus.documents().iter().collect(), |doc| {
        tokenize(&normalize(&doc.text, normalization))
    })
}

/// Vectorizes a batch of token lists (parallel across documents).
pub fn vectorize_batch(tokens: &[Vec<String>], vocab: &Vocabulary) -> Vec<SparseVector> {
    exec::par_map(tokens.iter().collect(), |t| vectorize(t, vocab))
}

/// Runs every (algorithm, feature) cell of the grid on one shared split.
/// Per-cell failures are recorded in the cell's outcome; configuration and
/// split errors are fatal.
pub fn run_grid(corpus: &Corpus, spec: &GridSpec) -> Result<Vec<RunResult>> {
    Ok(run_grid_full(corpus, spec)?.results)
}

pub fn run_grid_full(corpus: &Corpus, spec: &GridSpec) -> Result<GridRun> {
    spec.validate()?;
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let schema = corpus.schema().clone();

    let tokenized = tokenize_corpus(corpus, &spec.normalization);

    let (train_idx, test_idx) = split_indices(corpus, spec.train_fraction, spec.seed, spec.stratified)?;
    let train_tokens: Vec<Vec<String>> = train_idx.iter().map(|&i| tokenized[i].clone()).collect();

    let modes: Vec<ModeData> = spec
        .features
        .iter()
        .map(|&mode| {
            let vec_config = VectorizerConfig {
                mode,
                min_df: spec.min_df,
                max_features: spec.max_features,
            };
            match build_vocabulary(&train_tokens, &vec_config) {
                Ok(vocab) => {
                    let train_x = exec::par_map(train_idx.clone(), |i| {
                        vectorize(&tokenized[i], &vocab)
                    });
                    let test_x = exec::par_map(test_idx.clone(), |i| {
                        vectorize(&tokenized[i], &vocab)
                    });
                    ModeData {
                        vocabulary: Some(vocab),
                        train_x,
                        test_x,
                        error: None,
                    }
                }
                Err(e) => ModeData {
                    vocabulary: None,
                    train_x: Vec::new(),
                    test_x: Vec::new(),
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();

    let targets = match schema.mode() {
        LabelMode::SingleLabel => Targets::Single {
            train: train_idx
                .iter()
                .map(|&i| corpus.documents()[i].labels[0])
                .collect(),
            test: test_idx
                .iter()
                .map(|&i| corpus.documents()[i].labels[0])
                .collect(),
        },
        LabelMode::MultiLabel => Targets::Multi {
            train: train_idx
                .iter()
                .map(|&i| LabelVector::from_indices(schema.len(), &corpus.documents()[i].labels))
                .collect(),
            test: test_idx
                .iter()
                .map(|&i| LabelVector::from_indices(schema.len(), &corpus.documents()[i].labels))
                .collect(),
        },
    };

    let mut cells: Vec<(usize, Algorithm, usize)> = Vec::new();
    for &algorithm in &spec.algorithms {
        for mode_index in 0..spec.features.len() {
            cells.push((cells.len(), algorithm, mode_index));
        }
    }

    let results: Vec<RunResult> = exec::par_map(cells, |(index, algorithm, mode_index)| {
        let feature_mode = spec.features[mode_index];
        let started = Instant::now();
        let cell_seed = spec.seed ^ index as u64;
        let mode_data = &modes[mode_index];

        let (outcome, fitted) = if let Some(reason) = &mode_data.error {
            (
                CellOutcome::Failed {
                    reason: reason.clone(),
                },
                None,
            )
        } else {
            let model_config = ModelConfig {
                algorithm,
                seed: cell_seed,
                params: spec.hyper.params_for(algorithm),
            };
            match run_cell(&model_config, mode_data, &targets, &schema, spec.threshold) {
                Ok((outcome, fitted)) => (outcome, Some(fitted)),
                Err(e) => (
                    CellOutcome::Failed {
                        reason: e.to_string(),
                    },
                    None,
                ),
            }
        };

        RunResult {
            algorithm,
            feature_mode,
            cell_index: index,
            model_path: None,
            outcome,
            wall_seconds: started.elapsed().as_secs_f64(),
            fitted,
        }
    });

    Ok(GridRun {
        results,
        vocabularies: spec
            .features
            .iter()
            .zip(modes)
            .map(|(&mode, data)| (mode, data.vocabulary))
            .collect(),
    })
}

fn run_cell(
    config: &ModelConfig,
    data: &ModeData,
    targets: &Targets,
    schema: &crate::corpus::LabelSchema,
    threshold: f64,
) -> Result<(CellOutcome, FittedModel)> {
    match targets {
        Targets::Single { train: y_train, test: y_test } => {
            let model = train(config, &data.train_x, y_train, schema.len())?;
            let predicted: Result<Vec<usize>> = data
                .test_x
                .iter()
                .map(|x| model.predict_label(x))
                .collect();
            let predicted = predicted?;
            let report = classification_report(y_test, &predicted, schema)?;
            Ok((
                CellOutcome::Single {
                    accuracy: report.accuracy,
                    report,
                },
                FittedModel::Single(model),
            ))
        }
        Targets::Multi { train: y_train, test: y_test } => {
            let model = train_binary_relevance(config, &data.train_x, y_train, schema, threshold)?;
            let report = model.evaluate(&data.test_x, y_test)?;
            Ok((CellOutcome::Multi { report }, FittedModel::Multi(model)))
        }
    }
}

/// Summary of repeated runs (seed, seed+1, ...): headline metric per cell.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepeatRow {
    pub technique: String,
    pub metric: String,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

fn headline_metric(result: &RunResult) -> Option<(String, f64)> {
    match &result.outcome {
        CellOutcome::Single { accuracy, .. } => Some(("accuracy".into(), *accuracy)),
        CellOutcome::Multi { report } => Some(("weighted_f1".into(), report.weighted_avg.f1)),
        CellOutcome::Failed { .. } => None,
    }
}

/// Runs the grid `repeats` times with seeds `seed .. seed+repeats-1` and
/// aggregates the headline metric (accuracy, or weighted F1 in multi-label
/// mode) as mean and range per cell.
pub fn summarize_repeats(
    corpus: &Corpus,
    spec: &GridSpec,
    repeats: usize,
    first: &[RunResult],
) -> Result<Vec<RepeatRow>> {
    let mut per_cell: Vec<(String, String, Vec<f64>)> = first
        .iter()
        .filter_map(|r| headline_metric(r).map(|(m, v)| (r.cell_name(), m, vec![v])))
        .collect();
    for r in 1..repeats {
        let mut repeat_spec = spec.clone();
        repeat_spec.seed = spec.seed.wrapping_add(r as u64);
        let results = run_grid(corpus, &repeat_spec)?;
        for result in &results {
            if let Some((_, v)) = headline_metric(result) {
                if let Some(row) = per_cell.iter_mut().find(|(n, _, _)| *n == result.cell_name()) {
                    row.2.push(v);
                }
            }
        }
    }
    Ok(per_cell
        .into_iter()
        .map(|(technique, metric, values)| {
            let mean = values.iter().sum::<f64>() / values.len() as f64;
            let min = values.iter().copied().fold(f64::INFINITY, f64::min);
            let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            RepeatRow {
                technique,
                metric,
                mean,
                min,
                max,
            }
        })
        .collect())
}

fn emit_repeat_summary(rows: &[RepeatRow], dir: &Path) -> Result<Vec<PathBuf>> {
    let mut csv = String::from("technique,metric,mean,min,max\n");
    for r in rows {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            r.technique, r.metric, r.mean, r.min, r.max
        ));
    }
    let csv_path = dir.join("repeat_summary.csv");
    std::fs::write(&csv_path, &csv).map_err(|e| Error::io(csv_path.display().to_string(), e))?;

    let mut text = format!(
        "{:<14} {:>12} {:>8} {:>8} {:>8}\n",
        "Technique", "Metric", "Mean", "Min", "Max"
    );
    for r in rows {
        text.push_str(&format!(
            "{:<14} {:>12} {:>8.3} {:>8.3} {:>8.3}\n",
            r.technique, r.metric, r.mean, r.min, r.max
        ));
    }
    let txt_path = dir.join("repeat_summary.txt");
    std::fs::write(&txt_path, &text).map_err(|e| Error::io(txt_path.display().to_string(), e))?;
    Ok(vec![csv_path, txt_path])
}

/// Everything a `grid` invocation writes into its output directory.
pub struct GridOutputs {
    pub results: Vec<RunResult>,
    pub files: Vec<PathBuf>,
    pub manifest: PathBuf,
}

/// Runs the grid and writes results.json, tables in both formats, the
/// applicable charts, optional model/vocabulary files, and the manifest.
///
/// The written bytes are fully determined by (corpus, spec, save_models,
/// repeats): wall-clock timings stay out of every artifact.
pub fn run_grid_to_dir(
    corpus: &Corpus,
    spec: &GridSpec,
    out_dir: &Path,
    save_models: bool,
    repeats: usize,
) -> Result<GridOutputs> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir.display().to_string(), e))?;
    let run = run_grid_full(corpus, spec)?;
    let mut results = run.results;
    let mut files: Vec<PathBuf> = Vec::new();

    if save_models {
        let models_dir = out_dir.join("models");
        let vocabs_dir = out_dir.join("vocabs");
        for dir in [&models_dir, &vocabs_dir] {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
        }
        let mut mode_hashes = Vec::new();
        for (mode, vocab) in &run.vocabularies {
            if let Some(vocab) = vocab {
                let path = vocabs_dir.join(format!("{}.vocab.json", mode.as_str()));
                save_vocabulary(vocab, &spec.normalization, &path)?;
                mode_hashes.push((*mode, vocabulary_hash(vocab, &spec.normalization)));
                files.push(path);
            }
        }
        for result in results.iter_mut() {
            let Some(fitted) = &result.fitted else { continue };
            let Some((_, hash)) = mode_hashes
                .iter()
                .find(|(m, _)| *m == result.feature_mode)
            else {
                continue;
            };
            let file = match fitted {
                FittedModel::Single(model) => SavedModelFile::single(
                    model.clone(),
                    corpus.schema().names().to_vec(),
                    hash.clone(),
                ),
                FittedModel::Multi(model) => SavedModelFile::multi(model.clone(), hash.clone()),
            };
            let rel = format!(
                "models/{}_{}.model.json",
                result.algorithm.as_str(),
                result.feature_mode.as_str()
            );
            let path = out_dir.join(&rel);
            file.save(&path)?;
            result.model_path = Some(rel);
            files.push(path);
        }
    }

    let results_path = out_dir.join("results.json");
    emit::save_results(&results, &results_path)?;
    files.push(results_path);

    files.extend(emit::emit_tables(&results, out_dir, TableFormat::Csv)?);
    files.extend(emit::emit_tables(&results, out_dir, TableFormat::Text)?);

    for metric in [ChartMetric::WeightedF1, ChartMetric::SampleF1, ChartMetric::Auc] {
        let available = results.iter().any(|r| emit::chart_value(r, metric).is_some());
        if available {
            files.extend(emit::emit_chart(&results, metric, out_dir)?);
        }
    }

    if repeats > 1 {
        let rows = summarize_repeats(corpus, spec, repeats, &results)?;
        files.extend(emit_repeat_summary(&rows, out_dir)?);
    }

    let manifest = emit::write_manifest(out_dir, &files)?;
    Ok(GridOutputs {
        results,
        files,
        manifest,
    })
}
