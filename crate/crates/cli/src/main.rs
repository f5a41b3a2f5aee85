//! `textclass`: ingest, split, train, evaluate, grid, predict, report, and
//! synth subcommands over the workbench library.
//!
//! Exit code 0 on success; on failure a single machine-readable JSON line
//! (`{"error": "..."}`) goes to stderr and the exit code is nonzero.

use std::io::Read;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use textclass_core::classifiers::{train, Algorithm, ModelConfig, SavedModelFile};
use textclass_core::corpus::{corpus_stats, load_corpus, split, Corpus, LabelMode, LabelSchema};
use textclass_core::features::{
    build_vocabulary, load_vocabulary, save_vocabulary, vectorize, vocabulary_hash, FeatureMode,
    VectorizerConfig,
};
use textclass_core::harness::{
    self, emit, generate_synthetic_corpus, load_run_config, run_grid_to_dir, ChartMetric,
    GridSpec, RunConfig, SynthSpec, TableFormat,
};
use textclass_core::metrics::classification_report;
use textclass_core::multilabel::{train_binary_relevance, LabelVector};
use textclass_core::textnorm::{normalize, tokenize};

#[derive(Parser)]
#[command(
    name = "textclass",
    version,
    about = "Pashto text classification workbench"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CorpusArgs {
    /// Corpus file (line-delimited records).
    #[arg(long)]
    corpus: PathBuf,
    /// Schema file (ordered label list + mode).
    #[arg(long)]
    schema: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a corpus file and print its statistics.
    Ingest {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Print statistics as JSON instead of aligned text.
        #[arg(long)]
        json: bool,
    },
    /// Split a corpus into train and test files.
    Split {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long, default_value_t = 0.8)]
        fraction: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Preserve per-class proportions (single-label corpora only).
        #[arg(long)]
        stratified: bool,
        #[arg(long)]
        train_out: PathBuf,
        #[arg(long)]
        test_out: PathBuf,
    },
    /// Train one (algorithm, feature-mode) model on a corpus.
    Train {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Optional TOML run configuration.
        #[arg(long)]
        config: Option<PathBuf>,
        /// gnb | mnb | dt | rf | lr | svm | knn | mlp
        #[arg(long)]
        algorithm: String,
        /// unigram | bigram | trigram | tfidf
        #[arg(long)]
        features: String,
        /// Overrides the config file seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        model_out: PathBuf,
        #[arg(long)]
        vocab_out: PathBuf,
    },
    /// Evaluate a saved model on a labelled corpus.
    Evaluate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        vocab: PathBuf,
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Also write the report as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run the (classifier x feature) experiment grid.
    Grid {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out_dir: PathBuf,
        /// Overrides the config file seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Comma-separated algorithm subset, e.g. "mnb,mlp".
        #[arg(long)]
        algorithms: Option<String>,
        /// Comma-separated feature subset, e.g. "unigram,tfidf".
        #[arg(long)]
        features: Option<String>,
        /// Persist per-cell model files and per-mode vocabularies.
        #[arg(long)]
        save_models: bool,
        /// Run the grid this many times (seeds seed..seed+N-1) and emit a
        /// mean/range summary table.
        #[arg(long)]
        repeats: Option<usize>,
    },
    /// Re-render tables and charts from a saved results.json.
    Report {
        #[arg(long)]
        results: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Predict label(s) for one document.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        vocab: PathBuf,
        /// Document text; use --input for a file, or pipe to stdin.
        #[arg(long)]
        text: Option<String>,
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Generate a synthetic planted-keyword corpus.
    Synth {
        /// single-label | multi-label
        #[arg(long, default_value = "single-label")]
        mode: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        schema_out: PathBuf,
        /// Either one count for every label or a comma-separated list.
        #[arg(long, default_value = "100")]
        docs_per_label: String,
        #[arg(long, default_value_t = 30)]
        keywords: usize,
        #[arg(long, default_value_t = 0.3)]
        noise_rate: f64,
        /// Inclusive token range per document, e.g. "40:70".
        #[arg(long, default_value = "40:70")]
        doc_len: String,
        /// Inclusive labels-per-document range (multi-label), e.g. "1:4".
        #[arg(long, default_value = "1:4")]
        labels_per_doc: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli.command) {
        eprintln!("{}", serde_json::json!({ "error": format!("{e:#}") }));
        std::process::exit(1);
    }
}

fn load_pair(args: &CorpusArgs) -> Result<(LabelSchema, Corpus)> {
    let schema = LabelSchema::load(&args.schema)
        .with_context(|| format!("loading schema {}", args.schema.display()))?;
    let corpus = load_corpus(&args.corpus, &schema)
        .with_context(|| format!("loading corpus {}", args.corpus.display()))?;
    Ok((schema, corpus))
}

fn resolve_config(path: &Option<PathBuf>) -> Result<RunConfig> {
    match path {
        Some(p) => load_run_config(p).with_context(|| format!("loading config {}", p.display())),
        None => Ok(RunConfig::default()),
    }
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let (lo, hi) = s
        .split_once(':')
        .with_context(|| format!("range {s:?} must look like LO:HI"))?;
    Ok((lo.trim().parse()?, hi.trim().parse()?))
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Ingest { corpus, json } => {
            let (schema, corpus) = load_pair(&corpus)?;
            let stats = corpus_stats(&corpus)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&stats)?);
            } else {
                println!("documents      {}", corpus.len());
                println!("mode           {}", schema.mode().as_str());
                println!("total words    {}", stats.total_words);
                println!(
                    "doc length     min {}  mean {:.1}  max {}",
                    stats.min_doc_length, stats.mean_doc_length, stats.max_doc_length
                );
                println!("labels/doc     {:.2}", stats.mean_labels_per_doc);
                println!("docs per label");
                for (name, count) in schema.names().iter().zip(&stats.docs_per_label) {
                    println!("  {name:<12} {count}");
                }
            }
            Ok(())
        }

        Command::Split {
            corpus,
            fraction,
            seed,
            stratified,
            train_out,
            test_out,
        } => {
            let (_, corpus) = load_pair(&corpus)?;
            let (train_corpus, test_corpus) = split(&corpus, fraction, seed, stratified)?;
            train_corpus.save(&train_out)?;
            test_corpus.save(&test_out)?;
            println!(
                "train {} docs -> {}",
                train_corpus.len(),
                train_out.display()
            );
            println!("test  {} docs -> {}", test_corpus.len(), test_out.display());
            Ok(())
        }

        Command::Train {
            corpus,
            config,
            algorithm,
            features,
            seed,
            model_out,
            vocab_out,
        } => {
            let (schema, corpus) = load_pair(&corpus)?;
            let run_config = resolve_config(&config)?;
            let algorithm = Algorithm::parse(&algorithm)?;
            let mode = FeatureMode::parse(&features)?;
            let seed = seed.or(run_config.seed).unwrap_or(42);

            let tokens = harness::tokenize_corpus(&corpus, &run_config.normalize);
            let vocab = build_vocabulary(
                &tokens,
                &VectorizerConfig {
                    mode,
                    min_df: run_config.vectorizer.min_df,
                    max_features: run_config.vectorizer.max_features,
                },
            )?;
            let x = harness::vectorize_batch(&tokens, &vocab);
            let hash = vocabulary_hash(&vocab, &run_config.normalize);
            let model_config = ModelConfig {
                algorithm,
                seed,
                params: run_config.hyper.params_for(algorithm),
            };

            let file = match schema.mode() {
                LabelMode::SingleLabel => {
                    let y: Vec<usize> =
                        corpus.documents().iter().map(|d| d.labels[0]).collect();
                    let model = train(&model_config, &x, &y, schema.len())?;
                    SavedModelFile::single(model, schema.names().to_vec(), hash)
                }
                LabelMode::MultiLabel => {
                    let y: Vec<LabelVector> = corpus
                        .documents()
                        .iter()
                        .map(|d| LabelVector::from_indices(schema.len(), &d.labels))
                        .collect();
                    let model = train_binary_relevance(
                        &model_config,
                        &x,
                        &y,
                        &schema,
                        run_config.multilabel.threshold,
                    )?;
                    SavedModelFile::multi(model, hash)
                }
            };
            save_vocabulary(&vocab, &run_config.normalize, &vocab_out)?;
            file.save(&model_out)?;
            println!(
                "trained {}+{} on {} docs ({} terms) -> {}",
                algorithm.table_name(),
                mode.table_name(),
                corpus.len(),
                vocab.len(),
                model_out.display()
            );
            Ok(())
        }

        Command::Evaluate {
            model,
            vocab,
            corpus,
            csv,
        } => {
            let (schema, corpus) = load_pair(&corpus)?;
            let (vocab, norm, file) = load_checked_model(&model, &vocab)?;
            let tokens = harness::tokenize_corpus(&corpus, &norm);
            let x = harness::vectorize_batch(&tokens, &vocab);

            match file {
                SavedModelFile::Single { labels, model, .. } => {
                    if labels != schema.names() {
                        bail!("model labels {labels:?} do not match the schema");
                    }
                    let y: Vec<usize> =
                        corpus.documents().iter().map(|d| d.labels[0]).collect();
                    let predicted: textclass_core::Result<Vec<usize>> =
                        x.iter().map(|v| model.predict_label(v)).collect();
                    let report = classification_report(&y, &predicted?, &schema)?;
                    print!("{}", report.to_aligned_text());
                    if let Some(path) = csv {
                        std::fs::write(&path, report.to_csv())?;
                        println!("csv -> {}", path.display());
                    }
                }
                SavedModelFile::Multi { model, .. } => {
                    if model.schema() != &schema {
                        bail!("model schema does not match the given schema");
                    }
                    let y: Vec<LabelVector> = corpus
                        .documents()
                        .iter()
                        .map(|d| LabelVector::from_indices(schema.len(), &d.labels))
                        .collect();
                    let report = model.evaluate(&x, &y)?;
                    print!("{}", report.to_aligned_text());
                    if let Some(path) = csv {
                        std::fs::write(&path, report.to_csv())?;
                        println!("csv -> {}", path.display());
                    }
                }
            }
            Ok(())
        }

        Command::Grid {
            corpus,
            config,
            out_dir,
            seed,
            algorithms,
            features,
            save_models,
            repeats,
        } => {
            let (_, corpus) = load_pair(&corpus)?;
            let run_config = resolve_config(&config)?;
            let mut spec: GridSpec = run_config.to_grid_spec(seed.unwrap_or(42))?;
            if let Some(seed) = seed {
                spec.seed = seed;
            }
            if let Some(list) = algorithms {
                spec.algorithms = list
                    .split(',')
                    .map(|s| Algorithm::parse(s.trim()))
                    .collect::<textclass_core::Result<_>>()?;
            }
            if let Some(list) = features {
                spec.features = list
                    .split(',')
                    .map(|s| FeatureMode::parse(s.trim()))
                    .collect::<textclass_core::Result<_>>()?;
            }
            let save_models = save_models || run_config.grid.save_models;
            let repeats = repeats.unwrap_or(run_config.grid.repeats).max(1);

            let outputs = run_grid_to_dir(&corpus, &spec, &out_dir, save_models, repeats)?;
            for result in &outputs.results {
                let status = match &result.outcome {
                    harness::CellOutcome::Single { accuracy, .. } => {
                        format!("accuracy {accuracy:.4}")
                    }
                    harness::CellOutcome::Multi { report } => {
                        format!("weighted F1 {:.4}", report.weighted_avg.f1)
                    }
                    harness::CellOutcome::Failed { reason } => format!("FAILED: {reason}"),
                };
                println!(
                    "{:<14} {status}  ({:.2}s)",
                    result.cell_name(),
                    result.wall_seconds
                );
            }
            println!(
                "{} cells -> {} ({} files, manifest {})",
                outputs.results.len(),
                out_dir.display(),
                outputs.files.len(),
                outputs.manifest.display()
            );
            Ok(())
        }

        Command::Report { results, out_dir } => {
            let results = emit::load_results(&results)?;
            std::fs::create_dir_all(&out_dir)?;
            let mut files = Vec::new();
            files.extend(emit::emit_tables(&results, &out_dir, TableFormat::Csv)?);
            files.extend(emit::emit_tables(&results, &out_dir, TableFormat::Text)?);
            for metric in [ChartMetric::WeightedF1, ChartMetric::SampleF1, ChartMetric::Auc] {
                if results.iter().any(|r| emit::chart_value(r, metric).is_some()) {
                    files.extend(emit::emit_chart(&results, metric, &out_dir)?);
                }
            }
            let manifest = emit::write_manifest(&out_dir, &files)?;
            println!(
                "{} files -> {} (manifest {})",
                files.len(),
                out_dir.display(),
                manifest.display()
            );
            Ok(())
        }

        Command::Predict {
            model,
            vocab,
            text,
            input,
        } => {
            let (vocab, norm, file) = load_checked_model(&model, &vocab)?;
            let raw = match (text, input) {
                (Some(t), None) => t,
                (None, Some(path)) => std::fs::read_to_string(&path)
                    .with_context(|| format!("reading {}", path.display()))?,
                (None, None) => {
                    let mut buf = String::new();
                    std::io::stdin().read_to_string(&mut buf)?;
                    buf
                }
                (Some(_), Some(_)) => bail!("pass either --text or --input, not both"),
            };
            let normalized = normalize(&raw, &norm);
            if normalized.is_empty() {
                bail!("document is empty after normalization");
            }
            let x = vectorize(&tokenize(&normalized), &vocab);

            match file {
                SavedModelFile::Single { labels, model, .. } => {
                    let scores = model.predict_scores(&x)?;
                    let best = scores.argmax();
                    println!("predicted: {}", labels[best]);
                    println!();
                    println!("scores:");
                    for (name, score) in labels.iter().zip(&scores.scores) {
                        println!("{name:<12} {score:.4}");
                    }
                }
                SavedModelFile::Multi { model, .. } => {
                    let bits = model.predict_label_vector(&x)?;
                    let scores = model.predict_scores(&x)?;
                    let names = model.schema().names();
                    for (name, l) in names.iter().zip(0..) {
                        println!("{name:<12} {}", u8::from(bits.get(l)));
                    }
                    if bits.count_ones() == 0 {
                        println!("(no label cleared threshold {})", model.threshold());
                    }
                    println!();
                    println!("scores:");
                    for (name, score) in names.iter().zip(&scores) {
                        println!("{name:<12} {score:.4}");
                    }
                }
            }
            Ok(())
        }

        Command::Synth {
            mode,
            out,
            schema_out,
            docs_per_label,
            keywords,
            noise_rate,
            doc_len,
            labels_per_doc,
            seed,
        } => {
            let schema = match mode.as_str() {
                "single-label" => LabelSchema::single_label_default(),
                "multi-label" => LabelSchema::multi_label_default(),
                other => bail!("mode must be single-label or multi-label, got {other:?}"),
            };
            let sizes: Vec<usize> = if docs_per_label.contains(',') {
                docs_per_label
                    .split(',')
                    .map(|s| s.trim().parse().context("bad docs-per-label entry"))
                    .collect::<Result<_>>()?
            } else {
                vec![docs_per_label.trim().parse()?; schema.len()]
            };
            let spec = SynthSpec {
                schema: schema.clone(),
                docs_per_label: sizes,
                keywords_per_label: keywords,
                noise_rate,
                noise_vocab: 50,
                doc_len: parse_range(&doc_len)?,
                labels_per_doc: parse_range(&labels_per_doc)?,
                seed,
            };
            let (corpus, report) = generate_synthetic_corpus(&spec)?;
            schema.save(&schema_out)?;
            corpus.save(&out)?;
            println!(
                "{} docs ({} labels, mean {:.2} labels/doc) -> {}",
                report.total_docs,
                schema.len(),
                report.mean_labels_per_doc,
                out.display()
            );
            println!("schema -> {}", schema_out.display());
            Ok(())
        }
    }
}

/// Loads a model file and its vocabulary, verifying the embedded hash.
fn load_checked_model(
    model_path: &Path,
    vocab_path: &Path,
) -> Result<(
    textclass_core::features::Vocabulary,
    textclass_core::textnorm::NormalizationConfig,
    SavedModelFile,
)> {
    let file = SavedModelFile::load(model_path)
        .with_context(|| format!("loading model {}", model_path.display()))?;
    let (vocab, norm) = load_vocabulary(vocab_path)
        .with_context(|| format!("loading vocabulary {}", vocab_path.display()))?;
    file.verify_vocabulary(&vocab, &norm)?;
    Ok((vocab, norm, file))
}
