//! Result emission: CSV and aligned-text tables, bar-chart data with an SVG
//! rendering, the results file, and the output manifest.
//!
//! Every emitted number is read from a `RunResult` field; nothing is
//! recomputed here. Aligned text rounds to two decimals like the published
//! tables; CSV carries full-precision values that re-parse exactly.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::features::FeatureMode;

use super::{CellOutcome, RunResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartMetric {
    WeightedF1,
    SampleF1,
    Auc,
}

impl ChartMetric {
    pub fn as_str(self) -> &'static str {
        match self {
            ChartMetric::WeightedF1 => "weighted_f1",
            ChartMetric::SampleF1 => "sample_f1",
            ChartMetric::Auc => "auc",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "weighted_f1" | "weighted-f1" => Ok(ChartMetric::WeightedF1),
            "sample_f1" | "sample-f1" | "sample-avg" => Ok(ChartMetric::SampleF1),
            "auc" => Ok(ChartMetric::Auc),
            other => Err(Error::InvalidConfig(format!("unknown chart metric {other:?}"))),
        }
    }
}

fn csv_escape(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path.display().to_string(), e))
}

fn matrix_cell(result: &RunResult) -> Option<f64> {
    match &result.outcome {
        CellOutcome::Single { accuracy, .. } => Some(*accuracy),
        CellOutcome::Multi { report } => Some(report.mean_label_accuracy),
        CellOutcome::Failed { .. } => None,
    }
}

/// Deduplicated first-appearance orders of algorithms and feature modes.
fn axes(results: &[RunResult]) -> (Vec<&'static str>, Vec<FeatureMode>) {
    let mut algorithms = Vec::new();
    let mut features = Vec::new();
    for r in results {
        if !algorithms.contains(&r.algorithm.table_name()) {
            algorithms.push(r.algorithm.table_name());
        }
        if !features.contains(&r.feature_mode) {
            features.push(r.feature_mode);
        }
    }
    (algorithms, features)
}

/// (a) Algorithm x feature accuracy matrix. Multi-label cells hold the mean
/// per-label accuracy; failed cells render as `n/a`.
fn accuracy_matrix(results: &[RunResult], format: TableFormat) -> String {
    let (algorithms, features) = axes(results);
    let lookup = |alg: &str, mode: FeatureMode| -> Option<f64> {
        results
            .iter()
            .find(|r| r.algorithm.table_name() == alg && r.feature_mode == mode)
            .and_then(matrix_cell)
    };
    let mut out = String::new();
    match format {
        TableFormat::Csv => {
            out.push_str("technique");
            for f in &features {
                out.push_str(&format!(",{}", f.table_name()));
            }
            out.push('\n');
            for alg in &algorithms {
                out.push_str(alg);
                for &f in &features {
                    match lookup(alg, f) {
                        Some(v) => out.push_str(&format!(",{v}")),
                        None => out.push_str(",n/a"),
                    }
                }
                out.push('\n');
            }
        }
        TableFormat::Text => {
            out.push_str(&format!("{:<12}", "Technique"));
            for f in &features {
                out.push_str(&format!(" {:>9}", f.table_name()));
            }
            out.push('\n');
            for alg in &algorithms {
                out.push_str(&format!("{alg:<12}"));
                for &f in &features {
                    match lookup(alg, f) {
                        Some(v) => out.push_str(&format!(" {v:>9.2}")),
                        None => out.push_str(&format!(" {:>9}", "n/a")),
                    }
                }
                out.push('\n');
            }
        }
    }
    out
}

/// (b) Per-label accuracy table (multi-label runs): one row per technique,
/// one column per label.
fn per_label_accuracy_table(results: &[RunResult], format: TableFormat) -> Option<String> {
    let labels: Vec<String> = results.iter().find_map(|r| match &r.outcome {
        CellOutcome::Multi { report } => {
            Some(report.labels.iter().map(|l| l.name.clone()).collect())
        }
        _ => None,
    })?;

    let mut out = String::new();
    match format {
        TableFormat::Csv => {
            out.push_str("technique");
            for l in &labels {
                out.push_str(&format!(",{}", csv_escape(l)));
            }
            out.push('\n');
            for r in results {
                if let CellOutcome::Multi { report } = &r.outcome {
                    out.push_str(&csv_escape(&r.cell_name()));
                    for row in &report.labels {
                        out.push_str(&format!(",{}", row.accuracy));
                    }
                    out.push('\n');
                }
            }
        }
        TableFormat::Text => {
            let name_w = results
                .iter()
                .map(|r| r.cell_name().len())
                .chain(["Technique".len()])
                .max()
                .unwrap_or(12);
            let col_w = labels.iter().map(|l| l.chars().count()).max().unwrap_or(8).max(6);
            out.push_str(&format!("{:<name_w$}", "Technique"));
            for l in &labels {
                out.push_str(&format!(" {l:>col_w$}"));
            }
            out.push('\n');
            for r in results {
                if let CellOutcome::Multi { report } = &r.outcome {
                    out.push_str(&format!("{:<name_w$}", r.cell_name()));
                    for row in &report.labels {
                        out.push_str(&format!(" {:>col_w$.2}", row.accuracy));
                    }
                    out.push('\n');
                }
            }
        }
    }
    Some(out)
}

/// (c) Weighted-average P/R/F1/support rows, sorted by weighted F1
/// descending (ties by technique name).
fn weighted_table(results: &[RunResult], format: TableFormat) -> String {
    let mut rows: Vec<(String, f64, f64, f64, usize)> = results
        .iter()
        .filter_map(|r| {
            let (avg, support) = match &r.outcome {
                CellOutcome::Single { report, .. } => (&report.weighted_avg, report.total_support),
                CellOutcome::Multi { report } => (&report.weighted_avg, report.total_support),
                CellOutcome::Failed { .. } => return None,
            };
            Some((
                r.cell_name(),
                avg.precision,
                avg.recall,
                avg.f1,
                support,
            ))
        })
        .collect();
    rows.sort_by(|a, b| b.3.total_cmp(&a.3).then_with(|| a.0.cmp(&b.0)));

    let mut out = String::new();
    match format {
        TableFormat::Csv => {
            out.push_str("technique,weighted_precision,weighted_recall,weighted_f1,support\n");
            for (name, p, r, f, s) in &rows {
                out.push_str(&format!("{},{p},{r},{f},{s}\n", csv_escape(name)));
            }
        }
        TableFormat::Text => {
            let name_w = rows
                .iter()
                .map(|r| r.0.len())
                .chain(["Technique".len()])
                .max()
                .unwrap_or(12);
            out.push_str(&format!(
                "{:<name_w$} {:>9} {:>9} {:>10} {:>8}\n",
                "Technique", "Precision", "Recall", "F1-measure", "Support"
            ));
            for (name, p, r, f, s) in &rows {
                out.push_str(&format!(
                    "{name:<name_w$} {p:>9.2} {r:>9.2} {f:>10.2} {s:>8}\n"
                ));
            }
        }
    }
    out
}

/// Writes the result tables into `dir` and returns the written paths.
pub fn emit_tables(results: &[RunResult], dir: &Path, format: TableFormat) -> Result<Vec<PathBuf>> {
    if results.is_empty() {
        return Err(Error::EmptyInput);
    }
    let ext = match format {
        TableFormat::Csv => "csv",
        TableFormat::Text => "txt",
    };
    let mut written = Vec::new();

    let matrix = accuracy_matrix(results, format);
    let path = dir.join(format!("accuracy_matrix.{ext}"));
    write_file(&path, &matrix)?;
    written.push(path);

    if let Some(table) = per_label_accuracy_table(results, format) {
        let path = dir.join(format!("per_label_accuracy.{ext}"));
        write_file(&path, &table)?;
        written.push(path);
    }

    let weighted = weighted_table(results, format);
    let path = dir.join(format!("weighted_averages.{ext}"));
    write_file(&path, &weighted)?;
    written.push(path);

    Ok(written)
}

/// Metric value of one cell, if the cell carries it.
pub fn chart_value(result: &RunResult, metric: ChartMetric) -> Option<f64> {
    match (&result.outcome, metric) {
        (CellOutcome::Single { report, .. }, ChartMetric::WeightedF1) => Some(report.weighted_avg.f1),
        (CellOutcome::Multi { report }, ChartMetric::WeightedF1) => Some(report.weighted_avg.f1),
        (CellOutcome::Multi { report }, ChartMetric::SampleF1) => Some(report.sample_avg.f1),
        (CellOutcome::Multi { report }, ChartMetric::Auc) => report.weighted_auc,
        _ => None,
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn bar_chart_svg(title: &str, rows: &[(String, f64)]) -> String {
    let label_w = 170.0;
    let bar_max = 420.0;
    let row_h = 22.0;
    let top = 36.0;
    let width = label_w + bar_max + 90.0;
    let height = top + rows.len() as f64 * row_h + 16.0;
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" \
         viewBox=\"0 0 {width:.0} {height:.0}\" font-family=\"monospace\" font-size=\"12\">\n"
    ));
    svg.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{width:.0}\" height=\"{height:.0}\" fill=\"white\"/>\n"
    ));
    svg.push_str(&format!(
        "  <text x=\"12\" y=\"20\" font-size=\"14\">{}</text>\n",
        xml_escape(title)
    ));
    for (i, (name, value)) in rows.iter().enumerate() {
        let y = top + i as f64 * row_h;
        let bar = value.clamp(0.0, 1.0) * bar_max;
        svg.push_str(&format!(
            "  <text x=\"{:.0}\" y=\"{:.0}\" text-anchor=\"end\">{}</text>\n",
            label_w - 8.0,
            y + 15.0,
            xml_escape(name)
        ));
        svg.push_str(&format!(
            "  <rect x=\"{label_w:.0}\" y=\"{:.0}\" width=\"{bar:.2}\" height=\"14\" fill=\"#4472c4\"/>\n",
            y + 3.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.0}\">{value:.4}</text>\n",
            label_w + bar + 6.0,
            y + 15.0
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

/// Emits `chart_<metric>.csv` (label,value pairs) and a self-contained SVG
/// bar chart, both sorted by value descending. Values are exactly the table
/// values. Errors when no cell carries the metric (wrong mode).
pub fn emit_chart(results: &[RunResult], metric: ChartMetric, dir: &Path) -> Result<Vec<PathBuf>> {
    let mut rows: Vec<(String, f64)> = results
        .iter()
        .filter_map(|r| chart_value(r, metric).map(|v| (r.cell_name(), v)))
        .collect();
    if rows.is_empty() {
        let mode = results
            .iter()
            .find_map(|r| match &r.outcome {
                CellOutcome::Single { .. } => Some("single-label"),
                CellOutcome::Multi { .. } => Some("multi-label"),
                CellOutcome::Failed { .. } => None,
            })
            .unwrap_or("unknown");
        return Err(Error::MetricUnavailable {
            metric: metric.as_str().to_string(),
            mode: mode.to_string(),
        });
    }
    rows.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));

    let mut csv = String::from("technique,value\n");
    for (name, value) in &rows {
        csv.push_str(&format!("{},{value}\n", csv_escape(name)));
    }
    let csv_path = dir.join(format!("chart_{}.csv", metric.as_str()));
    write_file(&csv_path, &csv)?;

    let svg = bar_chart_svg(metric.as_str(), &rows);
    let svg_path = dir.join(format!("chart_{}.svg", metric.as_str()));
    write_file(&svg_path, &svg)?;

    Ok(vec![csv_path, svg_path])
}

pub fn save_results(results: &[RunResult], path: &Path) -> Result<()> {
    let json = serde_json::to_string_pretty(results).expect("results serialize");
    write_file(path, &json)
}

pub fn load_results(path: &Path) -> Result<Vec<RunResult>> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    serde_json::from_str(&text).map_err(|e| Error::json(path.display().to_string(), e))
}

#[derive(Debug, Serialize, Deserialize)]
struct ManifestEntry {
    path: String,
    sha256: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    format_version: u32,
    outputs: Vec<ManifestEntry>,
}

/// Writes `manifest.json` listing every produced file (path relative to
/// `dir`) with its SHA-256 content hash, sorted by path.
pub fn write_manifest(dir: &Path, files: &[PathBuf]) -> Result<PathBuf> {
    let mut outputs = Vec::with_capacity(files.len());
    for file in files {
        let bytes =
            std::fs::read(file).map_err(|e| Error::io(file.display().to_string(), e))?;
        let rel = file
            .strip_prefix(dir)
            .unwrap_or(file)
            .to_string_lossy()
            .replace('\\', "/");
        outputs.push(ManifestEntry {
            path: rel,
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
    }
    outputs.sort_by(|a, b| a.path.cmp(&b.path));
    let manifest = Manifest {
        format_version: crate::corpus::FORMAT_VERSION,
        outputs,
    };
    let path = dir.join("manifest.json");
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write_file(&path, &json)?;
    Ok(path)
}
