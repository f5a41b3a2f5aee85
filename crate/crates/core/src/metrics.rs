//! Evaluation metrics: precision/recall/F1/accuracy, weighted and sample
//! averages, AUC-ROC, hamming score/loss, and the per-class classification
//! report.
//!
//! Zero-denominator convention: the metric value is 0.0 and the report
//! carries a degenerate flag, so weighted averages stay total and the
//! condition remains visible.

use serde::{Deserialize, Serialize};

use crate::corpus::LabelSchema;
use crate::error::{Error, Result};
use crate::multilabel::LabelVector;

/// One-vs-rest confusion counts for a single class or label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub true_pos: usize,
    pub false_pos: usize,
    pub false_neg: usize,
    pub true_neg: usize,
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.true_pos + self.false_pos + self.false_neg + self.true_neg
    }

    /// True when precision's denominator (predicted positives) is zero.
    pub fn precision_degenerate(&self) -> bool {
        self.true_pos + self.false_pos == 0
    }

    /// True when recall's denominator (actual positives) is zero.
    pub fn recall_degenerate(&self) -> bool {
        self.true_pos + self.false_neg == 0
    }

    pub fn support(&self) -> usize {
        self.true_pos + self.false_neg
    }
}

/// One-vs-rest confusion counts of `cls` over parallel label sequences.
pub fn confusion(y_true: &[usize], y_pred: &[usize], cls: usize) -> Result<ConfusionCounts> {
    if y_true.is_empty() {
        return Err(Error::EmptyInput);
    }
    if y_true.len() != y_pred.len() {
        return Err(Error::LengthMismatch {
            left: y_true.len(),
            right: y_pred.len(),
        });
    }
    let mut c = ConfusionCounts {
        true_pos: 0,
        false_pos: 0,
        false_neg: 0,
        true_neg: 0,
    };
    for (&t, &p) in y_true.iter().zip(y_pred) {
        match (t == cls, p == cls) {
            (true, true) => c.true_pos += 1,
            (false, true) => c.false_pos += 1,
            (true, false) => c.false_neg += 1,
            (false, false) => c.true_neg += 1,
        }
    }
    Ok(c)
}

/// `tp / (tp + fp)`; 0.0 when no positives were predicted.
pub fn precision(c: &ConfusionCounts) -> f64 {
    let denom = c.true_pos + c.false_pos;
    if denom == 0 {
        0.0
    } else {
        c.true_pos as f64 / denom as f64
    }
}

/// `tp / (tp + fn)`; 0.0 when the class has no true instances.
pub fn recall(c: &ConfusionCounts) -> f64 {
    let denom = c.true_pos + c.false_neg;
    if denom == 0 {
        0.0
    } else {
        c.true_pos as f64 / denom as f64
    }
}

/// Harmonic mean `2pr / (p + r)`; 0.0 when both are zero.
pub fn f1(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

/// Fraction of exact matches between the two label sequences.
pub fn accuracy(y_true: &[usize], y_pred: &[usize]) -> Result<f64> {
    if y_true.is_empty() {
        return Err(Error::EmptyInput);
    }
    if y_true.len() != y_pred.len() {
        return Err(Error::LengthMismatch {
            left: y_true.len(),
            right: y_pred.len(),
        });
    }
    let hits = y_true.iter().zip(y_pred).filter(|(t, p)| t == p).count();
    Ok(hits as f64 / y_true.len() as f64)
}

/// Support-weighted average `sum(v_i * s_i) / sum(s_i)`. Classes with zero
/// support contribute to neither sum.
pub fn weighted_average(values: &[f64], supports: &[usize]) -> Result<f64> {
    if values.len() != supports.len() {
        return Err(Error::LengthMismatch {
            left: values.len(),
            right: supports.len(),
        });
    }
    let total: usize = supports.iter().sum();
    if total == 0 {
        return Err(Error::ZeroSupport);
    }
    let acc: f64 = values
        .iter()
        .zip(supports)
        .map(|(&v, &s)| v * s as f64)
        .sum();
    Ok(acc / total as f64)
}

/// Per-instance precision/recall/F1 averaged over instances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleAverage {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Instances with an empty predicted set (their precision counted as 0).
    pub empty_pred_instances: usize,
    /// Instances with an empty true set (their recall counted as 0).
    pub empty_true_instances: usize,
}

/// Sample-averaged precision, recall, and F1 over multi-label vectors.
pub fn sample_average_prf(y_true: &[LabelVector], y_pred: &[LabelVector]) -> Result<SampleAverage> {
    check_label_matrix(y_true, y_pred)?;
    let n = y_true.len() as f64;
    let mut p_sum = 0.0;
    let mut r_sum = 0.0;
    let mut f_sum = 0.0;
    let mut empty_pred = 0;
    let mut empty_true = 0;
    for (t, p) in y_true.iter().zip(y_pred) {
        let inter = t
            .bits()
            .iter()
            .zip(p.bits())
            .filter(|(&a, &b)| a && b)
            .count() as f64;
        let t_size = t.count_ones();
        let p_size = p.count_ones();
        let pi = if p_size == 0 {
            empty_pred += 1;
            0.0
        } else {
            inter / p_size as f64
        };
        let ri = if t_size == 0 {
            empty_true += 1;
            0.0
        } else {
            inter / t_size as f64
        };
        p_sum += pi;
        r_sum += ri;
        f_sum += f1(pi, ri);
    }
    Ok(SampleAverage {
        precision: p_sum / n,
        recall: r_sum / n,
        f1: f_sum / n,
        empty_pred_instances: empty_pred,
        empty_true_instances: empty_true,
    })
}

/// AUC-ROC as the Mann-Whitney rank statistic: the fraction of
/// (positive, negative) pairs ranked correctly, ties counting one half.
/// Errors when either class is absent.
pub fn auc_roc(scores: &[f64], y: &[bool]) -> Result<f64> {
    if scores.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: scores.len(),
            right: y.len(),
        });
    }
    let n_pos = y.iter().filter(|&&b| b).count();
    let n_neg = y.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::SingleClassAuc);
    }

    // Average ranks over score ties, then the rank-sum formula.
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut ranks = vec![0.0f64; scores.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let avg_rank = (i + j + 2) as f64 / 2.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg_rank;
        }
        i = j + 1;
    }
    let rank_sum: f64 = y
        .iter()
        .zip(&ranks)
        .filter_map(|(&b, &r)| b.then_some(r))
        .sum();
    let u = rank_sum - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Ok(u / (n_pos * n_neg) as f64)
}

fn check_label_matrix(y_true: &[LabelVector], y_pred: &[LabelVector]) -> Result<()> {
    if y_true.is_empty() {
        return Err(Error::EmptyInput);
    }
    if y_true.len() != y_pred.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} true rows vs {} predicted rows",
            y_true.len(),
            y_pred.len()
        )));
    }
    let width = y_true[0].len();
    for v in y_true.iter().chain(y_pred) {
        if v.len() != width {
            return Err(Error::ShapeMismatch(format!(
                "row width {} vs {}",
                v.len(),
                width
            )));
        }
    }
    Ok(())
}

/// Fraction of mismatched bits over all (instance, label) cells.
pub fn hamming_loss(y_true: &[LabelVector], y_pred: &[LabelVector]) -> Result<f64> {
    check_label_matrix(y_true, y_pred)?;
    let labels = y_true[0].len();
    let mut wrong = 0usize;
    for (t, p) in y_true.iter().zip(y_pred) {
        wrong += t
            .bits()
            .iter()
            .zip(p.bits())
            .filter(|(a, b)| a != b)
            .count();
    }
    Ok(wrong as f64 / (y_true.len() * labels) as f64)
}

/// Mean per-instance intersection-over-union of true and predicted label
/// sets; an instance with both sets empty scores 1.
pub fn hamming_score(y_true: &[LabelVector], y_pred: &[LabelVector]) -> Result<f64> {
    check_label_matrix(y_true, y_pred)?;
    let mut total = 0.0;
    for (t, p) in y_true.iter().zip(y_pred) {
        let mut inter = 0usize;
        let mut union = 0usize;
        for (&a, &b) in t.bits().iter().zip(p.bits()) {
            if a && b {
                inter += 1;
            }
            if a || b {
                union += 1;
            }
        }
        total += if union == 0 {
            1.0
        } else {
            inter as f64 / union as f64
        };
    }
    Ok(total / y_true.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Averages {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub name: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
    pub precision_degenerate: bool,
    pub recall_degenerate: bool,
}

/// Per-class rows plus accuracy, macro, and weighted averages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub classes: Vec<ClassMetrics>,
    pub accuracy: f64,
    pub macro_avg: Averages,
    pub weighted_avg: Averages,
    pub total_support: usize,
}

/// Builds the single-label classification report over every schema class.
pub fn classification_report(
    y_true: &[usize],
    y_pred: &[usize],
    schema: &LabelSchema,
) -> Result<ClassReport> {
    if y_true.is_empty() {
        return Err(Error::EmptyInput);
    }
    if y_true.len() != y_pred.len() {
        return Err(Error::LengthMismatch {
            left: y_true.len(),
            right: y_pred.len(),
        });
    }
    let n_classes = schema.len();
    if let Some(&bad) = y_true.iter().chain(y_pred).find(|&&c| c >= n_classes) {
        return Err(Error::ClassOutOfRange {
            index: bad,
            n_classes,
        });
    }

    let mut classes = Vec::with_capacity(n_classes);
    for cls in 0..n_classes {
        let c = confusion(y_true, y_pred, cls)?;
        let p = precision(&c);
        let r = recall(&c);
        classes.push(ClassMetrics {
            name: schema.name(cls).to_string(),
            precision: p,
            recall: r,
            f1: f1(p, r),
            support: c.support(),
            precision_degenerate: c.precision_degenerate(),
            recall_degenerate: c.recall_degenerate(),
        });
    }

    let k = n_classes as f64;
    let macro_avg = Averages {
        precision: classes.iter().map(|c| c.precision).sum::<f64>() / k,
        recall: classes.iter().map(|c| c.recall).sum::<f64>() / k,
        f1: classes.iter().map(|c| c.f1).sum::<f64>() / k,
    };
    let supports: Vec<usize> = classes.iter().map(|c| c.support).collect();
    let weighted_avg = Averages {
        precision: weighted_average(
            &classes.iter().map(|c| c.precision).collect::<Vec<_>>(),
            &supports,
        )?,
        recall: weighted_average(
            &classes.iter().map(|c| c.recall).collect::<Vec<_>>(),
            &supports,
        )?,
        f1: weighted_average(&classes.iter().map(|c| c.f1).collect::<Vec<_>>(), &supports)?,
    };

    Ok(ClassReport {
        classes,
        accuracy: accuracy(y_true, y_pred)?,
        macro_avg,
        weighted_avg,
        total_support: y_true.len(),
    })
}

impl ClassReport {
    /// Aligned-text rendering: per-class rows, then accuracy, macro avg,
    /// and weighted avg.
    pub fn to_aligned_text(&self) -> String {
        let name_width = self
            .classes
            .iter()
            .map(|c| c.name.chars().count())
            .chain(["weighted avg".len()])
            .max()
            .unwrap_or(12);
        let mut out = String::new();
        out.push_str(&format!(
            "{:<name_width$} {:>9} {:>9} {:>9} {:>9}\n",
            "", "precision", "recall", "f1-score", "support"
        ));
        out.push('\n');
        for c in &self.classes {
            out.push_str(&format!(
                "{:<name_width$} {:>9.2} {:>9.2} {:>9.2} {:>9}\n",
                c.name, c.precision, c.recall, c.f1, c.support
            ));
        }
        out.push('\n');
        out.push_str(&format!(
            "{:<name_width$} {:>9} {:>9} {:>9.2} {:>9}\n",
            "accuracy", "", "", self.accuracy, self.total_support
        ));
        out.push_str(&format!(
            "{:<name_width$} {:>9.2} {:>9.2} {:>9.2} {:>9}\n",
            "macro avg",
            self.macro_avg.precision,
            self.macro_avg.recall,
            self.macro_avg.f1,
            self.total_support
        ));
        out.push_str(&format!(
            "{:<name_width$} {:>9.2} {:>9.2} {:>9.2} {:>9}\n",
            "weighted avg",
            self.weighted_avg.precision,
            self.weighted_avg.recall,
            self.weighted_avg.f1,
            self.total_support
        ));
        out
    }

    /// CSV rendering with full-precision values (re-parseable).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("class,precision,recall,f1,support\n");
        for c in &self.classes {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                c.name, c.precision, c.recall, c.f1, c.support
            ));
        }
        out.push_str(&format!("accuracy,,,{},{}\n", self.accuracy, self.total_support));
        out.push_str(&format!(
            "macro avg,{},{},{},{}\n",
            self.macro_avg.precision, self.macro_avg.recall, self.macro_avg.f1, self.total_support
        ));
        out.push_str(&format!(
            "weighted avg,{},{},{},{}\n",
            self.weighted_avg.precision,
            self.weighted_avg.recall,
            self.weighted_avg.f1,
            self.total_support
        ));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelReportRow {
    pub name: String,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
    /// None when the test set has no positive or no negative for the label,
    /// or when no scores were supplied.
    pub auc: Option<f64>,
    pub precision_degenerate: bool,
    pub recall_degenerate: bool,
}

/// Per-label rows plus weighted averages, sample averages, AUC aggregates,
/// and the hamming pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiLabelReport {
    pub labels: Vec<LabelReportRow>,
    /// Unweighted mean of the per-label accuracies.
    pub mean_label_accuracy: f64,
    pub weighted_avg: Averages,
    pub total_support: usize,
    pub sample_avg: SampleAverage,
    /// Support-weighted mean of the defined per-label AUCs.
    pub weighted_auc: Option<f64>,
    /// Unweighted mean of the defined per-label AUCs.
    pub macro_auc: Option<f64>,
    pub hamming_score: f64,
    pub hamming_loss: f64,
    /// Fraction of instances predicted with no label at all.
    pub empty_prediction_rate: f64,
}

/// Builds the multi-label report. `scores[i][l]` is the positive score of
/// label `l` on instance `i`; pass `None` to skip the AUC columns.
pub fn multilabel_report(
    y_true: &[LabelVector],
    y_pred: &[LabelVector],
    scores: Option<&[Vec<f64>]>,
    schema: &LabelSchema,
) -> Result<MultiLabelReport> {
    check_label_matrix(y_true, y_pred)?;
    let n_labels = schema.len();
    if y_true[0].len() != n_labels {
        return Err(Error::ShapeMismatch(format!(
            "label vectors have {} bits, schema has {}",
            y_true[0].len(),
            n_labels
        )));
    }
    if let Some(s) = scores {
        if s.len() != y_true.len() || s.iter().any(|row| row.len() != n_labels) {
            return Err(Error::ShapeMismatch("score matrix shape".into()));
        }
    }

    let mut labels = Vec::with_capacity(n_labels);
    for l in 0..n_labels {
        let t: Vec<usize> = y_true.iter().map(|v| usize::from(v.get(l))).collect();
        let p: Vec<usize> = y_pred.iter().map(|v| usize::from(v.get(l))).collect();
        let c = confusion(&t, &p, 1)?;
        let prec = precision(&c);
        let rec = recall(&c);
        let auc = scores.and_then(|s| {
            let label_scores: Vec<f64> = s.iter().map(|row| row[l]).collect();
            let flags: Vec<bool> = y_true.iter().map(|v| v.get(l)).collect();
            auc_roc(&label_scores, &flags).ok()
        });
        let hits = t.iter().zip(&p).filter(|(a, b)| a == b).count();
        labels.push(LabelReportRow {
            name: schema.name(l).to_string(),
            accuracy: hits as f64 / y_true.len() as f64,
            precision: prec,
            recall: rec,
            f1: f1(prec, rec),
            support: c.support(),
            auc,
            precision_degenerate: c.precision_degenerate(),
            recall_degenerate: c.recall_degenerate(),
        });
    }

    let supports: Vec<usize> = labels.iter().map(|r| r.support).collect();
    let total_support: usize = supports.iter().sum();
    let weighted_avg = Averages {
        precision: weighted_average(
            &labels.iter().map(|r| r.precision).collect::<Vec<_>>(),
            &supports,
        )?,
        recall: weighted_average(
            &labels.iter().map(|r| r.recall).collect::<Vec<_>>(),
            &supports,
        )?,
        f1: weighted_average(&labels.iter().map(|r| r.f1).collect::<Vec<_>>(), &supports)?,
    };

    let defined: Vec<(f64, usize)> = labels
        .iter()
        .filter_map(|r| r.auc.map(|a| (a, r.support)))
        .collect();
    let (weighted_auc, macro_auc) = if defined.is_empty() {
        (None, None)
    } else {
        let support_total: usize = defined.iter().map(|&(_, s)| s).sum();
        let weighted = if support_total > 0 {
            Some(
                defined
                    .iter()
                    .map(|&(a, s)| a * s as f64)
                    .sum::<f64>()
                    / support_total as f64,
            )
        } else {
            None
        };
        let macro_mean = defined.iter().map(|&(a, _)| a).sum::<f64>() / defined.len() as f64;
        (weighted, Some(macro_mean))
    };

    let empty_predictions = y_pred.iter().filter(|v| v.count_ones() == 0).count();
    let mean_label_accuracy =
        labels.iter().map(|r| r.accuracy).sum::<f64>() / labels.len() as f64;

    Ok(MultiLabelReport {
        labels,
        mean_label_accuracy,
        weighted_avg,
        total_support,
        sample_avg: sample_average_prf(y_true, y_pred)?,
        weighted_auc,
        macro_auc,
        hamming_score: hamming_score(y_true, y_pred)?,
        hamming_loss: hamming_loss(y_true, y_pred)?,
        empty_prediction_rate: empty_predictions as f64 / y_pred.len() as f64,
    })
}

impl MultiLabelReport {
    /// CSV rendering with full-precision values.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,accuracy,precision,recall,f1,support,auc\n");
        for r in &self.labels {
            let auc = r.auc.map(|a| a.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{},{auc}\n",
                r.name, r.accuracy, r.precision, r.recall, r.f1, r.support
            ));
        }
        out.push_str(&format!(
            "weighted avg,,{},{},{},{},{}\n",
            self.weighted_avg.precision,
            self.weighted_avg.recall,
            self.weighted_avg.f1,
            self.total_support,
            self.weighted_auc.map(|a| a.to_string()).unwrap_or_default()
        ));
        out.push_str(&format!(
            "sample avg,,{},{},{},,\n",
            self.sample_avg.precision, self.sample_avg.recall, self.sample_avg.f1
        ));
        out.push_str(&format!("hamming score,{},,,,,\n", self.hamming_score));
        out.push_str(&format!("hamming loss,{},,,,,\n", self.hamming_loss));
        out
    }

    pub fn to_aligned_text(&self) -> String {
        let name_width = self
            .labels
            .iter()
            .map(|r| r.name.chars().count())
            .chain(["weighted avg".len()])
            .max()
            .unwrap_or(12);
        let mut out = String::new();
        out.push_str(&format!(
            "{:<name_width$} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9}\n",
            "", "accuracy", "precision", "recall", "f1-score", "support", "auc"
        ));
        out.push('\n');
        for r in &self.labels {
            let auc = r
                .auc
                .map(|a| format!("{a:>9.2}"))
                .unwrap_or_else(|| format!("{:>9}", "n/a"));
            out.push_str(&format!(
                "{:<name_width$} {:>9.2} {:>9.2} {:>9.2} {:>9.2} {:>9} {auc}\n",
                r.name, r.accuracy, r.precision, r.recall, r.f1, r.support
            ));
        }
        out.push('\n');
        out.push_str(&format!(
            "{:<name_width$} {:>9} {:>9.2} {:>9.2} {:>9.2} {:>9}\n",
            "weighted avg",
            "",
            self.weighted_avg.precision,
            self.weighted_avg.recall,
            self.weighted_avg.f1,
            self.total_support
        ));
        out.push_str(&format!(
            "{:<name_width$} {:>9} {:>9.2} {:>9.2} {:>9.2}\n",
            "sample avg",
            "",
            self.sample_avg.precision,
            self.sample_avg.recall,
            self.sample_avg.f1
        ));
        if let (Some(w), Some(m)) = (self.weighted_auc, self.macro_auc) {
            out.push_str(&format!(
                "{:<name_width$} weighted {w:.4}  macro {m:.4}\n",
                "auc"
            ));
        }
        out.push_str(&format!(
            "{:<name_width$} {:.4}\n",
            "hamming score", self.hamming_score
        ));
        out.push_str(&format!(
            "{:<name_width$} {:.4}\n",
            "hamming loss", self.hamming_loss
        ));
        out.push_str(&format!(
            "{:<name_width$} {:.4}\n",
            "empty predictions", self.empty_prediction_rate
        ));
        out
    }
}
