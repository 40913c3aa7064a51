//! Experiment reports, the comparison table and ROC export.

use std::fmt::Write;

use psg_core::metrics::{roc_points, DifficultyEval, TagEval};
use psg_core::model::{BaselineConfig, TrainConfig, TrainingLog};
use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetInfo {
    /// `sha256:<hex>` of the dataset file.
    pub fingerprint: String,
    pub records: usize,
    /// Records dropped for having no in-vocabulary tag.
    pub dropped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitInfo {
    pub seed: u64,
    pub test_fraction: f64,
    pub train: usize,
    pub test: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamCounts {
    pub model: u64,
    /// One shared-encoder model at the same dims.
    pub multi_task: u64,
    /// Two separate single-task models at the same dims.
    pub two_single_task: u64,
    pub ratio: f64,
}

/// One trained model evaluated on one test split. Wall-clock time is kept
/// out of this file (see [`Timing`]) so repeated runs compare byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub model: String,
    /// Difficulty loss weight; `None` for single-task and baseline runs.
    pub lambda: Option<f64>,
    pub dataset: DatasetInfo,
    pub split: SplitInfo,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub train_config: Option<TrainConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub baseline_config: Option<BaselineConfig>,
    pub vocab: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tag_eval: Option<TagEval>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub difficulty_eval: Option<DifficultyEval>,
    pub param_counts: ParamCounts,
    pub training_log: TrainingLog,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub command: String,
    pub wall_clock_secs: f64,
}

fn pct(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{:.2}", v * 100.0))
}

fn num(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.2}"))
}

/// Comparison table with one row per report: accuracy, one CS column per
/// theta, MAE, macro AUROC and macro F1. Percent columns are scaled by 100;
/// MAE is in difficulty levels. Missing values print as `-`.
pub fn render_table(reports: &[ExperimentReport], thetas: &[usize]) -> String {
    let mut header = vec!["Model".to_string(), "lambda".to_string(), "Accuracy".to_string()];
    header.extend(thetas.iter().map(|t| format!("CS(theta={t})")));
    header.extend(["MAE", "AUROC", "F1-Macro"].map(String::from));
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            let d = r.difficulty_eval.as_ref();
            let t = r.tag_eval.as_ref();
            let mut row = vec![r.model.clone(), r.lambda.map_or_else(|| "-".to_string(), |l| format!("{l}")), pct(d.map(|d| d.accuracy))];
            // CS is stored in percent already.
            row.extend(thetas.iter().map(|&th| num(d.and_then(|d| d.cs_at(th)))));
            row.push(num(d.map(|d| d.mae)));
            row.push(pct(t.and_then(|t| t.macro_auroc)));
            row.push(pct(t.map(|t| t.macro_f1)));
            row
        })
        .collect();
    let widths: Vec<usize> = (0..header.len())
        .map(|c| rows.iter().map(|r| r[c].len()).chain([header[c].len()]).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    let line = |cells: &[String], out: &mut String| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (c, w))| if i == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
            .collect();
        let _ = writeln!(out, "| {} |", padded.join(" | "));
    };
    line(&header, &mut out);
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    line(&rule, &mut out);
    for row in &rows {
        line(row, &mut out);
    }
    out
}

/// `label,threshold,fpr,tpr` rows for every label with both classes in the
/// test labels. The first point of each curve has threshold `inf`.
pub fn roc_csv(label_names: &[String], probs: &[Vec<f64>], labels: &[Vec<u8>]) -> Result<String> {
    let mut out = String::from("label,threshold,fpr,tpr\n");
    for (j, name) in label_names.iter().enumerate() {
        let scores: Vec<f64> = probs.iter().map(|p| p[j]).collect();
        let truth: Vec<u8> = labels.iter().map(|y| y[j]).collect();
        let curve = match roc_points(&scores, &truth) {
            Ok(c) => c,
            Err(psg_core::metrics::MetricsError::Undefined) => continue,
            Err(e) => return Err(e.into()),
        };
        let name = if name.contains([',', '"']) { format!("\"{}\"", name.replace('"', "\"\"")) } else { name.clone() };
        for p in curve.points {
            let _ = writeln!(out, "{name},{},{},{}", p.threshold, p.fpr, p.tpr);
        }
    }
    Ok(out)
}
