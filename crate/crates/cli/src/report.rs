//! Tabular run outputs and their file formats.

use std::path::Path;

use anyhow::Context;
use interdisc::analysis::{BetweennessIdrReport, BinnedAuc, DistanceHistogram, RegressionReport};
use interdisc::distance::DistanceKind;
use interdisc::embeddings::EmbeddingMethod;
use interdisc::linkpred::ExperimentReport;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::config::RegressionMode;

pub const RESULTS_FILE: &str = "results.json";
pub const TABLE_CSV: &str = "prediction.csv";
pub const TABLE_MD: &str = "prediction.md";
pub const CURVES_FILE: &str = "curves.csv";
pub const REGRESSION_CSV: &str = "regression.csv";
pub const REGRESSION_MD: &str = "regression.md";
pub const HISTOGRAMS_FILE: &str = "histograms.csv";
pub const CORRELATIONS_FILE: &str = "correlations.csv";
pub const ANALYSIS_FILE: &str = "analysis.json";
pub const DISTANCES_DIR: &str = "distances";
pub const CURVE_FIGURE: &str = "auc_vs_distance.svg";

pub fn histogram_figure(kind: DistanceKind) -> String {
    format!("histogram_{kind}.svg")
}

pub fn write_csv<S: Serialize>(path: &Path, rows: &[S]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<D: DeserializeOwned>(path: &Path) -> anyhow::Result<Vec<D>> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    r.deserialize()
        .collect::<Result<Vec<D>, _>>()
        .with_context(|| format!("reading {}", path.display()))
}

pub fn write_json<S: Serialize>(path: &Path, value: &S) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// One method's row of the prediction comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictionRow {
    pub method: EmbeddingMethod,
    pub seeds: usize,
    pub mean_auc: f64,
    pub mean_idr_auc: Option<f64>,
    /// `AUC (IDR AUC)` to three decimals.
    pub cell: String,
}

impl From<&ExperimentReport> for PredictionRow {
    fn from(r: &ExperimentReport) -> Self {
        PredictionRow {
            method: r.method,
            seeds: r.seeds.len(),
            mean_auc: r.mean_auc,
            mean_idr_auc: r.mean_idr_auc,
            cell: r.table_cell(),
        }
    }
}

/// Markdown table with one row per method.
pub fn prediction_markdown(rows: &[PredictionRow]) -> String {
    let mut s = String::from("| Method | AUC (IDR AUC) |\n|---|---|\n");
    for r in rows {
        s += &format!("| {} | {} |\n", r.method.display_name(), r.cell);
    }
    s
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub method: EmbeddingMethod,
    pub kind: DistanceKind,
    pub bin: usize,
    pub low: f64,
    pub high: f64,
    pub midpoint: f64,
    pub n_pos: usize,
    pub n_neg: usize,
    /// Empty when the bin fails the 25/25 rule.
    pub auc: Option<f64>,
}

pub fn curve_rows(method: EmbeddingMethod, curve: &BinnedAuc) -> Vec<CurveRow> {
    curve
        .bins
        .iter()
        .enumerate()
        .map(|(i, b)| CurveRow {
            method,
            kind: curve.kind,
            bin: i,
            low: b.low,
            high: b.high,
            midpoint: b.midpoint(),
            n_pos: b.n_pos,
            n_neg: b.n_neg,
            auc: b.auc,
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegressionRow {
    pub method: EmbeddingMethod,
    pub kind: DistanceKind,
    pub mode: RegressionMode,
    pub n: Option<usize>,
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub std_error: Option<f64>,
    pub t_statistic: Option<f64>,
    pub p_value: Option<f64>,
    pub significant_5pct: Option<bool>,
    pub standardized_slope: Option<f64>,
    /// Slope with a star when significant at 5%, or `n/a`.
    pub starred: String,
    pub starred_standardized: String,
    /// Why no regression was fitted.
    pub note: Option<String>,
}

impl RegressionRow {
    pub fn new(
        method: EmbeddingMethod,
        kind: DistanceKind,
        mode: RegressionMode,
        fit: Result<RegressionReport, String>,
    ) -> Self {
        match fit {
            Ok(r) => RegressionRow {
                method,
                kind,
                mode,
                n: Some(r.n),
                slope: Some(r.slope),
                intercept: Some(r.intercept),
                std_error: Some(r.std_error),
                t_statistic: Some(r.t_statistic),
                p_value: Some(r.p_value),
                significant_5pct: Some(r.significant_5pct),
                standardized_slope: Some(r.standardized_slope),
                starred: r.starred(),
                starred_standardized: r.starred_standardized(),
                note: None,
            },
            Err(note) => RegressionRow {
                method,
                kind,
                mode,
                n: None,
                slope: None,
                intercept: None,
                std_error: None,
                t_statistic: None,
                p_value: None,
                significant_5pct: None,
                standardized_slope: None,
                starred: "n/a".into(),
                starred_standardized: "n/a".into(),
                note: Some(note),
            },
        }
    }
}

/// Methods as rows, distance kinds as columns, starred slopes in the cells.
pub fn regression_markdown(rows: &[RegressionRow]) -> String {
    let mut kinds: Vec<DistanceKind> = Vec::new();
    let mut methods: Vec<EmbeddingMethod> = Vec::new();
    for r in rows {
        if !kinds.contains(&r.kind) {
            kinds.push(r.kind);
        }
        if !methods.contains(&r.method) {
            methods.push(r.method);
        }
    }
    let mut s = String::from("| Method |");
    for k in &kinds {
        s += &format!(" {} |", k.display_name());
    }
    s += "\n|---|";
    s += &"---|".repeat(kinds.len());
    s.push('\n');
    for m in &methods {
        s += &format!("| {} |", m.display_name());
        for k in &kinds {
            let cell = rows
                .iter()
                .find(|r| r.method == *m && r.kind == *k)
                .map_or("n/a", |r| r.starred.as_str());
            s += &format!(" {cell} |");
        }
        s.push('\n');
    }
    s += "\n\\* significant at 5%\n";
    s
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramRow {
    pub kind: DistanceKind,
    pub bin: usize,
    pub low: f64,
    pub high: f64,
    pub positive: usize,
    pub negative: usize,
    pub unreachable: usize,
}

pub fn histogram_rows(h: &DistanceHistogram) -> Vec<HistogramRow> {
    (0..h.positive.len())
        .map(|i| HistogramRow {
            kind: h.kind,
            bin: i,
            low: h.edges[i],
            high: h.edges[i + 1],
            positive: h.positive[i],
            negative: h.negative[i],
            unreachable: h.unreachable,
        })
        .collect()
}

/// Inverse of [`histogram_rows`] for one kind's consecutive rows.
pub fn histogram_from_rows(rows: &[HistogramRow]) -> Option<DistanceHistogram> {
    let first = rows.first()?;
    let mut edges: Vec<f64> = rows.iter().map(|r| r.low).collect();
    edges.push(rows.last()?.high);
    Some(DistanceHistogram {
        kind: first.kind,
        edges,
        positive: rows.iter().map(|r| r.positive).collect(),
        negative: rows.iter().map(|r| r.negative).collect(),
        unreachable: first.unreachable,
    })
}

/// Spearman correlation of a distance with training-graph edge betweenness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationRow {
    pub seed: u64,
    pub kind: DistanceKind,
    pub n: usize,
    pub spearman_rho: Option<f64>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanCorrelation {
    pub kind: DistanceKind,
    pub seeds: usize,
    pub mean_spearman_rho: Option<f64>,
}

pub fn mean_correlations(rows: &[CorrelationRow], kinds: &[DistanceKind]) -> Vec<MeanCorrelation> {
    kinds
        .iter()
        .map(|&kind| {
            let rhos: Vec<f64> = rows.iter().filter(|r| r.kind == kind).filter_map(|r| r.spearman_rho).collect();
            MeanCorrelation {
                kind,
                seeds: rhos.len(),
                mean_spearman_rho: (!rhos.is_empty()).then(|| rhos.iter().sum::<f64>() / rhos.len() as f64),
            }
        })
        .collect()
}

/// Combined analysis output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    /// Betweenness of cross-label against same-label edges on the full graph.
    pub betweenness_idr: Option<BetweennessIdrReport>,
    pub betweenness_note: Option<String>,
    pub correlations: Vec<MeanCorrelation>,
    pub curves: Vec<(EmbeddingMethod, BinnedAuc)>,
    pub regressions: Vec<RegressionRow>,
    pub histograms: Vec<DistanceHistogram>,
}
