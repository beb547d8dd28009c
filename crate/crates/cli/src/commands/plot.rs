use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use interdisc::analysis::svg::{histogram_overlay, line_panels, Panel, Series};
use interdisc::distance::DistanceKind;
use interdisc::embeddings::EmbeddingMethod;

use crate::report::{
    histogram_figure, histogram_from_rows, read_csv, CurveRow, HistogramRow, CURVES_FILE, CURVE_FIGURE,
    HISTOGRAMS_FILE,
};

fn first_seen<T: PartialEq + Copy>(items: impl Iterator<Item = T>) -> Vec<T> {
    let mut out = Vec::new();
    for x in items {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// One panel per distance kind, one line per embedding method over the qualifying bins.
pub fn curve_panels(rows: &[CurveRow]) -> Vec<Panel> {
    let kinds: Vec<DistanceKind> = first_seen(rows.iter().map(|r| r.kind));
    let methods: Vec<EmbeddingMethod> = first_seen(rows.iter().map(|r| r.method));
    kinds
        .into_iter()
        .map(|kind| Panel {
            title: kind.display_name().into(),
            x_label: "citation distance".into(),
            y_label: "AUC".into(),
            series: methods
                .iter()
                .map(|&m| Series {
                    name: m.display_name().into(),
                    points: rows
                        .iter()
                        .filter(|r| r.kind == kind && r.method == m)
                        .filter_map(|r| r.auc.map(|a| (r.midpoint, a)))
                        .collect(),
                })
                .collect(),
        })
        .collect()
}

/// Renders the figures for the report files in `from` into `to`.
pub fn cmd_plot(from: &Path, to: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let curves = from.join(CURVES_FILE);
    let histograms = from.join(HISTOGRAMS_FILE);
    if !curves.exists() && !histograms.exists() {
        bail!("{} holds neither {CURVES_FILE} nor {HISTOGRAMS_FILE}", from.display());
    }
    std::fs::create_dir_all(to).with_context(|| format!("creating {}", to.display()))?;
    let mut written = Vec::new();
    let mut emit = |name: String, svg: String| -> anyhow::Result<()> {
        let path = to.join(name);
        std::fs::write(&path, svg).with_context(|| format!("writing {}", path.display()))?;
        written.push(path);
        Ok(())
    };
    if curves.exists() {
        let rows: Vec<CurveRow> = read_csv(&curves)?;
        emit(CURVE_FIGURE.into(), line_panels(&curve_panels(&rows)))?;
    }
    if histograms.exists() {
        let rows: Vec<HistogramRow> = read_csv(&histograms)?;
        for kind in first_seen(rows.iter().map(|r| r.kind)) {
            let of_kind: Vec<HistogramRow> = rows.iter().filter(|r| r.kind == kind).cloned().collect();
            if let Some(h) = histogram_from_rows(&of_kind) {
                let title = format!("{} distance", kind.display_name());
                emit(histogram_figure(kind), histogram_overlay(&h, &title, "citation distance"))?;
            }
        }
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(method: EmbeddingMethod, kind: DistanceKind, mid: f64, auc: Option<f64>) -> CurveRow {
        CurveRow { method, kind, bin: 0, low: mid - 0.1, high: mid + 0.1, midpoint: mid, n_pos: 30, n_neg: 30, auc }
    }

    #[test]
    fn panels_follow_kinds_and_methods() {
        let rows = vec![
            row(EmbeddingMethod::DeepWalk, DistanceKind::Network, 1.0, Some(0.8)),
            row(EmbeddingMethod::DeepWalk, DistanceKind::Network, 2.0, None),
            row(EmbeddingMethod::Role2Vec, DistanceKind::Network, 1.0, Some(0.7)),
            row(EmbeddingMethod::DeepWalk, DistanceKind::ScopusTopic, 0.5, None),
        ];
        let panels = curve_panels(&rows);
        assert_eq!(panels.len(), 2);
        assert_eq!(panels[0].series.len(), 2);
        assert_eq!(panels[0].series[0].points, vec![(1.0, 0.8)]);
        assert!(panels[1].series.iter().all(|s| s.points.is_empty()));
        let svg = line_panels(&panels);
        assert!(svg.contains("insufficient bins"));
    }
}
