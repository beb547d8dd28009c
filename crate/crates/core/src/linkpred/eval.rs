use serde::{Deserialize, Serialize};

use super::auc::compute_auc;
use super::features::{EdgeFeatures, FeatureMode};
use super::mlp::Mlp;
use crate::embeddings::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::graph::{CitationGraph, Edge, EdgeSplit};
use crate::scalar::Real;

/// A test edge with its ground truth and classifier score.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoredEdge {
    pub edge: Edge,
    pub positive: bool,
    pub score: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub auc: f64,
    /// AUC over cross-label test edges; `None` when that subset lacks a class.
    pub idr_auc: Option<f64>,
    pub n_test_pos: usize,
    pub n_test_neg: usize,
    pub n_idr_pos: usize,
    pub n_idr_neg: usize,
    pub seed: u64,
}

/// Scores `edges` with `model`. Symmetrized mode averages both endpoint orders.
pub fn score_edges<T: Real>(
    model: &Mlp<T>,
    emb: &EmbeddingMatrix<T>,
    edges: &[(Edge, bool)],
    mode: FeatureMode,
) -> Result<Vec<ScoredEdge>> {
    let feats = EdgeFeatures::from_edges(edges.iter().copied(), emb, mode)?;
    let raw = model.predict(&feats)?;
    let per_edge: Vec<f64> = match mode {
        FeatureMode::Canonical => raw.iter().map(|s| s.as_f64()).collect(),
        FeatureMode::Symmetrized => raw.chunks(2).map(|c| (c[0].as_f64() + c[1].as_f64()) / 2.0).collect(),
    };
    Ok(edges
        .iter()
        .zip(per_edge)
        .map(|(&(edge, positive), score)| ScoredEdge { edge, positive, score })
        .collect())
}

/// Overall and cross-label AUC of already-scored test edges.
pub fn report_from_scores(scored: &[ScoredEdge], g: &CitationGraph, seed: u64) -> Result<EvalReport> {
    let scores: Vec<f64> = scored.iter().map(|s| s.score).collect();
    let labels: Vec<bool> = scored.iter().map(|s| s.positive).collect();
    let auc = compute_auc(&scores, &labels)?;
    let mut idr_scores = Vec::new();
    let mut idr_labels = Vec::new();
    for s in scored {
        if g.is_cross_label(s.edge).ok_or(Error::Unlabeled)? {
            idr_scores.push(s.score);
            idr_labels.push(s.positive);
        }
    }
    let n_idr_pos = idr_labels.iter().filter(|&&l| l).count();
    let n_idr_neg = idr_labels.len() - n_idr_pos;
    let idr_auc = if n_idr_pos > 0 && n_idr_neg > 0 {
        Some(compute_auc(&idr_scores, &idr_labels)?)
    } else {
        None
    };
    let n_test_pos = labels.iter().filter(|&&l| l).count();
    Ok(EvalReport {
        auc,
        idr_auc,
        n_test_pos,
        n_test_neg: labels.len() - n_test_pos,
        n_idr_pos,
        n_idr_neg,
        seed,
    })
}

/// Test-set AUC and IDR AUC of `model` on split `s` of labeled graph `g`.
pub fn evaluate<T: Real>(
    model: &Mlp<T>,
    emb: &EmbeddingMatrix<T>,
    s: &EdgeSplit,
    g: &CitationGraph,
    mode: FeatureMode,
) -> Result<EvalReport> {
    if !g.is_labeled() {
        return Err(Error::Unlabeled);
    }
    if s.test_pos.is_empty() || s.test_neg.is_empty() {
        return Err(Error::SingleClass);
    }
    let edges: Vec<(Edge, bool)> = s.test_edges().collect();
    report_from_scores(&score_edges(model, emb, &edges, mode)?, g, s.seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labeled(labels: Vec<usize>) -> CitationGraph {
        let names: Vec<String> = (0..labels.len()).map(|i| i.to_string()).collect();
        let cats = (0..=*labels.iter().max().unwrap()).map(|c| format!("c{c}")).collect();
        CitationGraph::from_parts(names, []).with_labels(labels, cats).unwrap()
    }

    fn scored(rows: &[(usize, usize, bool, f64)]) -> Vec<ScoredEdge> {
        rows.iter()
            .map(|&(u, v, positive, score)| ScoredEdge { edge: Edge::new(u, v), positive, score })
            .collect()
    }

    #[test]
    fn four_edge_pair_counting() {
        // labels: 0,1 in A; 2,3 in B
        let g = labeled(vec![0, 0, 1, 1]);
        let t = scored(&[(0, 2, true, 0.9), (0, 1, true, 0.4), (1, 3, false, 0.6), (2, 3, false, 0.3)]);
        let r = report_from_scores(&t, &g, 3).unwrap();
        // pairs: (0.9 > 0.6), (0.9 > 0.3), (0.4 < 0.6), (0.4 > 0.3)
        assert_eq!(r.auc, 0.75);
        // cross-label: positive 0.9 vs negative 0.6
        assert_eq!(r.idr_auc, Some(1.0));
        assert_eq!((r.n_test_pos, r.n_test_neg, r.n_idr_pos, r.n_idr_neg, r.seed), (2, 2, 1, 1, 3));
    }

    #[test]
    fn single_label_has_no_idr_auc() {
        let g = labeled(vec![0, 0, 0, 0]);
        let t = scored(&[(0, 2, true, 0.9), (1, 3, false, 0.6)]);
        let r = report_from_scores(&t, &g, 0).unwrap();
        assert_eq!(r.idr_auc, None);
        assert_eq!((r.n_idr_pos, r.n_idr_neg), (0, 0));
    }

    #[test]
    fn idr_filter_ignores_endpoint_order() {
        let g = labeled(vec![0, 1, 0, 1]);
        let a = scored(&[(0, 1, true, 0.9), (2, 0, true, 0.5), (3, 2, false, 0.6), (1, 3, false, 0.1)]);
        let b: Vec<ScoredEdge> = a
            .iter()
            .map(|s| ScoredEdge { edge: Edge { u: s.edge.v, v: s.edge.u }, ..*s })
            .collect();
        assert_eq!(report_from_scores(&a, &g, 0).unwrap(), report_from_scores(&b, &g, 0).unwrap());
    }

    #[test]
    fn unlabeled_graph_is_rejected() {
        let g = CitationGraph::from_parts(vec!["a".into(), "b".into()], []);
        let t = scored(&[(0, 1, true, 0.9), (0, 1, false, 0.1)]);
        assert!(matches!(report_from_scores(&t, &g, 0), Err(Error::Unlabeled)));
    }
}
