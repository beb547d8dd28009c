use serde::{Deserialize, Serialize};

use super::betweenness::EdgeBetweenness;
use super::stats::{ks_two_sample, KsReport};
use crate::error::{Error, Result};
use crate::graph::CitationGraph;

/// Betweenness of cross-label (interdisciplinary) edges against same-label edges.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetweennessIdrReport {
    pub ks: KsReport,
    pub inter_mean: f64,
    pub intra_mean: f64,
    pub inter_greater: bool,
    pub n_inter: usize,
    pub n_intra: usize,
}

pub fn betweenness_idr_test(g: &CitationGraph, bt: &EdgeBetweenness) -> Result<BetweennessIdrReport> {
    if bt.scores.len() != g.edge_count() {
        return Err(Error::ShapeMismatch {
            expected: g.edge_count(),
            actual: bt.scores.len(),
        });
    }
    let mut inter = Vec::new();
    let mut intra = Vec::new();
    for (e, &s) in g.edges().iter().zip(&bt.scores) {
        if g.is_cross_label(*e).ok_or(Error::Unlabeled)? {
            inter.push(s);
        } else {
            intra.push(s);
        }
    }
    if inter.is_empty() || intra.is_empty() {
        return Err(Error::InsufficientData(format!(
            "{} inter-label and {} intra-label edges; both classes are needed",
            inter.len(),
            intra.len()
        )));
    }
    let mean = |x: &[f64]| x.iter().sum::<f64>() / x.len() as f64;
    let (inter_mean, intra_mean) = (mean(&inter), mean(&intra));
    Ok(BetweennessIdrReport {
        ks: ks_two_sample(&inter, &intra)?,
        inter_mean,
        intra_mean,
        inter_greater: inter_mean > intra_mean,
        n_inter: inter.len(),
        n_intra: intra.len(),
    })
}
