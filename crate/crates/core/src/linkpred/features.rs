use serde::{Deserialize, Serialize};

use crate::embeddings::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::graph::Edge;
use crate::scalar::Real;

/// How an unordered node pair becomes an ordered feature vector.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureMode {
    /// `emb(min) ⧺ emb(max)`.
    #[default]
    Canonical,
    /// Both orders: training sees two rows per edge and scores average the two.
    Symmetrized,
}

/// Row-major `rows × width` feature matrix with one binary label per row.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeFeatures<T> {
    pub data: Vec<T>,
    pub width: usize,
    pub labels: Vec<bool>,
}

impl<T: Real> EdgeFeatures<T> {
    pub fn rows(&self) -> usize {
        self.labels.len()
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.width..(i + 1) * self.width]
    }

    pub fn positives(&self) -> usize {
        self.labels.iter().filter(|&&l| l).count()
    }

    pub fn has_both_classes(&self) -> bool {
        let p = self.positives();
        p > 0 && p < self.rows()
    }

    /// Rows whose features are built from `edges`, in order.
    pub fn from_edges(
        edges: impl IntoIterator<Item = (Edge, bool)>,
        m: &EmbeddingMatrix<T>,
        mode: FeatureMode,
    ) -> Result<Self> {
        let width = 2 * m.dim();
        let mut out = EdgeFeatures {
            data: Vec::new(),
            width,
            labels: Vec::new(),
        };
        for (e, label) in edges {
            let (a, b) = (m.node_vector(e.u)?, m.node_vector(e.v)?);
            out.push_pair(a, b, label);
            if mode == FeatureMode::Symmetrized {
                out.push_pair(b, a, label);
            }
        }
        Ok(out)
    }

    fn push_pair(&mut self, a: &[T], b: &[T], label: bool) {
        self.data.extend_from_slice(a);
        self.data.extend_from_slice(b);
        self.labels.push(label);
    }
}

/// `emb(u) ⧺ emb(v)` with endpoints put in ascending index order.
pub fn featurize_edge<T: Real>(u: usize, v: usize, m: &EmbeddingMatrix<T>) -> Result<Vec<T>> {
    let e = Edge::new(u, v);
    let (a, b) = (m.node_vector(e.u)?, m.node_vector(e.v)?);
    let mut x = Vec::with_capacity(a.len() + b.len());
    x.extend_from_slice(a);
    x.extend_from_slice(b);
    if x.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidConfig(format!("non-finite embedding for edge ({u}, {v})")));
    }
    Ok(x)
}
