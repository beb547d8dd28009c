//! Five per-edge citation distances: topic distance between the endpoint
//! categories, shortest-path hops on the training graph, and cosine distance
//! under each of the three embeddings.

mod category;

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embeddings::{EmbeddingMatrix, EmbeddingMethod};
use crate::error::{Error, Result};
use crate::graph::{shortest_path_length, CitationGraph, Edge, PathLength};
use crate::linkpred::ScoredEdge;
use crate::scalar::Real;

pub use category::CategoryCitationMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceKind {
    ScopusTopic,
    Network,
    #[serde(rename = "deepwalk-embedding")]
    DeepWalkEmbedding,
    Node2vecEmbedding,
    Role2vecEmbedding,
}

impl DistanceKind {
    pub const ALL: [DistanceKind; 5] = [
        DistanceKind::ScopusTopic,
        DistanceKind::Network,
        DistanceKind::DeepWalkEmbedding,
        DistanceKind::Node2vecEmbedding,
        DistanceKind::Role2vecEmbedding,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DistanceKind::ScopusTopic => "scopus-topic",
            DistanceKind::Network => "network",
            DistanceKind::DeepWalkEmbedding => "deepwalk-embedding",
            DistanceKind::Node2vecEmbedding => "node2vec-embedding",
            DistanceKind::Role2vecEmbedding => "role2vec-embedding",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            DistanceKind::ScopusTopic => "Scopus Topic",
            DistanceKind::Network => "Network",
            DistanceKind::DeepWalkEmbedding => "DeepWalk Embedding",
            DistanceKind::Node2vecEmbedding => "node2vec Embedding",
            DistanceKind::Role2vecEmbedding => "role2vec Embedding",
        }
    }

    /// The embedding this kind measures distance in, if any.
    pub fn embedding_method(self) -> Option<EmbeddingMethod> {
        match self {
            DistanceKind::DeepWalkEmbedding => Some(EmbeddingMethod::DeepWalk),
            DistanceKind::Node2vecEmbedding => Some(EmbeddingMethod::Node2Vec),
            DistanceKind::Role2vecEmbedding => Some(EmbeddingMethod::Role2Vec),
            DistanceKind::ScopusTopic | DistanceKind::Network => None,
        }
    }
}

impl fmt::Display for DistanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DistanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        let kind = match key.as_str() {
            "scopus-topic" | "topic" => DistanceKind::ScopusTopic,
            "network" => DistanceKind::Network,
            "deepwalk-embedding" | "deepwalk" => DistanceKind::DeepWalkEmbedding,
            "node2vec-embedding" | "node2vec" => DistanceKind::Node2vecEmbedding,
            "role2vec-embedding" | "role2vec" => DistanceKind::Role2vecEmbedding,
            _ => return Err(Error::InvalidConfig(format!("unknown distance kind `{s}`"))),
        };
        Ok(kind)
    }
}

/// `1 - cos(emb(u), emb(v))`, in `[0, 2]`.
pub fn embedding_distance<T: Real>(m: &EmbeddingMatrix<T>, u: usize, v: usize) -> Result<f64> {
    let e = Edge::new(u, v);
    let cos = m.cosine(e.u, e.v)?.as_f64();
    Ok((1.0 - cos).clamp(0.0, 2.0))
}

/// Hop count between `u` and `v` on the training graph.
pub fn network_distance(train_g: &CitationGraph, u: usize, v: usize) -> Result<PathLength> {
    shortest_path_length(train_g, u, v)
}

/// Inputs the distance kinds draw on; each kind needs only its own part.
#[derive(Clone, Copy, Debug)]
pub struct DistanceContext<'a, T> {
    /// Labeled graph whose node labels feed topic distance.
    pub labeled: Option<&'a CitationGraph>,
    pub categories: Option<&'a CategoryCitationMatrix>,
    pub train_graph: Option<&'a CitationGraph>,
    pub deepwalk: Option<&'a EmbeddingMatrix<T>>,
    pub node2vec: Option<&'a EmbeddingMatrix<T>>,
    pub role2vec: Option<&'a EmbeddingMatrix<T>>,
}

impl<T> Default for DistanceContext<'_, T> {
    fn default() -> Self {
        DistanceContext {
            labeled: None,
            categories: None,
            train_graph: None,
            deepwalk: None,
            node2vec: None,
            role2vec: None,
        }
    }
}

impl<'a, T> DistanceContext<'a, T> {
    pub fn embedding(&self, method: EmbeddingMethod) -> Option<&'a EmbeddingMatrix<T>> {
        match method {
            EmbeddingMethod::DeepWalk => self.deepwalk,
            EmbeddingMethod::Node2Vec => self.node2vec,
            EmbeddingMethod::Role2Vec => self.role2vec,
        }
    }

    pub fn set_embedding(&mut self, method: EmbeddingMethod, m: &'a EmbeddingMatrix<T>) {
        match method {
            EmbeddingMethod::DeepWalk => self.deepwalk = Some(m),
            EmbeddingMethod::Node2Vec => self.node2vec = Some(m),
            EmbeddingMethod::Role2Vec => self.role2vec = Some(m),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceRow {
    pub edge: Edge,
    pub positive: bool,
    pub score: f64,
    /// `None` marks an unreachable pair (network distance only).
    pub distance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CitationDistanceTable {
    pub kind: DistanceKind,
    pub rows: Vec<DistanceRow>,
}

impl CitationDistanceTable {
    pub fn unreachable_count(&self) -> usize {
        self.rows.iter().filter(|r| r.distance.is_none()).count()
    }
}

/// One row per scored edge, in input order.
pub fn distance_table<T: Real>(
    edges: &[ScoredEdge],
    kind: DistanceKind,
    ctx: &DistanceContext<'_, T>,
) -> Result<CitationDistanceTable> {
    let missing = |what| Error::MissingContext(kind.to_string(), what);
    let distance: Box<dyn Fn(Edge) -> Result<Option<f64>> + Sync + '_> = match kind {
        DistanceKind::ScopusTopic => {
            let g = ctx.labeled.ok_or_else(|| missing("labeled graph"))?;
            let labels = g.labels().ok_or(Error::Unlabeled)?;
            let built;
            let w = match ctx.categories {
                Some(w) => w,
                None => {
                    built = CategoryCitationMatrix::from_graph(g)?;
                    &built
                }
            };
            let rows = g
                .category_names()
                .iter()
                .map(|n| w.category_index(n))
                .collect::<Result<Vec<_>>>()?;
            let c = w.size();
            let mut memo: Vec<Option<Result<f64>>> = (0..c * c).map(|_| None).collect();
            for &a in &rows {
                for &b in &rows {
                    if memo[a * c + b].is_none() {
                        memo[a * c + b] = Some(w.topic_distance(a, b));
                    }
                }
            }
            let used_labels: Vec<usize> = labels.iter().map(|&l| rows[l]).collect();
            Box::new(move |e: Edge| {
                let (a, b) = (used_labels[e.u], used_labels[e.v]);
                match &memo[a * c + b] {
                    Some(Ok(d)) => Ok(Some(*d)),
                    Some(Err(Error::ZeroVector(msg))) => Err(Error::ZeroVector(msg.clone())),
                    Some(Err(other)) => Err(Error::CategoryMatrix(other.to_string())),
                    None => unreachable!("memo covers every used category pair"),
                }
            })
        }
        DistanceKind::Network => {
            let g = ctx.train_graph.ok_or_else(|| missing("training graph"))?;
            Box::new(move |e: Edge| Ok(network_distance(g, e.u, e.v)?.hops().map(|h| h as f64)))
        }
        _ => {
            let method = kind.embedding_method().expect("embedding kind");
            let m = ctx.embedding(method).ok_or_else(|| missing("embedding"))?;
            Box::new(move |e: Edge| embedding_distance(m, e.u, e.v).map(Some))
        }
    };
    let rows = edges
        .par_iter()
        .map(|s| {
            Ok(DistanceRow {
                edge: s.edge,
                positive: s.positive,
                score: s.score,
                distance: distance(s.edge)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CitationDistanceTable { kind, rows })
}

#[derive(Serialize, Deserialize)]
struct CsvRow {
    edge_u: String,
    edge_v: String,
    label: String,
    score: f64,
    kind: DistanceKind,
    distance: Option<f64>,
}

/// CSV with columns `edge_u, edge_v, label, score, kind, distance`; the
/// distance cell is empty for unreachable pairs.
pub fn write_distance_csv<W: Write>(sink: W, tables: &[CitationDistanceTable], g: &CitationGraph) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    for t in tables {
        for r in &t.rows {
            w.serialize(CsvRow {
                edge_u: g.node_name(r.edge.u).to_string(),
                edge_v: g.node_name(r.edge.v).to_string(),
                label: if r.positive { "positive" } else { "negative" }.to_string(),
                score: r.score,
                kind: t.kind,
                distance: r.distance,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Inverse of [`write_distance_csv`]; tables come back in first-seen kind order.
pub fn read_distance_csv<R: Read>(source: R, g: &CitationGraph) -> Result<Vec<CitationDistanceTable>> {
    let mut reader = csv::Reader::from_reader(source);
    let mut tables: Vec<CitationDistanceTable> = Vec::new();
    for (i, row) in reader.deserialize::<CsvRow>().enumerate() {
        let row = row?;
        let positive = match row.label.as_str() {
            "positive" => true,
            "negative" => false,
            other => {
                return Err(Error::Parse {
                    line: i + 2,
                    message: format!("label must be positive or negative, got `{other}`"),
                })
            }
        };
        let edge = Edge::new(g.resolve(&row.edge_u)?, g.resolve(&row.edge_v)?);
        let entry = DistanceRow {
            edge,
            positive,
            score: row.score,
            distance: row.distance,
        };
        match tables.iter_mut().find(|t| t.kind == row.kind) {
            Some(t) => t.rows.push(entry),
            None => tables.push(CitationDistanceTable {
                kind: row.kind,
                rows: vec![entry],
            }),
        }
    }
    Ok(tables)
}
