//! Citation-graph data model, ingestion, edge splitting and basic queries.

mod generate;
mod io;
mod paths;
mod split;
mod stats;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use generate::{planted_partition, PlantedPartition};
pub use io::{load_edge_list, load_node_labels, load_node_labels_with, EdgeListIngest, LabelFormat, LabelOptions};
pub use paths::{bfs_hops, detour_length, shortest_path_length, PathLength};
pub use split::{
    induced_training_subgraph, sample_negative_edges, split_edges, EdgeSplit, SplitRatios,
};
pub use stats::{graph_stats, GraphSummary};

/// Unordered node pair stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
}

impl Edge {
    /// Canonicalizes the endpoint order.
    #[inline]
    pub fn new(a: usize, b: usize) -> Self {
        if a <= b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }

    #[inline]
    pub fn is_self_loop(&self) -> bool {
        self.u == self.v
    }
}

impl From<(usize, usize)> for Edge {
    fn from((a, b): (usize, usize)) -> Self {
        Edge::new(a, b)
    }
}

/// Undirected simple graph of papers with optional per-node category labels.
///
/// Node tokens map to dense indices `0..n` in first-seen order. The edge list
/// is kept sorted and deduplicated, and each adjacency list is sorted, so
/// membership tests are binary searches.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "GraphRecord", try_from = "GraphRecord")]
pub struct CitationGraph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    adjacency: Vec<Vec<usize>>,
    edges: Vec<Edge>,
    labels: Option<Vec<usize>>,
    category_names: Vec<String>,
}

impl Default for CitationGraph {
    fn default() -> Self {
        Self::from_parts(Vec::new(), Vec::new())
    }
}

impl CitationGraph {
    /// Builds a graph over `names` from index pairs. Self-loops are dropped and
    /// duplicate pairs collapse.
    ///
    /// # Panics
    /// If a pair references an index outside `names` or a name repeats.
    pub fn from_parts(names: Vec<String>, pairs: impl IntoIterator<Item = Edge>) -> Self {
        let n = names.len();
        let mut index = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            let prev = index.insert(name.clone(), i);
            assert!(prev.is_none(), "duplicate node name `{name}`");
        }
        let mut edges: Vec<Edge> = pairs.into_iter().filter(|e| !e.is_self_loop()).collect();
        edges.sort_unstable();
        edges.dedup();
        let mut adjacency = vec![Vec::new(); n];
        for e in &edges {
            assert!(e.v < n, "edge {e:?} references a node outside the graph");
            adjacency[e.u].push(e.v);
            adjacency[e.v].push(e.u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        CitationGraph {
            names,
            index,
            adjacency,
            edges,
            labels: None,
            category_names: Vec::new(),
        }
    }

    /// Convenience constructor from string pairs, nodes named in first-seen order.
    pub fn from_named_edges<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        let mut names = Vec::new();
        let mut index: HashMap<&str, usize> = HashMap::new();
        let mut edges = Vec::new();
        for (a, b) in pairs {
            let mut id = |s: &'a str| {
                *index.entry(s).or_insert_with(|| {
                    names.push(s.to_string());
                    names.len() - 1
                })
            };
            let (ia, ib) = (id(a), id(b));
            edges.push(Edge::new(ia, ib));
        }
        Self::from_parts(names, edges)
    }

    /// Same node set (and labels) with a different edge set.
    pub fn with_edges(&self, edges: impl IntoIterator<Item = Edge>) -> Self {
        let mut g = Self::from_parts(self.names.clone(), edges);
        g.labels = self.labels.clone();
        g.category_names = self.category_names.clone();
        g
    }

    /// Attaches a total label map. `labels[i]` indexes `category_names`.
    pub fn with_labels(mut self, labels: Vec<usize>, category_names: Vec<String>) -> Result<Self> {
        if labels.len() != self.node_count() {
            return Err(Error::ShapeMismatch {
                expected: self.node_count(),
                actual: labels.len(),
            });
        }
        if let Some(bad) = labels.iter().find(|&&c| c >= category_names.len()) {
            return Err(Error::UnknownCategory(bad.to_string()));
        }
        self.labels = Some(labels);
        self.category_names = category_names;
        Ok(self)
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sorted canonical edge list.
    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adjacency[u]
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.adjacency[a].binary_search(&b).is_ok()
    }

    /// Position of `e` in [`edges`](Self::edges), if present.
    pub fn edge_position(&self, e: Edge) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    pub fn node_name(&self, u: usize) -> &str {
        &self.names[u]
    }

    pub fn node_names(&self) -> &[String] {
        &self.names
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn resolve(&self, name: &str) -> Result<usize> {
        self.node_index(name)
            .ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    pub fn is_labeled(&self) -> bool {
        self.labels.is_some()
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    pub fn label(&self, u: usize) -> Option<usize> {
        self.labels.as_ref().map(|l| l[u])
    }

    pub fn category_names(&self) -> &[String] {
        &self.category_names
    }

    /// True when the endpoints carry different categories; `None` if unlabeled.
    pub fn is_cross_label(&self, e: Edge) -> Option<bool> {
        self.labels.as_ref().map(|l| l[e.u] != l[e.v])
    }
}

#[derive(Serialize, Deserialize)]
struct GraphRecord {
    nodes: Vec<String>,
    edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    categories: Vec<String>,
}

impl From<CitationGraph> for GraphRecord {
    fn from(g: CitationGraph) -> Self {
        GraphRecord {
            edges: g.edges.iter().map(|e| (e.u, e.v)).collect(),
            nodes: g.names,
            labels: g.labels,
            categories: g.category_names,
        }
    }
}

impl TryFrom<GraphRecord> for CitationGraph {
    type Error = String;

    fn try_from(r: GraphRecord) -> std::result::Result<Self, String> {
        let n = r.nodes.len();
        if let Some(&(a, b)) = r.edges.iter().find(|&&(a, b)| a >= n || b >= n) {
            return Err(format!("edge ({a}, {b}) out of range for {n} nodes"));
        }
        let mut seen = std::collections::HashSet::with_capacity(n);
        if let Some(dup) = r.nodes.iter().find(|s| !seen.insert(s.as_str())) {
            return Err(format!("duplicate node `{dup}`"));
        }
        let g = CitationGraph::from_parts(r.nodes, r.edges.into_iter().map(Edge::from));
        match r.labels {
            Some(labels) => g.with_labels(labels, r.categories).map_err(|e| e.to_string()),
            None => Ok(g),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_collapses_duplicates_and_loops() {
        let g = CitationGraph::from_named_edges([("a", "b"), ("b", "a"), ("a", "a"), ("b", "c")]);
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 0));
        assert!(!g.has_edge(0, 0));
        assert_eq!(g.neighbors(1), &[0, 2]);
    }

    #[test]
    fn serde_round_trip_preserves_graph() {
        let g = CitationGraph::from_named_edges([("x", "y"), ("y", "z")])
            .with_labels(vec![0, 0, 1], vec!["A".into(), "B".into()])
            .unwrap();
        let json = serde_json::to_string(&g).unwrap();
        let back: CitationGraph = serde_json::from_str(&json).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn rejects_out_of_range_record() {
        let bad = r#"{"nodes":["a"],"edges":[[0,3]]}"#;
        assert!(serde_json::from_str::<CitationGraph>(bad).is_err());
    }
}
