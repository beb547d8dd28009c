use std::collections::HashMap;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use super::{CitationGraph, Edge};
use crate::error::{Error, Result};

/// Result of reading an edge list, with the counts of cleaned-up lines.
#[derive(Clone, Debug)]
pub struct EdgeListIngest {
    pub graph: CitationGraph,
    pub self_loops_dropped: usize,
    pub duplicates_collapsed: usize,
}

fn content_lines<R: BufRead>(source: R) -> impl Iterator<Item = Result<(usize, String)>> {
    source
        .lines()
        .enumerate()
        .filter_map(|(i, line)| match line {
            Err(e) => Some(Err(Error::Io(e))),
            Ok(l) => {
                let t = l.trim();
                if t.is_empty() || t.starts_with('#') {
                    None
                } else {
                    Some(Ok((i + 1, t.to_string())))
                }
            }
        })
}

/// Reads a whitespace-separated edge list, one citation per line, `#` comments.
///
/// Reciprocal and repeated lines collapse to one undirected edge; self-citations
/// are dropped and counted.
pub fn load_edge_list<R: BufRead>(source: R) -> Result<EdgeListIngest> {
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut pairs = Vec::new();
    let mut self_loops = 0;
    for item in content_lines(source) {
        let (line, text) = item?;
        let mut tokens = text.split_whitespace();
        let (a, b) = match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(Error::Parse {
                    line,
                    message: format!("expected two node tokens, found `{text}`"),
                })
            }
        };
        let mut id = |s: &str| match index.get(s) {
            Some(&i) => i,
            None => {
                names.push(s.to_string());
                index.insert(s.to_string(), names.len() - 1);
                names.len() - 1
            }
        };
        let (ia, ib) = (id(a), id(b));
        if ia == ib {
            self_loops += 1;
        } else {
            pairs.push(Edge::new(ia, ib));
        }
    }
    let raw = pairs.len();
    let graph = CitationGraph::from_parts(names, pairs);
    Ok(EdgeListIngest {
        duplicates_collapsed: raw - graph.edge_count(),
        self_loops_dropped: self_loops,
        graph,
    })
}

/// Which tokens of a label line carry the node and its category.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LabelFormat {
    /// Exactly `node category`.
    #[default]
    Pair,
    /// First token is the node, last token the category; anything between is
    /// ignored (the `.content` layout of the Cora and CiteSeer releases).
    FirstLast,
}

impl std::str::FromStr for LabelFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "pair" => Ok(LabelFormat::Pair),
            "first-last" => Ok(LabelFormat::FirstLast),
            other => Err(Error::InvalidConfig(format!("unknown label format `{other}` (pair, first-last)"))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabelOptions {
    pub format: LabelFormat,
    /// Labeled nodes absent from the edge list join the graph as isolated
    /// nodes instead of being an error.
    pub add_unknown_nodes: bool,
    /// Category given to nodes without a label line, instead of an error.
    pub fallback_category: Option<String>,
}

/// Attaches `node category` labels read from `source`. Every node of `g` must
/// be labeled exactly once; categories are numbered in first-seen order.
pub fn load_node_labels<R: BufRead>(source: R, g: CitationGraph) -> Result<CitationGraph> {
    load_node_labels_with(source, g, &LabelOptions::default())
}

pub fn load_node_labels_with<R: BufRead>(source: R, g: CitationGraph, opts: &LabelOptions) -> Result<CitationGraph> {
    let mut pairs: Vec<(String, String)> = Vec::new();
    for item in content_lines(source) {
        let (line, text) = item?;
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let pair = match (opts.format, tokens.as_slice()) {
            (LabelFormat::Pair, [n, c]) => Some((n, c)),
            (LabelFormat::FirstLast, [n, .., c]) => Some((n, c)),
            _ => None,
        };
        let Some((node, category)) = pair else {
            return Err(Error::Parse {
                line,
                message: format!("expected `node category`, found `{text}`"),
            });
        };
        pairs.push((node.to_string(), category.to_string()));
    }
    let mut g = g;
    if opts.add_unknown_nodes {
        let mut names = g.node_names().to_vec();
        let mut seen: std::collections::HashSet<&str> = names.iter().map(String::as_str).collect();
        let mut extra = Vec::new();
        for (n, _) in &pairs {
            if g.node_index(n).is_none() && seen.insert(n.as_str()) {
                extra.push(n.clone());
            }
        }
        if !extra.is_empty() {
            names.extend(extra);
            g = CitationGraph::from_parts(names, g.edges().iter().copied());
        }
    }
    let mut labels: Vec<Option<usize>> = vec![None; g.node_count()];
    let mut categories: Vec<String> = Vec::new();
    let mut category_index: HashMap<String, usize> = HashMap::new();
    let mut category_of = |name: &str| {
        *category_index.entry(name.to_string()).or_insert_with(|| {
            categories.push(name.to_string());
            categories.len() - 1
        })
    };
    for (node, category) in &pairs {
        let u = g.resolve(node)?;
        if labels[u].is_some() {
            return Err(Error::DuplicateLabel(node.to_string()));
        }
        labels[u] = Some(category_of(category));
    }
    let missing: Vec<usize> = (0..labels.len()).filter(|&u| labels[u].is_none()).collect();
    if let Some(&first) = missing.first() {
        match &opts.fallback_category {
            Some(name) => {
                let c = category_of(name);
                for u in missing {
                    labels[u] = Some(c);
                }
            }
            None => {
                return Err(Error::UnlabeledNodes {
                    count: missing.len(),
                    first: g.node_name(first).to_string(),
                })
            }
        }
    }
    let labels = labels.into_iter().map(Option::unwrap).collect();
    g.with_labels(labels, categories)
}
