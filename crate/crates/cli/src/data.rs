use std::fs::File;
use std::io::{BufReader, Read};
use std::path::{Path, PathBuf};

use anyhow::Context;
use interdisc::distance::CategoryCitationMatrix;
use interdisc::graph::{load_edge_list, load_node_labels_with, EdgeListIngest};
use interdisc::CitationGraph;
use sha2::{Digest, Sha256};

use crate::config::DataConfig;

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn sha256_file(path: &Path) -> anyhow::Result<String> {
    let mut hasher = Sha256::new();
    let mut f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut buf = [0u8; 1 << 16];
    loop {
        let n = f.read(&mut buf)?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hasher.finalize().iter().map(|b| format!("{b:02x}")).collect())
}

fn open(path: &Path) -> anyhow::Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .with_context(|| format!("opening {}", path.display()))
}

/// A loaded graph and the files it came from.
pub struct LoadedGraph {
    pub graph: CitationGraph,
    pub inputs: Vec<PathBuf>,
    pub ingest: Option<EdgeListIngest>,
    /// Set when a label file was named but does not exist.
    pub missing_labels: Option<PathBuf>,
}

pub fn read_edges(path: &Path) -> anyhow::Result<EdgeListIngest> {
    load_edge_list(open(path)?).with_context(|| format!("reading edge list {}", path.display()))
}

/// Reads a graph cache or an edge list with optional labels. A label path
/// that does not exist leaves the graph unlabeled.
pub fn load_graph(d: &DataConfig) -> anyhow::Result<LoadedGraph> {
    if let Some(cache) = &d.graph {
        let graph: CitationGraph = serde_json::from_reader(open(cache)?)
            .with_context(|| format!("reading graph cache {}", cache.display()))?;
        return Ok(LoadedGraph {
            graph,
            inputs: vec![cache.clone()],
            ingest: None,
            missing_labels: None,
        });
    }
    let edges = d.edges.as_ref().context("no edge list configured")?;
    let ingest = read_edges(edges)?;
    let mut inputs = vec![edges.clone()];
    let mut graph = ingest.graph.clone();
    let mut missing_labels = None;
    match &d.labels {
        Some(labels) if labels.exists() => {
            graph = load_node_labels_with(open(labels)?, graph, &d.label_options())
                .with_context(|| format!("reading labels {}", labels.display()))?;
            inputs.push(labels.clone());
        }
        Some(labels) => missing_labels = Some(labels.clone()),
        None => {}
    }
    Ok(LoadedGraph {
        graph,
        inputs,
        ingest: Some(ingest),
        missing_labels,
    })
}

pub fn load_category_matrix(path: &Path) -> anyhow::Result<CategoryCitationMatrix> {
    CategoryCitationMatrix::read_tsv(open(path)?).with_context(|| format!("reading category matrix {}", path.display()))
}
