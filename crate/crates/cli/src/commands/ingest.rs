use std::path::Path;

use anyhow::Context;
use interdisc::graph::{graph_stats, GraphSummary};

use crate::config::DataConfig;
use crate::data::{load_graph, sha256_hex};
use crate::stage::note;

#[derive(Clone, Debug, PartialEq)]
pub struct IngestOutcome {
    pub summary: GraphSummary,
    pub self_loops_dropped: usize,
    pub duplicates_collapsed: usize,
    pub labeled: bool,
    /// SHA-256 of the cache file.
    pub cache_hash: String,
}

/// Parses the edge (and label) files and writes the graph as a JSON cache.
pub fn cmd_ingest(data: &DataConfig, cache: &Path) -> anyhow::Result<IngestOutcome> {
    let loaded = load_graph(data)?;
    if let Some(missing) = &loaded.missing_labels {
        note("ingest", format!("warning: label file {} not found; graph cached unlabeled", missing.display()));
    } else if data.labels.is_none() && data.graph.is_none() {
        note("ingest", "warning: no label file given; graph cached unlabeled");
    }
    let g = &loaded.graph;
    let bytes = serde_json::to_vec(g)?;
    if let Some(dir) = cache.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    std::fs::write(cache, &bytes).with_context(|| format!("writing {}", cache.display()))?;
    let (self_loops_dropped, duplicates_collapsed) = loaded
        .ingest
        .as_ref()
        .map_or((0, 0), |i| (i.self_loops_dropped, i.duplicates_collapsed));
    Ok(IngestOutcome {
        summary: graph_stats(g),
        self_loops_dropped,
        duplicates_collapsed,
        labeled: g.is_labeled(),
        cache_hash: sha256_hex(&bytes),
    })
}
