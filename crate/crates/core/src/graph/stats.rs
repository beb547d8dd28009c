use serde::{Deserialize, Serialize};

use super::CitationGraph;

/// One row of a dataset summary table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub paper_count: usize,
    /// Mean degree, `2|E| / |V|`.
    pub citations_per_paper: f64,
    pub topic_count: usize,
}

impl std::fmt::Display for GraphSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} papers, {:.2} cites/paper, {} topics",
            self.paper_count, self.citations_per_paper, self.topic_count
        )
    }
}

pub fn graph_stats(g: &CitationGraph) -> GraphSummary {
    let n = g.node_count();
    let topic_count = g
        .labels()
        .map(|l| {
            let mut seen = vec![false; g.category_names().len()];
            l.iter().for_each(|&c| seen[c] = true);
            seen.into_iter().filter(|&x| x).count()
        })
        .unwrap_or(0);
    GraphSummary {
        paper_count: n,
        citations_per_paper: if n == 0 {
            0.0
        } else {
            2.0 * g.edge_count() as f64 / n as f64
        },
        topic_count,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge_single_label() {
        let g = CitationGraph::from_named_edges([("a", "b")])
            .with_labels(vec![0, 0], vec!["X".into()])
            .unwrap();
        let s = graph_stats(&g);
        assert_eq!(s, GraphSummary { paper_count: 2, citations_per_paper: 1.0, topic_count: 1 });
        assert_eq!(s.to_string(), "2 papers, 1.00 cites/paper, 1 topics");
    }

    #[test]
    fn unlabeled_and_empty() {
        assert_eq!(graph_stats(&CitationGraph::default()).citations_per_paper, 0.0);
        let g = CitationGraph::from_named_edges([("a", "b"), ("b", "c")]);
        assert_eq!(graph_stats(&g).topic_count, 0);
    }
}
