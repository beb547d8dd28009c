use interdisc::analysis::{betweenness_idr_test, edge_betweenness, BetweennessIdrReport};
use interdisc::graph::{graph_stats, GraphSummary};
use serde::{Deserialize, Serialize};

use crate::config::DataConfig;
use crate::data::load_graph;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub summary: GraphSummary,
    pub edges: usize,
    pub betweenness_idr: Option<BetweennessIdrReport>,
}

/// Dataset summary, optionally with the inter- against intra-label betweenness test.
pub fn cmd_stats(data: &DataConfig, betweenness: bool) -> anyhow::Result<StatsReport> {
    let g = load_graph(data)?.graph;
    let betweenness_idr = if betweenness {
        Some(betweenness_idr_test(&g, &edge_betweenness(&g))?)
    } else {
        None
    };
    Ok(StatsReport {
        summary: graph_stats(&g),
        edges: g.edge_count(),
        betweenness_idr,
    })
}

impl std::fmt::Display for StatsReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.summary)?;
        if let Some(b) = &self.betweenness_idr {
            write!(
                f,
                "\nedge betweenness: inter-label mean {:.3} ({} edges), intra-label mean {:.3} ({} edges), KS D={:.4} p={:.3e}",
                b.inter_mean, b.n_inter, b.intra_mean, b.n_intra, b.ks.d_statistic, b.ks.p_value
            )?;
        }
        Ok(())
    }
}
