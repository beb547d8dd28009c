use rand::Rng;

use super::{CitationGraph, Edge};
use crate::rng::stage_rng;

/// A planted-partition graph together with its ground truth.
#[derive(Clone, Debug)]
pub struct PlantedPartition {
    /// Labeled with one category per block (`block0`, `block1`, ...).
    pub graph: CitationGraph,
    /// Block of each node.
    pub blocks: Vec<usize>,
    pub within_edges: usize,
    pub cross_edges: usize,
}

/// Stochastic block model with `block_count` equal blocks: each within-block
/// pair is joined with probability `p_in`, each cross-block pair with `p_out`.
pub fn planted_partition(
    block_count: usize,
    block_size: usize,
    p_in: f64,
    p_out: f64,
    seed: u64,
) -> PlantedPartition {
    let n = block_count * block_size;
    let blocks: Vec<usize> = (0..n).map(|i| i / block_size.max(1)).collect();
    let mut rng = stage_rng(seed, 0x5B);
    let mut edges = Vec::new();
    let (mut within, mut cross) = (0, 0);
    for u in 0..n {
        for v in u + 1..n {
            let same = blocks[u] == blocks[v];
            if rng.gen_bool(if same { p_in } else { p_out }) {
                edges.push(Edge { u, v });
                if same {
                    within += 1;
                } else {
                    cross += 1;
                }
            }
        }
    }
    let names = (0..n).map(|i| i.to_string()).collect();
    let categories = (0..block_count).map(|b| format!("block{b}")).collect();
    let graph = CitationGraph::from_parts(names, edges)
        .with_labels(blocks.clone(), categories)
        .expect("block labels are in range");
    PlantedPartition {
        graph,
        blocks,
        within_edges: within,
        cross_edges: cross,
    }
}
