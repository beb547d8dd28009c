//! Brandes dependency accumulation onto edges.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{CitationGraph, Edge};

/// Sources per parallel task; fixed so the merge order is too.
const SOURCE_CHUNK: usize = 64;

/// Raw edge betweenness: for every unordered node pair, the fraction of its
/// shortest paths through the edge, summed over pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeBetweenness {
    /// Aligned with `CitationGraph::edges`.
    pub scores: Vec<f64>,
}

impl EdgeBetweenness {
    pub fn score(&self, g: &CitationGraph, e: Edge) -> Option<f64> {
        g.edge_position(e).map(|i| self.scores[i])
    }
}

fn incident_edge_ids(g: &CitationGraph) -> Vec<Vec<usize>> {
    (0..g.node_count())
        .map(|u| {
            g.neighbors(u)
                .iter()
                .map(|&v| g.edge_position(Edge::new(u, v)).expect("adjacency and edge list agree"))
                .collect()
        })
        .collect()
}

struct Workspace {
    order: Vec<usize>,
    dist: Vec<usize>,
    sigma: Vec<f64>,
    delta: Vec<f64>,
}

const UNSEEN: usize = usize::MAX;

fn accumulate_source(g: &CitationGraph, ids: &[Vec<usize>], s: usize, ws: &mut Workspace, out: &mut [f64]) {
    ws.order.clear();
    ws.dist.iter_mut().for_each(|d| *d = UNSEEN);
    ws.sigma.iter_mut().for_each(|x| *x = 0.0);
    ws.delta.iter_mut().for_each(|x| *x = 0.0);
    ws.dist[s] = 0;
    ws.sigma[s] = 1.0;
    ws.order.push(s);
    let mut head = 0;
    while head < ws.order.len() {
        let v = ws.order[head];
        head += 1;
        for &w in g.neighbors(v) {
            if ws.dist[w] == UNSEEN {
                ws.dist[w] = ws.dist[v] + 1;
                ws.order.push(w);
            }
            if ws.dist[w] == ws.dist[v] + 1 {
                ws.sigma[w] += ws.sigma[v];
            }
        }
    }
    // predecessors of w are neighbors one hop closer to s
    for &w in ws.order.iter().rev() {
        if w == s {
            continue;
        }
        let coeff = (1.0 + ws.delta[w]) / ws.sigma[w];
        for (&v, &eid) in g.neighbors(w).iter().zip(&ids[w]) {
            if ws.dist[v] != UNSEEN && ws.dist[v] + 1 == ws.dist[w] {
                let c = ws.sigma[v] * coeff;
                out[eid] += c;
                ws.delta[v] += c;
            }
        }
    }
}

pub fn edge_betweenness(g: &CitationGraph) -> EdgeBetweenness {
    let n = g.node_count();
    let ids = incident_edge_ids(g);
    let sources: Vec<usize> = (0..n).collect();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut ws = Workspace {
                order: Vec::with_capacity(n),
                dist: vec![UNSEEN; n],
                sigma: vec![0.0; n],
                delta: vec![0.0; n],
            };
            let mut out = vec![0.0; g.edge_count()];
            for &s in chunk {
                accumulate_source(g, &ids, s, &mut ws, &mut out);
            }
            out
        })
        .collect();
    let mut scores = vec![0.0; g.edge_count()];
    for p in partials {
        for (a, b) in scores.iter_mut().zip(p) {
            *a += b;
        }
    }
    // every unordered pair was reached from both ends
    scores.iter_mut().for_each(|x| *x /= 2.0);
    EdgeBetweenness { scores }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Enumerates every shortest path between every unordered pair.
    pub(crate) fn brute_force(g: &CitationGraph) -> Vec<f64> {
        let n = g.node_count();
        let mut scores = vec![0.0; g.edge_count()];
        for s in 0..n {
            let dist = crate::graph::bfs_hops(g, s);
            for t in s + 1..n {
                let Some(d) = dist[t] else { continue };
                let mut paths: Vec<Vec<usize>> = Vec::new();
                let mut stack = vec![vec![s]];
                while let Some(p) = stack.pop() {
                    let last = *p.last().unwrap();
                    if last == t {
                        paths.push(p);
                        continue;
                    }
                    if p.len() > d {
                        continue;
                    }
                    for &w in g.neighbors(last) {
                        if !p.contains(&w) {
                            let mut q = p.clone();
                            q.push(w);
                            stack.push(q);
                        }
                    }
                }
                paths.retain(|p| p.len() == d + 1);
                let share = 1.0 / paths.len() as f64;
                for p in &paths {
                    for w in p.windows(2) {
                        scores[g.edge_position(Edge::new(w[0], w[1])).unwrap()] += share;
                    }
                }
            }
        }
        scores
    }

    pub(crate) fn random_connected(n: usize, extra: &[(usize, usize)], tree: &[usize]) -> CitationGraph {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        // node i attaches to an earlier node, which keeps the graph connected
        let tree_edges = (1..n).map(|i| Edge::new(i, tree[i - 1] % i));
        let extra_edges = extra.iter().map(|&(a, b)| Edge::new(a % n, b % n));
        CitationGraph::from_parts(names, tree_edges.chain(extra_edges))
    }

    #[test]
    fn path_and_triangle() {
        let path = CitationGraph::from_named_edges([("a", "b"), ("b", "c")]);
        assert_eq!(edge_betweenness(&path).scores, vec![2.0, 2.0]);
        let tri = CitationGraph::from_named_edges([("a", "b"), ("b", "c"), ("c", "a")]);
        assert_eq!(edge_betweenness(&tri).scores, vec![1.0; 3]);
    }

    #[test]
    fn cycle_edges_are_interchangeable() {
        let names: Vec<String> = (0..7).map(|i| i.to_string()).collect();
        let g = CitationGraph::from_parts(names, (0..7).map(|i| Edge::new(i, (i + 1) % 7)));
        let s = edge_betweenness(&g).scores;
        assert!(s.iter().all(|&x| (x - s[0]).abs() < 1e-12));
    }

    #[test]
    fn isolated_nodes_and_empty_graph() {
        let g = CitationGraph::from_parts(vec!["a".into(), "b".into()], []);
        assert!(edge_betweenness(&g).scores.is_empty());
    }

    proptest! {
        #[test]
        fn matches_brute_force(
            n in 2usize..9,
            tree in prop::collection::vec(any::<usize>(), 8),
            extra in prop::collection::vec((any::<usize>(), any::<usize>()), 0..12),
        ) {
            let g = random_connected(n, &extra, &tree);
            let fast = edge_betweenness(&g).scores;
            let slow = brute_force(&g);
            for (a, b) in fast.iter().zip(&slow) {
                prop_assert!((a - b).abs() < 1e-9, "{:?} vs {:?}", fast, slow);
            }
        }
    }
}
