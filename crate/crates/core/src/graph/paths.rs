use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{CitationGraph, Edge};
use crate::error::{Error, Result};

/// Hop distance between two nodes, or `Unreachable` across components.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PathLength {
    Hops(usize),
    Unreachable,
}

impl PathLength {
    pub fn hops(self) -> Option<usize> {
        match self {
            PathLength::Hops(h) => Some(h),
            PathLength::Unreachable => None,
        }
    }
}

/// Breadth-first hop counts from `source` to every node (`None` if unreachable).
pub fn bfs_hops(g: &CitationGraph, source: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.node_count()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let next = dist[u].unwrap() + 1;
        for &w in g.neighbors(u) {
            if dist[w].is_none() {
                dist[w] = Some(next);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Shortest-path hop count between two node indices; stops as soon as `v` is reached.
pub fn shortest_path_length(g: &CitationGraph, u: usize, v: usize) -> Result<PathLength> {
    search(g, u, v, None)
}

/// Shortest path between the endpoints of `e` that avoids `e` itself: the
/// network distance the pair would have if the citation were held out.
pub fn detour_length(g: &CitationGraph, e: Edge) -> Result<PathLength> {
    search(g, e.u, e.v, Some(e))
}

fn search(g: &CitationGraph, u: usize, v: usize, skip: Option<Edge>) -> Result<PathLength> {
    let n = g.node_count();
    for x in [u, v] {
        if x >= n {
            return Err(Error::UnknownNode(format!("#{x}")));
        }
    }
    if u == v {
        return Ok(PathLength::Hops(0));
    }
    let mut dist = vec![usize::MAX; n];
    dist[u] = 0;
    let mut queue = VecDeque::from([u]);
    while let Some(x) = queue.pop_front() {
        for &w in g.neighbors(x) {
            if dist[w] == usize::MAX && skip != Some(Edge::new(x, w)) {
                dist[w] = dist[x] + 1;
                if w == v {
                    return Ok(PathLength::Hops(dist[w]));
                }
                queue.push_back(w);
            }
        }
    }
    Ok(PathLength::Unreachable)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Length of the shortest simple path found by exhaustive DFS.
    fn brute_force(g: &CitationGraph, u: usize, v: usize) -> Option<usize> {
        fn go(g: &CitationGraph, at: usize, to: usize, seen: &mut Vec<bool>, len: usize, best: &mut Option<usize>) {
            if at == to {
                *best = Some(best.map_or(len, |b| b.min(len)));
                return;
            }
            for &w in g.neighbors(at) {
                if !seen[w] {
                    seen[w] = true;
                    go(g, w, to, seen, len + 1, best);
                    seen[w] = false;
                }
            }
        }
        let mut seen = vec![false; g.node_count()];
        seen[u] = true;
        let mut best = None;
        go(g, u, v, &mut seen, 0, &mut best);
        best
    }

    #[test]
    fn basic_cases() {
        let g = CitationGraph::from_named_edges([("a", "b"), ("b", "c"), ("c", "d")]);
        assert_eq!(shortest_path_length(&g, 0, 1).unwrap(), PathLength::Hops(1));
        assert_eq!(shortest_path_length(&g, 2, 2).unwrap(), PathLength::Hops(0));
        assert_eq!(shortest_path_length(&g, 0, 3).unwrap(), PathLength::Hops(3));
        assert_eq!(brute_force(&g, 0, 3), Some(3));
        assert!(shortest_path_length(&g, 0, 9).is_err());
    }

    #[test]
    fn detours_avoid_the_edge() {
        let tri = CitationGraph::from_named_edges([("a", "b"), ("b", "c"), ("a", "c")]);
        assert_eq!(detour_length(&tri, Edge::new(0, 1)).unwrap(), PathLength::Hops(2));
        let path = CitationGraph::from_named_edges([("a", "b"), ("b", "c")]);
        assert_eq!(detour_length(&path, Edge::new(0, 1)).unwrap(), PathLength::Unreachable);
        for e in tri.edges() {
            let without = tri.with_edges(tri.edges().iter().copied().filter(|x| x != e));
            assert_eq!(detour_length(&tri, *e).unwrap().hops(), brute_force(&without, e.u, e.v));
        }
    }

    #[test]
    fn unreachable_across_components() {
        let g = CitationGraph::from_named_edges([("a", "b"), ("c", "d")]);
        assert_eq!(shortest_path_length(&g, 0, 3).unwrap(), PathLength::Unreachable);
        assert_eq!(bfs_hops(&g, 0), vec![Some(0), Some(1), None, None]);
    }

    #[test]
    fn matches_path_enumeration_on_small_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..40 {
            let n = rng.gen_range(2..=5);
            let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
            let edges: Vec<_> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| Edge { u, v }))
                .filter(|_| rng.gen_bool(0.5))
                .collect();
            let g = CitationGraph::from_parts(names, edges);
            for u in 0..n {
                for v in 0..n {
                    let got = shortest_path_length(&g, u, v).unwrap().hops();
                    assert_eq!(got, brute_force(&g, u, v), "{u}->{v}");
                }
            }
            for e in g.edges() {
                let without = g.with_edges(g.edges().iter().copied().filter(|x| x != e));
                assert_eq!(detour_length(&g, *e).unwrap().hops(), brute_force(&without, e.u, e.v));
            }
        }
    }
}
