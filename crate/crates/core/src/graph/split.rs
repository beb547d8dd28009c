use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use super::{CitationGraph, Edge};
use crate::error::{Error, Result};
use crate::rng::{stage, stage_rng};

/// Fractions of the positive edges assigned to train, validation and test.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitRatios {
    pub train: f64,
    pub val: f64,
    pub test: f64,
}

impl Default for SplitRatios {
    fn default() -> Self {
        SplitRatios {
            train: 0.75,
            val: 0.05,
            test: 0.20,
        }
    }
}

impl SplitRatios {
    pub fn new(train: f64, val: f64, test: f64) -> Result<Self> {
        let r = SplitRatios { train, val, test };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        let parts = [self.train, self.val, self.test];
        if parts.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidRatios(format!("{parts:?} must be nonnegative")));
        }
        let sum: f64 = parts.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidRatios(format!("{parts:?} sum to {sum}, not 1")));
        }
        Ok(())
    }

    /// `(train, val, test)` sizes for `m` edges: validation and test get
    /// `floor(ratio * m)`, train takes the remainder.
    pub fn sizes(&self, m: usize) -> (usize, usize, usize) {
        // the epsilon absorbs representation error such as 0.29 * 100 = 28.999...
        let floor = |r: f64| ((r * m as f64 + 1e-9).floor() as usize).min(m);
        let val = floor(self.val);
        let test = floor(self.test).min(m - val);
        (m - val - test, val, test)
    }
}

/// Train/validation/test positives and their matched negatives.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EdgeSplit {
    pub train_pos: Vec<Edge>,
    pub val_pos: Vec<Edge>,
    pub test_pos: Vec<Edge>,
    pub train_neg: Vec<Edge>,
    pub val_neg: Vec<Edge>,
    pub test_neg: Vec<Edge>,
    pub seed: u64,
    pub ratios: SplitRatios,
}

impl EdgeSplit {
    /// Fills every negative set with as many non-edges as its positive set,
    /// excluding all positives of `g` and every negative drawn before it.
    pub fn sample_negatives(&mut self, g: &CitationGraph) -> Result<()> {
        let mut drawn: HashSet<Edge> = HashSet::new();
        let plan = [
            (self.train_pos.len(), stage::NEG_TRAIN),
            (self.val_pos.len(), stage::NEG_VAL),
            (self.test_pos.len(), stage::NEG_TEST),
        ];
        let mut out = Vec::with_capacity(3);
        for (count, tag) in plan {
            let seed = crate::rng::derive_seed(self.seed, tag);
            let neg = sample_negative_edges(g, count, seed, &drawn)?;
            drawn.extend(neg.iter().copied());
            out.push(neg);
        }
        self.test_neg = out.pop().unwrap();
        self.val_neg = out.pop().unwrap();
        self.train_neg = out.pop().unwrap();
        Ok(())
    }

    pub fn test_edges(&self) -> impl Iterator<Item = (Edge, bool)> + '_ {
        self.test_pos
            .iter()
            .map(|&e| (e, true))
            .chain(self.test_neg.iter().map(|&e| (e, false)))
    }
}

/// Uniform random partition of the edges of `g`; negatives are left empty.
pub fn split_edges(g: &CitationGraph, ratios: SplitRatios, seed: u64) -> Result<EdgeSplit> {
    ratios.validate()?;
    if g.edge_count() == 0 {
        return Err(Error::EmptyEdgeSet);
    }
    let mut edges = g.edges().to_vec();
    edges.shuffle(&mut stage_rng(seed, stage::SPLIT));
    let (n_train, n_val, _) = ratios.sizes(edges.len());
    let mut test_pos = edges.split_off(n_train + n_val);
    let mut val_pos = edges.split_off(n_train);
    let mut train_pos = edges;
    train_pos.sort_unstable();
    val_pos.sort_unstable();
    test_pos.sort_unstable();
    Ok(EdgeSplit {
        train_pos,
        val_pos,
        test_pos,
        seed,
        ratios,
        ..Default::default()
    })
}

/// Draws `count` distinct non-adjacent pairs uniformly from all pairs that are
/// neither edges of `g` nor in `exclude`.
pub fn sample_negative_edges(
    g: &CitationGraph,
    count: usize,
    seed: u64,
    exclude: &HashSet<Edge>,
) -> Result<Vec<Edge>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let n = g.node_count();
    let total_pairs = n * n.saturating_sub(1) / 2;
    let excluded_non_edges = exclude
        .iter()
        .filter(|e| !e.is_self_loop() && e.v < n && !g.has_edge(e.u, e.v))
        .count();
    let available = total_pairs - g.edge_count() - excluded_non_edges;
    if count > available {
        return Err(Error::InsufficientNonEdges {
            requested: count,
            available,
        });
    }
    let admissible = |e: Edge| !g.has_edge(e.u, e.v) && !exclude.contains(&e);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);

    // Dense regime: enumerate and draw a uniform subset. Sparse regime:
    // rejection sampling, which is uniform over admissible pairs as well.
    if total_pairs <= 1 << 20 || 4 * count >= available {
        let pool: Vec<Edge> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| Edge { u, v }))
            .filter(|&e| admissible(e))
            .collect();
        debug_assert_eq!(pool.len(), available);
        let picks = rand::seq::index::sample(&mut rng, pool.len(), count);
        return Ok(picks.into_iter().map(|i| pool[i]).collect());
    }
    let mut chosen = HashSet::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b {
            continue;
        }
        let e = Edge::new(a, b);
        if admissible(e) && chosen.insert(e) {
            out.push(e);
        }
    }
    Ok(out)
}

/// Graph over all nodes of `g` whose edges are exactly the training positives.
pub fn induced_training_subgraph(g: &CitationGraph, s: &EdgeSplit) -> CitationGraph {
    g.with_edges(s.train_pos.iter().copied())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> CitationGraph {
        let names: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
        CitationGraph::from_parts(names, (1..n).map(|i| Edge::new(i - 1, i)))
    }

    fn complete_minus(n: usize, missing: Edge) -> CitationGraph {
        let names: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| Edge { u, v }))
            .filter(|&e| e != missing);
        CitationGraph::from_parts(names, edges)
    }

    #[test]
    fn hundred_edges_split_75_5_20() {
        let g = path(101);
        let s = split_edges(&g, SplitRatios::default(), 3).unwrap();
        assert_eq!(
            (s.train_pos.len(), s.val_pos.len(), s.test_pos.len()),
            (75, 5, 20)
        );
    }

    #[test]
    fn all_train_ratio() {
        let g = path(9);
        let s = split_edges(&g, SplitRatios::new(1.0, 0.0, 0.0).unwrap(), 0).unwrap();
        assert_eq!(s.train_pos, g.edges());
        assert!(s.val_pos.is_empty() && s.test_pos.is_empty());
        assert_eq!(induced_training_subgraph(&g, &s), g);
    }

    #[test]
    fn split_is_deterministic_per_seed() {
        let g = path(60);
        let a = split_edges(&g, SplitRatios::default(), 11).unwrap();
        let b = split_edges(&g, SplitRatios::default(), 11).unwrap();
        let c = split_edges(&g, SplitRatios::default(), 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.test_pos, c.test_pos);
    }

    #[test]
    fn split_errors() {
        let empty = CitationGraph::from_parts(vec!["a".into()], []);
        assert!(matches!(
            split_edges(&empty, SplitRatios::default(), 0),
            Err(Error::EmptyEdgeSet)
        ));
        assert!(SplitRatios::new(0.5, 0.5, 0.5).is_err());
        assert!(SplitRatios::new(1.2, -0.2, 0.0).is_err());
    }

    #[test]
    fn only_admissible_pair_is_drawn() {
        let missing = Edge::new(2, 3);
        let g = complete_minus(4, missing);
        let neg = sample_negative_edges(&g, 1, 0, &HashSet::new()).unwrap();
        assert_eq!(neg, vec![missing]);

        let p = path(3);
        let neg = sample_negative_edges(&p, 1, 9, &HashSet::new()).unwrap();
        assert_eq!(neg, vec![Edge::new(0, 2)]);
        assert!(sample_negative_edges(&p, 0, 9, &HashSet::new())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn shortfall_is_named() {
        let p = path(3);
        match sample_negative_edges(&p, 2, 0, &HashSet::new()) {
            Err(Error::InsufficientNonEdges {
                requested,
                available,
            }) => assert_eq!((requested, available), (2, 1)),
            other => panic!("unexpected {other:?}"),
        }
        let exclude: HashSet<Edge> = [Edge::new(0, 2)].into();
        assert!(sample_negative_edges(&p, 1, 0, &exclude).is_err());
    }

    #[test]
    fn training_subgraph_of_triangle() {
        let g = CitationGraph::from_named_edges([("a", "b"), ("b", "c"), ("a", "c")]);
        let s = EdgeSplit {
            train_pos: vec![Edge::new(0, 1), Edge::new(1, 2)],
            test_pos: vec![Edge::new(0, 2)],
            ..Default::default()
        };
        let t = induced_training_subgraph(&g, &s);
        assert_eq!((t.node_count(), t.edge_count()), (3, 2));
    }

    #[test]
    fn negatives_per_split_are_disjoint_and_sized() {
        let g = path(40);
        let mut s = split_edges(&g, SplitRatios::default(), 5).unwrap();
        s.sample_negatives(&g).unwrap();
        assert_eq!(s.train_neg.len(), s.train_pos.len());
        assert_eq!(s.val_neg.len(), s.val_pos.len());
        assert_eq!(s.test_neg.len(), s.test_pos.len());
        let all: Vec<Edge> = [&s.train_neg, &s.val_neg, &s.test_neg]
            .into_iter()
            .flatten()
            .copied()
            .collect();
        let uniq: HashSet<Edge> = all.iter().copied().collect();
        assert_eq!(uniq.len(), all.len());
        assert!(all.iter().all(|e| !g.has_edge(e.u, e.v) && !e.is_self_loop()));
    }

    #[test]
    fn rejection_sampler_on_sparse_graph() {
        let g = path(3000);
        let neg = sample_negative_edges(&g, 500, 1, &HashSet::new()).unwrap();
        let uniq: HashSet<Edge> = neg.iter().copied().collect();
        assert_eq!(uniq.len(), 500);
        assert!(neg.iter().all(|e| !g.has_edge(e.u, e.v) && e.u < e.v));
    }
}
