//! Uniform (DeepWalk), second-order biased (node2vec) and role-emitting walks.
//!
//! Every start node owns its own ChaCha stream derived from the walk seed and
//! the node index, so the corpus does not depend on how generation is
//! scheduled across threads.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::roles::RoleAssignment;
use crate::error::{Error, Result};
use crate::graph::CitationGraph;
use crate::rng::{derive_seed, stage};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub walks_per_node: usize,
    /// Nodes per walk, including the start node.
    pub walk_length: usize,
    /// Return parameter: unnormalized weight `1/p` for stepping back.
    pub p: f64,
    /// In-out parameter: unnormalized weight `1/q` for moving away.
    pub q: f64,
    pub seed: u64,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig {
            walks_per_node: 10,
            walk_length: 80,
            p: 1.0,
            q: 1.0,
            seed: 0,
        }
    }
}

impl WalkConfig {
    pub fn validate(&self) -> Result<()> {
        if self.walks_per_node < 1 {
            return Err(Error::InvalidConfig("walks_per_node must be >= 1".into()));
        }
        if self.walk_length < 2 {
            return Err(Error::InvalidConfig("walk_length must be >= 2".into()));
        }
        if !(self.p > 0.0 && self.p.is_finite() && self.q > 0.0 && self.q.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "p and q must be positive, got p={} q={}",
                self.p, self.q
            )));
        }
        Ok(())
    }
}

/// Token sequences over a vocabulary of node (or role) indices.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WalkCorpus {
    pub walks: Vec<Vec<usize>>,
    pub vocabulary_size: usize,
}

impl WalkCorpus {
    pub fn token_count(&self) -> usize {
        self.walks.iter().map(Vec::len).sum()
    }

    pub fn token_frequencies(&self) -> Vec<u64> {
        let mut freq = vec![0u64; self.vocabulary_size];
        for &t in self.walks.iter().flatten() {
            freq[t] += 1;
        }
        freq
    }

    pub fn is_empty(&self) -> bool {
        self.token_count() == 0
    }
}

/// Unnormalized node2vec weights from `current`, given the node visited before it.
///
/// Returns `(neighbor, probability)` for every neighbor of `current`. Without a
/// previous node the step is uniform.
pub fn transition_probabilities(
    g: &CitationGraph,
    previous: Option<usize>,
    current: usize,
    p: f64,
    q: f64,
) -> Vec<(usize, f64)> {
    let nbrs = g.neighbors(current);
    let weights: Vec<f64> = nbrs
        .iter()
        .map(|&x| match previous {
            None => 1.0,
            Some(prev) => step_weight(g, prev, x, 1.0 / p, 1.0 / q),
        })
        .collect();
    let total: f64 = weights.iter().sum();
    nbrs.iter()
        .zip(weights)
        .map(|(&x, w)| (x, w / total))
        .collect()
}

#[inline]
fn step_weight(g: &CitationGraph, prev: usize, next: usize, w_return: f64, w_out: f64) -> f64 {
    if next == prev {
        w_return
    } else if g.has_edge(prev, next) {
        1.0
    } else {
        w_out
    }
}

#[derive(Clone, Copy)]
enum Stepper {
    Uniform,
    Biased { w_return: f64, w_out: f64, w_max: f64 },
}

impl Stepper {
    fn from_pq(p: f64, q: f64) -> Self {
        let (w_return, w_out) = (1.0 / p, 1.0 / q);
        Stepper::Biased {
            w_return,
            w_out,
            w_max: w_return.max(w_out).max(1.0),
        }
    }

    /// One step from `cur`. The biased rule uses rejection sampling against the
    /// largest weight; a candidate carrying that weight is accepted without an
    /// extra draw, so `p = q = 1` consumes the stream exactly like `Uniform`.
    #[inline]
    fn step(&self, g: &CitationGraph, prev: Option<usize>, cur: usize, rng: &mut ChaCha8Rng) -> usize {
        let nbrs = g.neighbors(cur);
        match (self, prev) {
            (Stepper::Uniform, _) | (_, None) => nbrs[rng.gen_range(0..nbrs.len())],
            (&Stepper::Biased { w_return, w_out, w_max }, Some(prev)) => loop {
                let x = nbrs[rng.gen_range(0..nbrs.len())];
                let w = step_weight(g, prev, x, w_return, w_out);
                if w >= w_max || rng.gen::<f64>() * w_max < w {
                    break x;
                }
            },
        }
    }
}

fn node_stream(seed: u64, node: usize) -> ChaCha8Rng {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, stage::WALKS));
    rng.set_stream(node as u64);
    rng
}

fn generate(g: &CitationGraph, cfg: &WalkConfig, stepper: Stepper) -> Result<WalkCorpus> {
    cfg.validate()?;
    let n = g.node_count();
    if n == 0 {
        return Err(Error::InvalidConfig("cannot walk an empty graph".into()));
    }
    let per_node: Vec<Vec<Vec<usize>>> = (0..n)
        .into_par_iter()
        .map(|start| {
            let mut rng = node_stream(cfg.seed, start);
            (0..cfg.walks_per_node)
                .map(|_| {
                    let mut walk = Vec::with_capacity(cfg.walk_length);
                    walk.push(start);
                    let mut prev = None;
                    let mut cur = start;
                    while walk.len() < cfg.walk_length && g.degree(cur) > 0 {
                        let next = stepper.step(g, prev, cur, &mut rng);
                        walk.push(next);
                        prev = Some(cur);
                        cur = next;
                    }
                    walk
                })
                .collect()
        })
        .collect();
    // round-major: the r-th walk of every node, then the (r+1)-th
    let mut iters: Vec<_> = per_node.into_iter().map(Vec::into_iter).collect();
    let mut walks = Vec::with_capacity(n * cfg.walks_per_node);
    for _ in 0..cfg.walks_per_node {
        for it in iters.iter_mut() {
            walks.push(it.next().expect("walks_per_node walks per node"));
        }
    }
    Ok(WalkCorpus {
        walks,
        vocabulary_size: n,
    })
}

/// `walks_per_node` uniform random walks from every node.
pub fn generate_walks_uniform(g: &CitationGraph, cfg: &WalkConfig) -> Result<WalkCorpus> {
    generate(g, cfg, Stepper::Uniform)
}

/// Second-order walks: weight `1/p` to return to the previous node, `1` to a
/// neighbor of the previous node, `1/q` otherwise.
pub fn generate_walks_biased(g: &CitationGraph, cfg: &WalkConfig) -> Result<WalkCorpus> {
    generate(g, cfg, Stepper::from_pq(cfg.p, cfg.q))
}

/// Uniform walks on `g` that emit each visited node's role instead of the node.
pub fn generate_role_walks(
    g: &CitationGraph,
    roles: &RoleAssignment,
    cfg: &WalkConfig,
) -> Result<WalkCorpus> {
    if roles.roles.len() != g.node_count() {
        return Err(Error::ShapeMismatch {
            expected: g.node_count(),
            actual: roles.roles.len(),
        });
    }
    let mut corpus = generate_walks_uniform(g, cfg)?;
    for t in corpus.walks.iter_mut().flatten() {
        *t = roles.roles[*t];
    }
    corpus.vocabulary_size = roles.role_count;
    Ok(corpus)
}
