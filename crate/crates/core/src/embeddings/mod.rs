//! DeepWalk, node2vec and role2vec node embeddings: random-walk corpora fed
//! to a SkipGram negative-sampling trainer.

mod matrix;
mod roles;
mod skipgram;
mod walks;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::CitationGraph;
use crate::scalar::Real;

pub use matrix::{EmbeddingMatrix, RowIndex};
pub use roles::{assign_roles, log_bin, roles_from_tuples, structural_features, RoleAssignment, StructuralFeatures};
pub use skipgram::{
    pair_gradients, pair_loss, train_skipgram, train_skipgram_traced, PairGradients, SkipGramConfig,
    TrainingTrace, MIN_LEARNING_RATE_FRACTION,
};
pub use walks::{
    generate_role_walks, generate_walks_biased, generate_walks_uniform, transition_probabilities, WalkConfig,
    WalkCorpus,
};

pub const DEFAULT_DIMENSIONS: usize = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmbeddingMethod {
    DeepWalk,
    Node2Vec,
    Role2Vec,
}

impl EmbeddingMethod {
    pub const ALL: [EmbeddingMethod; 3] = [
        EmbeddingMethod::DeepWalk,
        EmbeddingMethod::Node2Vec,
        EmbeddingMethod::Role2Vec,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EmbeddingMethod::DeepWalk => "deepwalk",
            EmbeddingMethod::Node2Vec => "node2vec",
            EmbeddingMethod::Role2Vec => "role2vec",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            EmbeddingMethod::DeepWalk => "DeepWalk",
            EmbeddingMethod::Node2Vec => "node2vec",
            EmbeddingMethod::Role2Vec => "role2vec",
        }
    }
}

impl fmt::Display for EmbeddingMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EmbeddingMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "deepwalk" => Ok(EmbeddingMethod::DeepWalk),
            "node2vec" => Ok(EmbeddingMethod::Node2Vec),
            "role2vec" => Ok(EmbeddingMethod::Role2Vec),
            other => Err(Error::InvalidConfig(format!("unknown embedding method `{other}`"))),
        }
    }
}

/// Everything needed to embed a graph with one method.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingConfig {
    pub dimensions: usize,
    pub walk: WalkConfig,
    pub skipgram: SkipGramConfig,
    /// Logarithm base for binning role features.
    pub role_log_base: f64,
}

impl Default for EmbeddingConfig {
    fn default() -> Self {
        EmbeddingConfig {
            dimensions: DEFAULT_DIMENSIONS,
            walk: WalkConfig::default(),
            skipgram: SkipGramConfig::default(),
            role_log_base: 2.0,
        }
    }
}

impl EmbeddingConfig {
    /// Same settings with walk and training seeds replaced.
    pub fn seeded(mut self, seed: u64) -> Self {
        self.walk.seed = seed;
        self.skipgram.seed = seed;
        self
    }
}

/// A node embedding together with the role map when the method is role-based.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeEmbedding<T> {
    pub method: EmbeddingMethod,
    pub matrix: EmbeddingMatrix<T>,
    pub roles: Option<RoleAssignment>,
    pub trace: TrainingTrace,
}

/// Embeds every node of `g` (normally the training subgraph) with `method`.
pub fn embed_nodes<T: Real>(
    g: &CitationGraph,
    method: EmbeddingMethod,
    cfg: &EmbeddingConfig,
) -> Result<NodeEmbedding<T>> {
    let (corpus, roles) = match method {
        EmbeddingMethod::DeepWalk => (generate_walks_uniform(g, &cfg.walk)?, None),
        EmbeddingMethod::Node2Vec => (generate_walks_biased(g, &cfg.walk)?, None),
        EmbeddingMethod::Role2Vec => {
            let roles = assign_roles(&structural_features(g), cfg.role_log_base)?;
            (generate_role_walks(g, &roles, &cfg.walk)?, Some(roles))
        }
    };
    let (mut matrix, trace) = train_skipgram_traced(&corpus, cfg.dimensions, &cfg.skipgram)?;
    if let Some(r) = &roles {
        matrix = matrix.with_row_map(r.roles.clone())?;
    }
    Ok(NodeEmbedding {
        method,
        matrix,
        roles,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_names_round_trip() {
        for m in EmbeddingMethod::ALL {
            assert_eq!(m.as_str().parse::<EmbeddingMethod>().unwrap(), m);
            assert_eq!(serde_json::to_string(&m).unwrap(), format!("\"{m}\""));
        }
        assert!("line".parse::<EmbeddingMethod>().is_err());
    }

    #[test]
    fn role2vec_single_role_gives_identical_vectors() {
        // a cycle: every node has degree 2 and no triangles
        let g = CitationGraph::from_named_edges([("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "a")]);
        let cfg = EmbeddingConfig {
            dimensions: 8,
            walk: WalkConfig { walks_per_node: 2, walk_length: 10, ..Default::default() },
            skipgram: SkipGramConfig { epochs: 1, ..Default::default() },
            ..Default::default()
        };
        let e: NodeEmbedding<f64> = embed_nodes(&g, EmbeddingMethod::Role2Vec, &cfg).unwrap();
        assert_eq!(e.roles.as_ref().unwrap().role_count, 1);
        assert_eq!(e.matrix.rows(), 1);
        for u in 1..5 {
            assert_eq!(e.matrix.node_vector(u).unwrap(), e.matrix.node_vector(0).unwrap());
        }
    }

    fn small() -> EmbeddingConfig {
        EmbeddingConfig {
            dimensions: 16,
            walk: WalkConfig { walks_per_node: 10, walk_length: 20, seed: 4, ..Default::default() },
            skipgram: SkipGramConfig { epochs: 3, window: 5, seed: 4, ..Default::default() },
            ..Default::default()
        }
    }

    #[test]
    fn deepwalk_equals_unit_parameter_node2vec() {
        let g = crate::graph::planted_partition(2, 20, 0.3, 0.05, 1).graph;
        let a: NodeEmbedding<f32> = embed_nodes(&g, EmbeddingMethod::DeepWalk, &small()).unwrap();
        let b: NodeEmbedding<f32> = embed_nodes(&g, EmbeddingMethod::Node2Vec, &small()).unwrap();
        assert_eq!(a.matrix, b.matrix);
    }

    #[test]
    fn serial_embeddings_are_bit_identical() {
        let g = crate::graph::planted_partition(2, 20, 0.3, 0.05, 2).graph;
        for m in EmbeddingMethod::ALL {
            let a: NodeEmbedding<f32> = embed_nodes(&g, m, &small()).unwrap();
            let b: NodeEmbedding<f32> = embed_nodes(&g, m, &small()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn communities_are_closer_inside_than_across() {
        let pp = crate::graph::planted_partition(2, 50, 0.2, 0.01, 3);
        let e: NodeEmbedding<f64> = embed_nodes(&pp.graph, EmbeddingMethod::DeepWalk, &small()).unwrap();
        let (mut within, mut across) = (Vec::new(), Vec::new());
        for a in 0..100 {
            for b in a + 1..100 {
                let c = e.matrix.cosine(a, b).unwrap();
                if pp.blocks[a] == pp.blocks[b] { within.push(c) } else { across.push(c) }
            }
        }
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        assert!(mean(&within) > mean(&across), "{} vs {}", mean(&within), mean(&across));
    }

    #[test]
    fn epoch_losses_do_not_rise_beyond_two_percent() {
        let g = crate::graph::planted_partition(3, 40, 0.2, 0.02, 5).graph;
        let cfg = EmbeddingConfig { skipgram: SkipGramConfig { epochs: 5, ..small().skipgram }, ..small() };
        let e: NodeEmbedding<f32> = embed_nodes(&g, EmbeddingMethod::DeepWalk, &cfg).unwrap();
        for w in e.trace.epoch_losses.windows(2) {
            assert!(w[1] <= w[0] * 1.02, "{:?}", e.trace.epoch_losses);
        }
    }

    #[test]
    fn default_dimension_is_128() {
        let g = crate::graph::planted_partition(2, 10, 0.5, 0.1, 6).graph;
        let cfg = EmbeddingConfig {
            walk: WalkConfig { walks_per_node: 1, walk_length: 5, ..Default::default() },
            skipgram: SkipGramConfig { epochs: 1, ..Default::default() },
            ..Default::default()
        };
        let e: NodeEmbedding<f32> = embed_nodes(&g, EmbeddingMethod::Node2Vec, &cfg).unwrap();
        assert_eq!((e.matrix.rows(), e.matrix.dim()), (20, 128));
    }
}
