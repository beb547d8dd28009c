use serde::{Deserialize, Serialize};

use super::eval::{report_from_scores, score_edges, EvalReport, ScoredEdge};
use super::features::{EdgeFeatures, FeatureMode};
use super::mlp::{train_classifier, MlpConfig, TrainedClassifier};
use crate::embeddings::{embed_nodes, EmbeddingConfig, EmbeddingMethod, NodeEmbedding};
use crate::error::{Error, Result};
use crate::graph::{induced_training_subgraph, split_edges, CitationGraph, Edge, EdgeSplit, SplitRatios};
use crate::scalar::Real;

pub const DEFAULT_SEEDS: [u64; 5] = [0, 1, 2, 3, 4];

/// Settings shared by every seed of an experiment.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub ratios: SplitRatios,
    pub embedding: EmbeddingConfig,
    pub classifier: MlpConfig,
    pub features: FeatureMode,
}

/// Everything one seed produced, kept for downstream distance analyses.
#[derive(Clone, Debug)]
pub struct SeedRun<T> {
    pub report: EvalReport,
    pub split: EdgeSplit,
    pub train_graph: CitationGraph,
    pub embedding: NodeEmbedding<T>,
    pub classifier: TrainedClassifier<T>,
    /// Test edges in `EdgeSplit::test_edges` order.
    pub scored: Vec<ScoredEdge>,
}

fn labeled_edges<'a>(pos: &'a [Edge], neg: &'a [Edge]) -> impl Iterator<Item = (Edge, bool)> + 'a {
    pos.iter().map(|&e| (e, true)).chain(neg.iter().map(|&e| (e, false)))
}

/// Split, embed the training subgraph, train the classifier, score the test set.
pub fn run_seed<T: Real>(
    g: &CitationGraph,
    method: EmbeddingMethod,
    seed: u64,
    cfg: &PipelineConfig,
) -> Result<SeedRun<T>> {
    let mut split = split_edges(g, cfg.ratios, seed)?;
    split.sample_negatives(g)?;
    let train_graph = induced_training_subgraph(g, &split);
    let embedding: NodeEmbedding<T> = embed_nodes(&train_graph, method, &cfg.embedding.seeded(seed))?;
    let m = &embedding.matrix;
    let train = EdgeFeatures::from_edges(labeled_edges(&split.train_pos, &split.train_neg), m, cfg.features)?;
    let val = EdgeFeatures::from_edges(labeled_edges(&split.val_pos, &split.val_neg), m, cfg.features)?;
    let classifier = train_classifier(&train, &val, &MlpConfig { seed, ..cfg.classifier })?;
    let test: Vec<(Edge, bool)> = split.test_edges().collect();
    let scored = score_edges(&classifier.model, m, &test, cfg.features)?;
    let report = report_from_scores(&scored, g, seed)?;
    Ok(SeedRun {
        report,
        split,
        train_graph,
        embedding,
        classifier,
        scored,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub method: EmbeddingMethod,
    pub seeds: Vec<u64>,
    pub mean_auc: f64,
    /// Mean over the seeds that produced an IDR AUC.
    pub mean_idr_auc: Option<f64>,
    pub per_seed: Vec<EvalReport>,
}

impl ExperimentReport {
    pub fn from_reports(method: EmbeddingMethod, per_seed: Vec<EvalReport>) -> Result<Self> {
        if per_seed.is_empty() {
            return Err(Error::InvalidConfig("at least one seed is required".into()));
        }
        let mean_auc = per_seed.iter().map(|r| r.auc).sum::<f64>() / per_seed.len() as f64;
        let idr: Vec<f64> = per_seed.iter().filter_map(|r| r.idr_auc).collect();
        let mean_idr_auc = (!idr.is_empty()).then(|| idr.iter().sum::<f64>() / idr.len() as f64);
        Ok(ExperimentReport {
            method,
            seeds: per_seed.iter().map(|r| r.seed).collect(),
            mean_auc,
            mean_idr_auc,
            per_seed,
        })
    }

    /// `0.836 (0.817)`, or `0.836 (n/a)` without an IDR AUC.
    pub fn table_cell(&self) -> String {
        match self.mean_idr_auc {
            Some(idr) => format!("{:.3} ({:.3})", self.mean_auc, idr),
            None => format!("{:.3} (n/a)", self.mean_auc),
        }
    }
}

/// Runs the whole pipeline once per seed and averages the AUCs.
pub fn run_experiment<T: Real>(
    g: &CitationGraph,
    method: EmbeddingMethod,
    seeds: &[u64],
    cfg: &PipelineConfig,
) -> Result<ExperimentReport> {
    if seeds.is_empty() {
        return Err(Error::InvalidConfig("at least one seed is required".into()));
    }
    let reports = seeds
        .iter()
        .map(|&s| run_seed::<T>(g, method, s, cfg).map(|r| r.report))
        .collect::<Result<Vec<_>>>()?;
    ExperimentReport::from_reports(method, reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embeddings::{SkipGramConfig, WalkConfig};
    use crate::graph::planted_partition;

    fn quick() -> PipelineConfig {
        PipelineConfig {
            embedding: EmbeddingConfig {
                dimensions: 16,
                walk: WalkConfig { walks_per_node: 4, walk_length: 20, ..Default::default() },
                skipgram: SkipGramConfig { epochs: 1, window: 5, ..Default::default() },
                ..Default::default()
            },
            classifier: MlpConfig { hidden: 16, max_epochs: 20, ..Default::default() },
            ..Default::default()
        }
    }

    #[test]
    fn single_seed_mean_is_that_seed() {
        let g = planted_partition(2, 40, 0.2, 0.02, 1).graph;
        let r = run_experiment::<f32>(&g, EmbeddingMethod::DeepWalk, &[7], &quick()).unwrap();
        assert_eq!(r.seeds, vec![7]);
        assert_eq!(r.mean_auc, r.per_seed[0].auc);
        assert_eq!(r.mean_idr_auc, r.per_seed[0].idr_auc);
    }

    #[test]
    fn reruns_reproduce_means() {
        let g = planted_partition(2, 40, 0.2, 0.02, 2).graph;
        let a = run_experiment::<f32>(&g, EmbeddingMethod::Role2Vec, &[0, 1], &quick()).unwrap();
        let b = run_experiment::<f32>(&g, EmbeddingMethod::Role2Vec, &[0, 1], &quick()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn deepwalk_beats_chance_on_communities() {
        let g = planted_partition(2, 60, 0.2, 0.01, 3).graph;
        let mut cfg = quick();
        cfg.embedding.walk.walks_per_node = 10;
        cfg.embedding.skipgram.epochs = 5;
        let r = run_seed::<f32>(&g, EmbeddingMethod::DeepWalk, 0, &cfg).unwrap();
        assert!(r.report.auc > 0.65, "{}", r.report.auc);
        assert_eq!(r.scored.len(), r.split.test_pos.len() + r.split.test_neg.len());
    }

    #[test]
    fn table_cell_format() {
        let rep = |idr| EvalReport { auc: 0.8361, idr_auc: idr, n_test_pos: 1, n_test_neg: 1, n_idr_pos: 0, n_idr_neg: 0, seed: 0 };
        let r = ExperimentReport::from_reports(EmbeddingMethod::Role2Vec, vec![rep(Some(0.817))]).unwrap();
        assert_eq!(r.table_cell(), "0.836 (0.817)");
        let r = ExperimentReport::from_reports(EmbeddingMethod::Role2Vec, vec![rep(None)]).unwrap();
        assert_eq!(r.table_cell(), "0.836 (n/a)");
        assert!(ExperimentReport::from_reports(EmbeddingMethod::DeepWalk, vec![]).is_err());
    }
}
