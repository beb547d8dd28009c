//! Citation prediction: concatenated endpoint embeddings classified by a
//! small MLP, scored by overall and interdisciplinary (cross-label) AUC.

mod auc;
mod eval;
mod experiment;
mod features;
mod mlp;

pub(crate) use auc::average_ranks;
pub use auc::compute_auc;
pub use eval::{evaluate, report_from_scores, score_edges, EvalReport, ScoredEdge};
pub use experiment::{run_experiment, run_seed, ExperimentReport, PipelineConfig, SeedRun, DEFAULT_SEEDS};
pub use features::{featurize_edge, EdgeFeatures, FeatureMode};
pub use mlp::{train_classifier, EpochRecord, Mlp, MlpConfig, TrainedClassifier};
