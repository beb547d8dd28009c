//! Evaluation analytics: edge betweenness, rank correlation, KS tests,
//! distance histograms, distance-binned AUC curves and their regressions.

mod betweenness;
mod binned;
mod idr;
mod stats;
pub mod svg;

pub use betweenness::{edge_betweenness, EdgeBetweenness};
pub use binned::{
    binned_auc, distance_histograms, edge_auc_contributions, regress_auc_on_distance, regress_edge_auc_on_distance, BinLayout, BinSpec, BinnedAuc, DistanceBin,
    DistanceHistogram, DEFAULT_BIN_COUNT, MIN_EDGES_PER_CLASS,
};
pub use idr::{betweenness_idr_test, BetweennessIdrReport};
pub use stats::{ks_two_sample, ols, spearman, CorrelationReport, KsReport, RegressionReport};
