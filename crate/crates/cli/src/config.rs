//! Declarative experiment configuration, read from TOML and overridable flag by flag.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use interdisc::analysis::{BinSpec, DEFAULT_BIN_COUNT};
use interdisc::distance::DistanceKind;
use interdisc::embeddings::{EmbeddingConfig, EmbeddingMethod, SkipGramConfig, WalkConfig};
use interdisc::graph::{LabelFormat, LabelOptions, SplitRatios};
use interdisc::linkpred::{FeatureMode, MlpConfig, PipelineConfig, DEFAULT_SEEDS};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    #[default]
    F32,
    F64,
}

/// Operand of the AUC-vs-distance regression.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RegressionMode {
    /// Bin AUC on bin midpoint.
    #[default]
    Bins,
    /// Per-edge AUC contribution on edge distance.
    Edges,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataConfig {
    /// Graph cache written by `ingest`; replaces `edges` and `labels`.
    pub graph: Option<PathBuf>,
    pub edges: Option<PathBuf>,
    pub labels: Option<PathBuf>,
    pub label_format: LabelFormat,
    pub add_unknown_nodes: bool,
    pub fallback_category: Option<String>,
    /// Tab-separated category-citation matrix for topic distance; derived
    /// from the labeled graph when absent.
    pub category_matrix: Option<PathBuf>,
}

impl DataConfig {
    pub fn label_options(&self) -> LabelOptions {
        LabelOptions {
            format: self.label_format,
            add_unknown_nodes: self.add_unknown_nodes,
            fallback_category: self.fallback_category.clone(),
        }
    }

    /// Resolves relative paths against `base`.
    fn rebase(&mut self, base: &Path) {
        for p in [&mut self.graph, &mut self.edges, &mut self.labels, &mut self.category_matrix]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EmbeddingSection {
    pub dimensions: usize,
    pub walks_per_node: usize,
    pub walk_length: usize,
    pub p: f64,
    pub q: f64,
    pub window: usize,
    pub negatives: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    /// Above 1, SkipGram updates run lock-free and are no longer reproducible.
    pub threads: usize,
    pub role_log_base: f64,
}

impl Default for EmbeddingSection {
    fn default() -> Self {
        let e = EmbeddingConfig::default();
        EmbeddingSection {
            dimensions: e.dimensions,
            walks_per_node: e.walk.walks_per_node,
            walk_length: e.walk.walk_length,
            p: e.walk.p,
            q: e.walk.q,
            window: e.skipgram.window,
            negatives: e.skipgram.negatives_per_positive,
            epochs: e.skipgram.epochs,
            learning_rate: e.skipgram.initial_learning_rate,
            threads: e.skipgram.threads,
            role_log_base: e.role_log_base,
        }
    }
}

impl EmbeddingSection {
    pub fn to_core(&self) -> EmbeddingConfig {
        EmbeddingConfig {
            dimensions: self.dimensions,
            walk: WalkConfig {
                walks_per_node: self.walks_per_node,
                walk_length: self.walk_length,
                p: self.p,
                q: self.q,
                seed: 0,
            },
            skipgram: SkipGramConfig {
                window: self.window,
                negatives_per_positive: self.negatives,
                epochs: self.epochs,
                initial_learning_rate: self.learning_rate,
                seed: 0,
                threads: self.threads,
            },
            role_log_base: self.role_log_base,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifierSection {
    pub hidden: usize,
    pub learning_rate: f64,
    pub momentum: f64,
    pub batch_size: usize,
    pub max_epochs: usize,
    pub patience: usize,
    pub features: FeatureMode,
}

impl Default for ClassifierSection {
    fn default() -> Self {
        let m = MlpConfig::default();
        ClassifierSection {
            hidden: m.hidden,
            learning_rate: m.learning_rate,
            momentum: m.momentum,
            batch_size: m.batch_size,
            max_epochs: m.max_epochs,
            patience: m.patience,
            features: FeatureMode::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisSection {
    pub distance_kinds: Vec<DistanceKind>,
    /// Equal-width bins per AUC-vs-distance curve.
    pub bins: usize,
    /// Fixed bin width; overrides `bins` when set.
    pub bin_width: Option<f64>,
    pub histogram_bins: usize,
    pub regression: RegressionMode,
}

impl Default for AnalysisSection {
    fn default() -> Self {
        AnalysisSection {
            distance_kinds: DistanceKind::ALL.to_vec(),
            bins: DEFAULT_BIN_COUNT,
            bin_width: None,
            histogram_bins: DEFAULT_BIN_COUNT,
            regression: RegressionMode::default(),
        }
    }
}

impl AnalysisSection {
    pub fn bin_spec(&self) -> BinSpec {
        match self.bin_width {
            Some(w) => BinSpec::Width(w),
            None => BinSpec::Count(self.bins),
        }
    }
}

/// Stages after prediction; a disabled stage also disables the stages that read its outputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StageSwitches {
    pub distances: bool,
    pub analysis: bool,
    pub plots: bool,
}

impl Default for StageSwitches {
    fn default() -> Self {
        StageSwitches {
            distances: true,
            analysis: true,
            plots: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub methods: Vec<EmbeddingMethod>,
    pub seeds: Vec<u64>,
    pub precision: Precision,
    pub out: PathBuf,
    pub data: DataConfig,
    pub split: SplitRatios,
    pub embedding: EmbeddingSection,
    pub classifier: ClassifierSection,
    pub analysis: AnalysisSection,
    pub stages: StageSwitches,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            methods: EmbeddingMethod::ALL.to_vec(),
            seeds: DEFAULT_SEEDS.to_vec(),
            precision: Precision::default(),
            out: PathBuf::from("out"),
            data: DataConfig::default(),
            split: SplitRatios::default(),
            embedding: EmbeddingSection::default(),
            classifier: ClassifierSection::default(),
            analysis: AnalysisSection::default(),
            stages: StageSwitches::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> anyhow::Result<Self> {
        Ok(toml::from_str(text)?)
    }

    /// Reads a config file; relative data paths resolve against its directory.
    pub fn read(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut cfg = Self::from_toml(&text).with_context(|| format!("parsing {}", path.display()))?;
        if let Some(dir) = path.parent() {
            cfg.data.rebase(dir);
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> anyhow::Result<String> {
        Ok(toml::to_string_pretty(self)?)
    }

    pub fn pipeline(&self) -> PipelineConfig {
        let c = &self.classifier;
        PipelineConfig {
            ratios: self.split,
            embedding: self.embedding.to_core(),
            classifier: MlpConfig {
                hidden: c.hidden,
                learning_rate: c.learning_rate,
                momentum: c.momentum,
                batch_size: c.batch_size,
                max_epochs: c.max_epochs,
                patience: c.patience,
                seed: 0,
            },
            features: c.features,
        }
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.methods.is_empty() {
            bail!("at least one embedding method is required");
        }
        if self.seeds.is_empty() {
            bail!("at least one seed is required");
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = self.seeds.iter().find(|s| !seen.insert(**s)) {
            bail!("seed {dup} listed twice");
        }
        if self.data.graph.is_none() && self.data.edges.is_none() {
            bail!("no input: set data.graph or data.edges");
        }
        if self.embedding.dimensions == 0 {
            bail!("embedding dimensions must be positive");
        }
        if self.analysis.histogram_bins == 0 {
            bail!("histogram_bins must be positive");
        }
        let p = self.pipeline();
        p.ratios.validate()?;
        p.embedding.walk.validate()?;
        p.embedding.skipgram.validate()?;
        p.classifier.validate()?;
        if self.analysis.bin_width.is_none() && self.analysis.bins == 0 {
            bail!("bins must be positive");
        }
        if let Some(w) = self.analysis.bin_width {
            if !(w > 0.0 && w.is_finite()) {
                bail!("bin_width must be positive, got {w}");
            }
        }
        Ok(())
    }
}
