//! Command-line surface. Every run flag overrides the matching config field.

use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use interdisc::distance::DistanceKind;
use interdisc::embeddings::EmbeddingMethod;
use interdisc::graph::{LabelFormat, SplitRatios};
use interdisc::linkpred::FeatureMode;

use crate::commands::{ingest::cmd_ingest, plot::cmd_plot, run::cmd_run, stats::cmd_stats};
use crate::config::{DataConfig, ExperimentConfig, Precision, RegressionMode};
use crate::stage::{note, InStage, StageResult};

#[derive(Debug, Parser)]
#[command(name = "interdisc", version, about = "Citation prediction and citation-distance analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse edge and label files into a graph cache and print its summary.
    Ingest(IngestArgs),
    /// Run the prediction experiment and the distance analyses.
    Run(Box<RunArgs>),
    /// Render figures from the report files of a run.
    Plot(PlotArgs),
    /// Print dataset statistics.
    Stats(StatsArgs),
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Graph cache written by `ingest`.
    #[arg(long, conflicts_with_all = ["edges", "labels"])]
    pub graph: Option<PathBuf>,
    /// Edge list: two node tokens per line, `#` comments.
    #[arg(long)]
    pub edges: Option<PathBuf>,
    /// Node labels: `node category` per line.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// `pair` (node category) or `first-last` (node ... category).
    #[arg(long, value_parser = parse_label_format)]
    pub label_format: Option<LabelFormat>,
    /// Labeled nodes missing from the edge list join as isolated nodes.
    #[arg(long)]
    pub add_unknown_nodes: bool,
    /// Category for nodes without a label line.
    #[arg(long)]
    pub fallback_category: Option<String>,
}

impl InputArgs {
    pub fn apply(&self, d: &mut DataConfig) {
        if self.graph.is_some() {
            d.graph = self.graph.clone();
            d.edges = None;
            d.labels = None;
        }
        if self.edges.is_some() {
            d.edges = self.edges.clone();
            d.graph = None;
        }
        if self.labels.is_some() {
            d.labels = self.labels.clone();
        }
        if let Some(f) = self.label_format {
            d.label_format = f;
        }
        if self.add_unknown_nodes {
            d.add_unknown_nodes = true;
        }
        if self.fallback_category.is_some() {
            d.fallback_category = self.fallback_category.clone();
        }
    }

    fn data(&self) -> DataConfig {
        let mut d = DataConfig::default();
        self.apply(&mut d);
        d
    }
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Where to write the graph cache (JSON).
    #[arg(long, default_value = "graph.json")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// TOML config; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub input: InputArgs,
    /// Tab-separated category-citation matrix for topic distance.
    #[arg(long)]
    pub category_matrix: Option<PathBuf>,
    /// Embedding methods, comma-separated.
    #[arg(long = "method", value_delimiter = ',')]
    pub methods: Vec<EmbeddingMethod>,
    #[arg(long)]
    pub dims: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub walk_length: Option<usize>,
    /// Walks started from every node.
    #[arg(long)]
    pub num_walks: Option<usize>,
    #[arg(long)]
    pub window: Option<usize>,
    /// Negative samples per positive pair.
    #[arg(long)]
    pub negatives: Option<usize>,
    /// SkipGram passes over the walk corpus.
    #[arg(long)]
    pub epochs: Option<usize>,
    /// Initial SkipGram learning rate.
    #[arg(long)]
    pub learning_rate: Option<f64>,
    /// SkipGram worker threads; above 1 training is not reproducible.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub hidden: Option<usize>,
    #[arg(long)]
    pub mlp_learning_rate: Option<f64>,
    #[arg(long)]
    pub momentum: Option<f64>,
    #[arg(long)]
    pub batch_size: Option<usize>,
    #[arg(long)]
    pub max_epochs: Option<usize>,
    #[arg(long)]
    pub patience: Option<usize>,
    /// `canonical` or `symmetrized` edge features.
    #[arg(long, value_parser = parse_feature_mode)]
    pub features: Option<FeatureMode>,
    /// Comma-separated split seeds.
    #[arg(long, value_delimiter = ',')]
    pub seeds: Vec<u64>,
    /// Train, validation and test fractions, e.g. `0.75,0.05,0.20` or `75:5:20`.
    #[arg(long, value_parser = parse_ratios)]
    pub ratios: Option<SplitRatios>,
    /// Equal-width bins per AUC-vs-distance curve.
    #[arg(long)]
    pub bins: Option<usize>,
    /// Fixed bin width instead of a bin count.
    #[arg(long)]
    pub bin_width: Option<f64>,
    #[arg(long)]
    pub histogram_bins: Option<usize>,
    /// Distance kinds, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub distance_kinds: Vec<DistanceKind>,
    #[arg(long, value_enum)]
    pub regression: Option<RegressionMode>,
    #[arg(long, value_enum)]
    pub precision: Option<Precision>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Replace an existing output directory.
    #[arg(long)]
    pub overwrite: bool,
    #[arg(long)]
    pub no_distances: bool,
    #[arg(long)]
    pub no_analysis: bool,
    #[arg(long)]
    pub no_plots: bool,
    /// Print the effective config as TOML and exit.
    #[arg(long)]
    pub print_config: bool,
}

impl RunArgs {
    /// Defaults, then the config file, then flags.
    pub fn resolve(&self) -> anyhow::Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(p) => ExperimentConfig::read(p)?,
            None => ExperimentConfig::default(),
        };
        self.input.apply(&mut c.data);
        if self.category_matrix.is_some() {
            c.data.category_matrix = self.category_matrix.clone();
        }
        if !self.methods.is_empty() {
            c.methods = self.methods.clone();
        }
        if !self.seeds.is_empty() {
            c.seeds = self.seeds.clone();
        }
        if !self.distance_kinds.is_empty() {
            c.analysis.distance_kinds = self.distance_kinds.clone();
        }
        macro_rules! set {
            ($($flag:ident => $($field:ident).+),* $(,)?) => {
                $(if let Some(v) = self.$flag { c.$($field).+ = v; })*
            };
        }
        set!(
            dims => embedding.dimensions,
            p => embedding.p,
            q => embedding.q,
            walk_length => embedding.walk_length,
            num_walks => embedding.walks_per_node,
            window => embedding.window,
            negatives => embedding.negatives,
            epochs => embedding.epochs,
            learning_rate => embedding.learning_rate,
            threads => embedding.threads,
            hidden => classifier.hidden,
            mlp_learning_rate => classifier.learning_rate,
            momentum => classifier.momentum,
            batch_size => classifier.batch_size,
            max_epochs => classifier.max_epochs,
            patience => classifier.patience,
            features => classifier.features,
            ratios => split,
            bins => analysis.bins,
            histogram_bins => analysis.histogram_bins,
            regression => analysis.regression,
            precision => precision,
        );
        if self.bin_width.is_some() {
            c.analysis.bin_width = self.bin_width;
        } else if self.bins.is_some() {
            c.analysis.bin_width = None;
        }
        if let Some(out) = &self.out {
            c.out = out.clone();
        }
        if self.no_distances {
            c.stages.distances = false;
        }
        if self.no_analysis {
            c.stages.analysis = false;
        }
        if self.no_plots {
            c.stages.plots = false;
        }
        Ok(c)
    }
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Run directory holding curves.csv and histograms.csv.
    pub run_dir: PathBuf,
    /// Where to write the figures; defaults to the run directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Also test whether cross-label edges carry higher betweenness.
    #[arg(long)]
    pub betweenness: bool,
    /// Print JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

fn parse_label_format(s: &str) -> Result<LabelFormat, String> {
    s.parse().map_err(|e: interdisc::Error| e.to_string())
}

fn parse_feature_mode(s: &str) -> Result<FeatureMode, String> {
    match s.to_ascii_lowercase().as_str() {
        "canonical" => Ok(FeatureMode::Canonical),
        "symmetrized" => Ok(FeatureMode::Symmetrized),
        other => Err(format!("unknown feature mode `{other}` (canonical, symmetrized)")),
    }
}

/// Accepts fractions summing to 1 or percentages summing to 100.
pub fn parse_ratios(s: &str) -> Result<SplitRatios, String> {
    let parts: Vec<f64> = s
        .split([',', ':'])
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    let [a, b, c] = parts[..] else {
        return Err(format!("expected three ratios, got {}", parts.len()));
    };
    let scale = if (a + b + c - 100.0).abs() < 1e-6 { 100.0 } else { 1.0 };
    SplitRatios::new(a / scale, b / scale, c / scale).map_err(|e| e.to_string())
}

pub fn execute(cli: Cli) -> StageResult<()> {
    match cli.command {
        Command::Ingest(a) => {
            let data = a.input.data();
            if data.graph.is_some() || data.edges.is_none() {
                return Err(anyhow::anyhow!("ingest needs --edges")).in_stage("ingest");
            }
            let o = cmd_ingest(&data, &a.out).in_stage("ingest")?;
            println!("{}", o.summary);
            note(
                "ingest",
                format!(
                    "{} self-loops dropped, {} duplicate lines collapsed; cache {} (sha256 {})",
                    o.self_loops_dropped,
                    o.duplicates_collapsed,
                    a.out.display(),
                    o.cache_hash
                ),
            );
        }
        Command::Run(a) => {
            let cfg = a.resolve().in_stage("config")?;
            if a.print_config {
                print!("{}", cfg.to_toml().in_stage("config")?);
                return Ok(());
            }
            let outcome = cmd_run(&cfg, a.overwrite)?;
            println!("{}", crate::report::prediction_markdown(
                &outcome.reports.iter().map(Into::into).collect::<Vec<_>>()
            ));
        }
        Command::Plot(a) => {
            let to = a.out.clone().unwrap_or_else(|| a.run_dir.clone());
            for f in cmd_plot(&a.run_dir, &to).in_stage("plot")? {
                println!("{}", f.display());
            }
        }
        Command::Stats(a) => {
            let data = a.input.data();
            if data.graph.is_none() && data.edges.is_none() {
                return Err(anyhow::anyhow!("stats needs --graph or --edges")).in_stage("stats");
            }
            let r = cmd_stats(&data, a.betweenness).in_stage("stats")?;
            if a.json {
                println!("{}", serde_json::to_string_pretty(&r).context("serializing").in_stage("stats")?);
            } else {
                println!("{r}");
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> RunArgs {
        let mut full = vec!["interdisc", "run"];
        full.extend_from_slice(args);
        match Cli::parse_from(full).command {
            Command::Run(a) => *a,
            other => panic!("parsed {other:?}"),
        }
    }

    #[test]
    fn ratios_accept_fractions_and_percentages() {
        assert_eq!(parse_ratios("0.75,0.05,0.20").unwrap(), SplitRatios::default());
        assert_eq!(parse_ratios("75:5:20").unwrap(), SplitRatios::default());
        assert!(parse_ratios("0.5,0.5").is_err());
        assert!(parse_ratios("0.5,0.5,0.5").is_err());
    }

    #[test]
    fn flags_override_every_field() {
        let a = run_args(&[
            "--edges", "e.txt", "--method", "deepwalk,role2vec", "--dims", "16", "--p", "0.5", "--q", "2",
            "--walk-length", "20", "--num-walks", "3", "--window", "4", "--seeds", "7,8", "--ratios", "80:10:10",
            "--bins", "12", "--distance-kinds", "network,topic", "--out", "res", "--precision", "f64",
            "--features", "symmetrized", "--regression", "edges", "--no-plots",
        ]);
        let c = a.resolve().unwrap();
        assert_eq!(c.methods, vec![EmbeddingMethod::DeepWalk, EmbeddingMethod::Role2Vec]);
        assert_eq!(
            (c.embedding.dimensions, c.embedding.p, c.embedding.q, c.embedding.walk_length),
            (16, 0.5, 2.0, 20)
        );
        assert_eq!((c.embedding.walks_per_node, c.embedding.window), (3, 4));
        assert_eq!(c.seeds, vec![7, 8]);
        assert_eq!(c.split, SplitRatios::new(0.8, 0.1, 0.1).unwrap());
        assert_eq!(c.analysis.bins, 12);
        assert_eq!(c.analysis.distance_kinds, vec![DistanceKind::Network, DistanceKind::ScopusTopic]);
        assert_eq!(c.out, PathBuf::from("res"));
        assert_eq!(c.precision, Precision::F64);
        assert_eq!(c.classifier.features, FeatureMode::Symmetrized);
        assert_eq!(c.analysis.regression, RegressionMode::Edges);
        assert!(!c.stages.plots && c.stages.analysis);
        assert_eq!(c.data.edges, Some(PathBuf::from("e.txt")));
    }

    #[test]
    fn no_flags_leave_defaults() {
        let c = run_args(&[]).resolve().unwrap();
        assert_eq!(c, ExperimentConfig::default());
    }
}
