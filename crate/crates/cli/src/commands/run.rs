use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, Context};
use interdisc::analysis::{
    betweenness_idr_test, binned_auc, distance_histograms, edge_betweenness, regress_auc_on_distance,
    regress_edge_auc_on_distance, spearman,
};
use interdisc::distance::{
    distance_table, write_distance_csv, CategoryCitationMatrix, CitationDistanceTable, DistanceContext, DistanceKind,
};
use interdisc::embeddings::{embed_nodes, NodeEmbedding};
use interdisc::graph::{detour_length, graph_stats};
use interdisc::linkpred::{run_seed, EvalReport, ExperimentReport, ScoredEdge, SeedRun};
use interdisc::scalar::Real;
use interdisc::CitationGraph;

use crate::commands::plot::cmd_plot;
use crate::config::{ExperimentConfig, Precision, RegressionMode};
use crate::data::{load_category_matrix, load_graph, sha256_file};
use crate::manifest::{RunManifest, RunStatus, MANIFEST_FILE};
use crate::report::*;
use crate::stage::{note, InStage, StageResult};

/// Output directory under construction; removed unless committed.
struct Staging {
    path: PathBuf,
    committed: bool,
}

impl Staging {
    fn create(out: &Path) -> anyhow::Result<Self> {
        let name = out
            .file_name()
            .ok_or_else(|| anyhow!("output path {} has no final component", out.display()))?;
        let parent = out.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
        let path = parent.join(format!(".{}.partial-{}", name.to_string_lossy(), std::process::id()));
        if path.exists() {
            fs::remove_dir_all(&path)?;
        }
        fs::create_dir(&path).with_context(|| format!("creating {}", path.display()))?;
        Ok(Staging { path, committed: false })
    }

    fn commit(mut self, out: &Path) -> anyhow::Result<()> {
        if out.exists() {
            fs::remove_dir_all(out).with_context(|| format!("removing previous {}", out.display()))?;
        }
        fs::rename(&self.path, out).with_context(|| format!("moving results to {}", out.display()))?;
        self.committed = true;
        Ok(())
    }
}

impl Drop for Staging {
    fn drop(&mut self) {
        if !self.committed {
            let _ = fs::remove_dir_all(&self.path);
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub out: PathBuf,
    pub reports: Vec<ExperimentReport>,
}

/// Runs the configured pipeline into `cfg.out`. Nothing is left behind on failure.
pub fn cmd_run(cfg: &ExperimentConfig, overwrite: bool) -> StageResult<RunOutcome> {
    cfg.validate().in_stage("config")?;
    let out = cfg.out.clone();
    if out.exists() && !overwrite {
        return Err(anyhow!("{} already exists; pass --overwrite to replace it", out.display())).in_stage("prepare");
    }
    let staging = Staging::create(&out).in_stage("prepare")?;
    let dir = staging.path.clone();
    let mut manifest = RunManifest::start(cfg.clone());
    fs::write(dir.join("config.toml"), cfg.to_toml().in_stage("prepare")?).in_stage("prepare")?;
    manifest.write(&dir).in_stage("prepare")?;

    let reports = match cfg.precision {
        Precision::F32 => execute::<f32>(cfg, &dir, &mut manifest)?,
        Precision::F64 => execute::<f64>(cfg, &dir, &mut manifest)?,
    };

    let t = Instant::now();
    manifest.artifacts = hash_tree(&dir).in_stage("finalize")?;
    manifest.status = RunStatus::Complete;
    manifest.record_time("finalize", t.elapsed().as_secs_f64());
    manifest.write(&dir).in_stage("finalize")?;
    staging.commit(&out).in_stage("finalize")?;
    note("finalize", format!("results in {}", out.display()));
    Ok(RunOutcome { out, reports })
}

/// SHA-256 of every file under `root` except the manifest, keyed by relative path.
fn hash_tree(root: &Path) -> anyhow::Result<std::collections::BTreeMap<String, String>> {
    let mut out = std::collections::BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d)? {
            let p = entry?.path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(root)?.to_string_lossy().replace('\\', "/");
                if rel != MANIFEST_FILE {
                    out.insert(rel, sha256_file(&p)?);
                }
            }
        }
    }
    Ok(out)
}

struct Timer<'m> {
    manifest: &'m mut RunManifest,
}

impl Timer<'_> {
    fn time<R>(&mut self, stage: &'static str, f: impl FnOnce() -> StageResult<R>) -> StageResult<R> {
        let t = Instant::now();
        let r = f();
        self.manifest.record_time(stage, t.elapsed().as_secs_f64());
        r
    }
}

fn execute<T: Real>(cfg: &ExperimentConfig, dir: &Path, manifest: &mut RunManifest) -> StageResult<Vec<ExperimentReport>> {
    let kinds: Vec<DistanceKind> = if cfg.stages.distances {
        cfg.analysis.distance_kinds.clone()
    } else {
        Vec::new()
    };
    let mut inputs = Vec::new();
    let mut timer = Timer { manifest };

    let (g, categories) = timer.time("ingest", || {
        let loaded = load_graph(&cfg.data).in_stage("ingest")?;
        if let Some(missing) = &loaded.missing_labels {
            note("ingest", format!("warning: label file {} not found; graph is unlabeled", missing.display()));
        }
        inputs.extend(loaded.inputs);
        let g = loaded.graph;
        note("ingest", graph_stats(&g));
        let categories = if kinds.contains(&DistanceKind::ScopusTopic) {
            if !g.is_labeled() {
                return Err(anyhow!("scopus-topic distance needs node labels")).in_stage("distances");
            }
            Some(match &cfg.data.category_matrix {
                Some(p) => {
                    inputs.push(p.clone());
                    load_category_matrix(p).in_stage("ingest")?
                }
                None => CategoryCitationMatrix::from_graph(&g).in_stage("distances")?,
            })
        } else {
            None
        };
        Ok((g, categories))
    })?;
    for p in &inputs {
        let hash = sha256_file(p).in_stage("ingest")?;
        timer.manifest.inputs.insert(p.display().to_string(), hash);
    }

    let pipeline = cfg.pipeline();
    let mut per_seed: Vec<Vec<EvalReport>> = vec![Vec::new(); cfg.methods.len()];
    let mut pooled: Vec<Vec<CitationDistanceTable>> = cfg
        .methods
        .iter()
        .map(|_| kinds.iter().map(|&kind| CitationDistanceTable { kind, rows: Vec::new() }).collect())
        .collect();
    let mut correlations = Vec::new();
    if !kinds.is_empty() {
        fs::create_dir_all(dir.join(DISTANCES_DIR)).in_stage("distances")?;
    }

    for &seed in &cfg.seeds {
        let runs: Vec<SeedRun<T>> = timer.time("predict", || {
            cfg.methods
                .iter()
                .map(|&m| {
                    let run = run_seed::<T>(&g, m, seed, &pipeline).in_stage("predict")?;
                    let idr = run.report.idr_auc.map_or("n/a".into(), |a| format!("{a:.4}"));
                    note("predict", format!("{m} seed {seed}: AUC {:.4}, IDR AUC {idr}", run.report.auc));
                    Ok(run)
                })
                .collect()
        })?;
        for (i, run) in runs.iter().enumerate() {
            per_seed[i].push(run.report.clone());
        }
        if kinds.is_empty() {
            continue;
        }
        // every method saw the same split, so one training graph serves all
        let train_graph = &runs[0].train_graph;
        let extra: Vec<NodeEmbedding<T>> = timer.time("distances", || {
            kinds
                .iter()
                .filter_map(|k| k.embedding_method())
                .filter(|m| !cfg.methods.contains(m))
                .map(|m| embed_nodes::<T>(train_graph, m, &pipeline.embedding.seeded(seed)).in_stage("distances"))
                .collect()
        })?;
        let mut ctx = DistanceContext {
            labeled: Some(&g),
            categories: categories.as_ref(),
            train_graph: Some(train_graph),
            ..Default::default()
        };
        for e in runs.iter().map(|r| &r.embedding).chain(&extra) {
            ctx.set_embedding(e.method, &e.matrix);
        }
        timer.time("distances", || {
            for (mi, run) in runs.iter().enumerate() {
                let tables = kinds
                    .iter()
                    .map(|&k| distance_table(&run.scored, k, &ctx))
                    .collect::<interdisc::Result<Vec<_>>>()
                    .in_stage("distances")?;
                let path = dir.join(DISTANCES_DIR).join(format!("{}-seed{seed}.csv", run.embedding.method));
                let file = File::create(&path).in_stage("distances")?;
                write_distance_csv(BufWriter::new(file), &tables, &g).in_stage("distances")?;
                for (ki, t) in tables.into_iter().enumerate() {
                    pooled[mi][ki].rows.extend(t.rows);
                }
            }
            Ok(())
        })?;
        if cfg.stages.analysis {
            timer.time("analysis", || {
                correlations.extend(training_correlations(train_graph, &kinds, &ctx, seed).in_stage("analysis")?);
                Ok(())
            })?;
        }
    }

    let reports = timer.time("report", || {
        let reports = cfg
            .methods
            .iter()
            .zip(per_seed)
            .map(|(&m, r)| ExperimentReport::from_reports(m, r))
            .collect::<interdisc::Result<Vec<_>>>()
            .in_stage("report")?;
        write_json(&dir.join(RESULTS_FILE), &reports).in_stage("report")?;
        let rows: Vec<PredictionRow> = reports.iter().map(PredictionRow::from).collect();
        write_csv(&dir.join(TABLE_CSV), &rows).in_stage("report")?;
        fs::write(dir.join(TABLE_MD), prediction_markdown(&rows)).in_stage("report")?;
        for r in &reports {
            note("report", format!("{}: {}", r.method.display_name(), r.table_cell()));
        }
        Ok(reports)
    })?;

    if kinds.is_empty() || !cfg.stages.analysis {
        return Ok(reports);
    }
    timer.time("analysis", || {
        analyze(cfg, dir, &g, &kinds, &pooled, &correlations).in_stage("analysis")
    })?;
    if cfg.stages.plots {
        timer.time("plots", || {
            let files = cmd_plot(dir, dir).in_stage("plots")?;
            note("plots", format!("{} figures", files.len()));
            Ok(())
        })?;
    }
    Ok(reports)
}

/// Spearman correlation between each distance of the training edges and
/// their betweenness in the training graph.
fn training_correlations<T: Real>(
    train_graph: &CitationGraph,
    kinds: &[DistanceKind],
    ctx: &DistanceContext<'_, T>,
    seed: u64,
) -> anyhow::Result<Vec<CorrelationRow>> {
    let bt = edge_betweenness(train_graph);
    let edges: Vec<ScoredEdge> = train_graph
        .edges()
        .iter()
        .map(|&edge| ScoredEdge { edge, positive: true, score: 0.0 })
        .collect();
    let mut rows = Vec::new();
    for &kind in kinds {
        // a training edge is its own shortest path, so network distance uses the detour around it
        let distances: Vec<Option<f64>> = if kind == DistanceKind::Network {
            train_graph
                .edges()
                .iter()
                .map(|&e| detour_length(train_graph, e).map(|p| p.hops().map(|h| h as f64)))
                .collect::<interdisc::Result<_>>()?
        } else {
            distance_table(&edges, kind, ctx)?.rows.iter().map(|r| r.distance).collect()
        };
        let (d, b): (Vec<f64>, Vec<f64>) = distances
            .iter()
            .zip(&bt.scores)
            .filter_map(|(d, &s)| d.map(|d| (d, s)))
            .unzip();
        let fit = spearman(&d, &b);
        rows.push(CorrelationRow {
            seed,
            kind,
            n: d.len(),
            spearman_rho: fit.as_ref().ok().map(|c| c.spearman_rho),
            note: fit.err().map(|e| e.to_string()),
        });
    }
    Ok(rows)
}

fn analyze(
    cfg: &ExperimentConfig,
    dir: &Path,
    g: &CitationGraph,
    kinds: &[DistanceKind],
    pooled: &[Vec<CitationDistanceTable>],
    correlations: &[CorrelationRow],
) -> anyhow::Result<()> {
    let spec = cfg.analysis.bin_spec();
    let mut curves = Vec::new();
    let mut curve_csv = Vec::new();
    let mut regressions = Vec::new();
    for (&method, tables) in cfg.methods.iter().zip(pooled) {
        for t in tables {
            let curve = binned_auc(t, spec)?;
            if curve.is_empty_curve() {
                note("analysis", format!("{method} × {}: no bin meets the 25/25 rule", t.kind));
            }
            let fit = match cfg.analysis.regression {
                RegressionMode::Bins => regress_auc_on_distance(&curve),
                RegressionMode::Edges => regress_edge_auc_on_distance(t),
            };
            regressions.push(RegressionRow::new(method, t.kind, cfg.analysis.regression, fit.map_err(|e| e.to_string())));
            curve_csv.extend(curve_rows(method, &curve));
            curves.push((method, curve));
        }
    }
    note(
        "analysis",
        format!(
            "{} curves, {} of {} regressions fitted",
            curves.len(),
            regressions.iter().filter(|r| r.note.is_none()).count(),
            regressions.len()
        ),
    );
    write_csv(&dir.join(CURVES_FILE), &curve_csv)?;
    write_csv(&dir.join(REGRESSION_CSV), &regressions)?;
    fs::write(dir.join(REGRESSION_MD), regression_markdown(&regressions))?;

    // test edges and their distances are shared by all methods; only scores differ
    let mut histograms = Vec::new();
    for t in &pooled[0] {
        match distance_histograms(t, cfg.analysis.histogram_bins) {
            Ok(h) => histograms.push(h),
            Err(e) => note("analysis", format!("no {} histogram: {e}", t.kind)),
        }
    }
    let hist_rows: Vec<HistogramRow> = histograms.iter().flat_map(histogram_rows).collect();
    write_csv(&dir.join(HISTOGRAMS_FILE), &hist_rows)?;
    write_csv(&dir.join(CORRELATIONS_FILE), correlations)?;

    let (betweenness_idr, betweenness_note) = if g.is_labeled() {
        match betweenness_idr_test(g, &edge_betweenness(g)) {
            Ok(r) => (Some(r), None),
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (None, Some("graph is unlabeled".to_string()))
    };
    let report = AnalysisReport {
        betweenness_idr,
        betweenness_note,
        correlations: mean_correlations(correlations, kinds),
        curves,
        regressions,
        histograms,
    };
    write_json(&dir.join(ANALYSIS_FILE), &report)
}
