use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use interdisc::graph::planted_partition;
use interdisc::linkpred::ExperimentReport;
use interdisc_cli::config::ExperimentConfig;
use interdisc_cli::manifest::{RunManifest, RunStatus};
use tempfile::TempDir;

fn interdisc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_interdisc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Writes `edges.txt` and `labels.txt` for a three-block planted partition.
fn dataset(dir: &Path) -> (PathBuf, PathBuf) {
    let g = planted_partition(3, 60, 0.15, 0.01, 3).graph;
    let mut edges = String::from("# planted partition\n");
    for e in g.edges() {
        edges += &format!("{} {}\n", g.node_name(e.u), g.node_name(e.v));
    }
    let mut labels = String::new();
    for u in 0..g.node_count() {
        labels += &format!("{}\t{}\n", g.node_name(u), g.category_names()[g.label(u).unwrap()]);
    }
    let (e, l) = (dir.join("edges.txt"), dir.join("labels.txt"));
    fs::write(&e, edges).unwrap();
    fs::write(&l, labels).unwrap();
    (e, l)
}

const FAST: &[&str] = &[
    "--dims", "16", "--num-walks", "4", "--walk-length", "20", "--epochs", "1", "--max-epochs", "30", "--bins", "6",
];

fn run(tmp: &TempDir, out: &str, extra: &[&str]) -> (Output, PathBuf) {
    let (e, l) = dataset(tmp.path());
    let out = tmp.path().join(out);
    let mut args = vec!["run", "--edges", e.to_str().unwrap(), "--labels", l.to_str().unwrap()];
    args.extend_from_slice(FAST);
    args.extend_from_slice(&["--out", out.to_str().unwrap()]);
    args.extend_from_slice(extra);
    (interdisc(&args), out)
}

#[test]
fn ingest_prints_summary_and_caches_deterministically() {
    let tmp = TempDir::new().unwrap();
    let (e, l) = dataset(tmp.path());
    let cache = tmp.path().join("g.json");
    let args = ["ingest", "--edges", e.to_str().unwrap(), "--labels", l.to_str().unwrap(), "--out", cache.to_str().unwrap()];
    let first = interdisc(&args);
    assert!(first.status.success(), "{}", stderr(&first));
    let g = planted_partition(3, 60, 0.15, 0.01, 3).graph;
    let expected = format!("180 papers, {:.2} cites/paper, 3 topics", 2.0 * g.edge_count() as f64 / 180.0);
    assert_eq!(stdout(&first).trim(), expected);
    let bytes = fs::read(&cache).unwrap();
    let second = interdisc(&args);
    assert!(second.status.success());
    assert_eq!(fs::read(&cache).unwrap(), bytes);
    assert!(stderr(&first).contains("sha256"));
}

#[test]
fn ingest_without_label_file_warns_and_caches_unlabeled() {
    let tmp = TempDir::new().unwrap();
    let (e, _) = dataset(tmp.path());
    let cache = tmp.path().join("g.json");
    let missing = tmp.path().join("absent.txt");
    let o = interdisc(&[
        "ingest", "--edges", e.to_str().unwrap(), "--labels", missing.to_str().unwrap(), "--out", cache.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("[ingest] warning"), "{}", stderr(&o));
    assert!(stdout(&o).contains("0 topics"));
    let g: interdisc::CitationGraph = serde_json::from_slice(&fs::read(&cache).unwrap()).unwrap();
    assert!(!g.is_labeled());
}

#[test]
fn single_seed_report_mean_is_that_seed() {
    let tmp = TempDir::new().unwrap();
    let (o, out) = run(&tmp, "single", &["--seeds", "7", "--method", "deepwalk", "--no-distances"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let reports: Vec<ExperimentReport> = serde_json::from_str(&fs::read_to_string(out.join("results.json")).unwrap()).unwrap();
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0].seeds, vec![7]);
    assert_eq!(reports[0].mean_auc, reports[0].per_seed[0].auc);
    // disabled stages leave no trace
    assert!(!out.join("distances").exists());
    assert!(!out.join("curves.csv").exists());
}

#[test]
fn full_run_writes_comparison_curves_regressions_and_figures() {
    let tmp = TempDir::new().unwrap();
    let (o, out) = run(&tmp, "full", &["--seeds", "0,1"]);
    assert!(o.status.success(), "{}", stderr(&o));

    let table = fs::read_to_string(out.join("prediction.md")).unwrap();
    assert!(table.starts_with("| Method | AUC (IDR AUC) |"));
    for m in ["DeepWalk", "node2vec", "role2vec"] {
        assert!(table.contains(&format!("| {m} | ")), "{table}");
    }

    let curves = fs::read_to_string(out.join("curves.csv")).unwrap();
    for k in ["scopus-topic", "network", "deepwalk-embedding", "node2vec-embedding", "role2vec-embedding"] {
        assert!(curves.contains(&format!(",{k},")), "missing {k}");
        assert!(out.join(format!("histogram_{k}.svg")).exists());
    }
    let regression = fs::read_to_string(out.join("regression.md")).unwrap();
    assert!(regression.starts_with(
        "| Method | Scopus Topic | Network | DeepWalk Embedding | node2vec Embedding | role2vec Embedding |"
    ));

    let figure = fs::read_to_string(out.join("auc_vs_distance.svg")).unwrap();
    assert_eq!(figure.matches("Embedding</text>").count(), 3);
    assert!(figure.contains(">Network</text>") && figure.contains(">Scopus Topic</text>"));
    let hist = fs::read_to_string(out.join("histogram_network.svg")).unwrap();
    assert!(hist.contains(">positive</text>") && hist.contains(">negative</text>"));

    for seed in [0, 1] {
        assert!(out.join(format!("distances/role2vec-seed{seed}.csv")).exists());
    }
    let m = RunManifest::read(&out).unwrap();
    assert_eq!(m.status, RunStatus::Complete);
    assert_eq!(m.inputs.len(), 2);
    assert!(m.artifacts.contains_key("curves.csv") && m.artifacts.contains_key("distances/deepwalk-seed0.csv"));
    assert!(m.timings.iter().any(|t| t.stage == "predict"));
    assert_eq!(m.config.seeds, vec![0, 1]);
    for stage in ["[ingest]", "[predict]", "[analysis]", "[plots]", "[finalize]"] {
        assert!(stderr(&o).contains(stage), "no {stage} line");
    }
}

#[test]
fn serial_runs_are_byte_reproducible() {
    let tmp = TempDir::new().unwrap();
    let extra = ["--seeds", "3", "--distance-kinds", "network,deepwalk"];
    let (a, out_a) = run(&tmp, "a", &extra);
    let (b, out_b) = run(&tmp, "b", &extra);
    assert!(a.status.success() && b.status.success());
    let (ma, mb) = (RunManifest::read(&out_a).unwrap(), RunManifest::read(&out_b).unwrap());
    let config_a = ma.artifacts.get("config.toml").cloned();
    let strip = |m: &RunManifest| {
        let mut x = m.artifacts.clone();
        // the config echo names its own output directory
        x.remove("config.toml");
        x
    };
    assert!(config_a.is_some());
    assert_eq!(strip(&ma), strip(&mb));
    assert_eq!(
        fs::read(out_a.join("results.json")).unwrap(),
        fs::read(out_b.join("results.json")).unwrap()
    );
}

#[test]
fn failing_stage_is_named_and_leaves_no_output() {
    let tmp = TempDir::new().unwrap();
    let (e, _) = dataset(tmp.path());
    let out = tmp.path().join("never");
    let o = interdisc(&[
        "run", "--edges", e.to_str().unwrap(), "--seeds", "0", "--distance-kinds", "topic", "--out", out.to_str().unwrap(),
    ]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("[distances]"), "{}", stderr(&o));
    assert!(!out.exists());
    let leftovers: Vec<_> = fs::read_dir(tmp.path())
        .unwrap()
        .filter_map(|d| d.ok())
        .filter(|d| d.file_name().to_string_lossy().contains("partial"))
        .collect();
    assert!(leftovers.is_empty());

    let bad = interdisc(&["run", "--edges", "/nonexistent/edges.txt", "--out", out.to_str().unwrap()]);
    assert!(!bad.status.success());
    assert!(stderr(&bad).contains("[ingest]"));
}

#[test]
fn existing_output_needs_overwrite() {
    let tmp = TempDir::new().unwrap();
    let args = ["--seeds", "0", "--method", "deepwalk", "--no-distances"];
    let (first, out) = run(&tmp, "o", &args);
    assert!(first.status.success());
    let (second, _) = run(&tmp, "o", &args);
    assert!(!second.status.success());
    assert!(stderr(&second).contains("[prepare]"));
    let mut with = args.to_vec();
    with.push("--overwrite");
    let (third, _) = run(&tmp, "o", &with);
    assert!(third.status.success());
    assert!(out.join("results.json").exists());
}

#[test]
fn config_file_drives_the_run_and_flags_override_it() {
    let tmp = TempDir::new().unwrap();
    dataset(tmp.path());
    let mut cfg = ExperimentConfig::default();
    cfg.data.edges = Some("edges.txt".into());
    cfg.data.labels = Some("labels.txt".into());
    cfg.methods = vec![interdisc::embeddings::EmbeddingMethod::DeepWalk];
    cfg.seeds = vec![1, 2];
    cfg.out = tmp.path().join("from-config");
    cfg.embedding.dimensions = 8;
    cfg.embedding.walks_per_node = 2;
    cfg.embedding.walk_length = 10;
    cfg.embedding.epochs = 1;
    cfg.classifier.max_epochs = 5;
    cfg.stages.distances = false;
    let path = tmp.path().join("exp.toml");
    fs::write(&path, cfg.to_toml().unwrap()).unwrap();

    let printed = interdisc(&["run", "--config", path.to_str().unwrap(), "--seeds", "4", "--print-config"]);
    assert!(printed.status.success());
    let effective = ExperimentConfig::from_toml(&stdout(&printed)).unwrap();
    assert_eq!(effective.seeds, vec![4]);
    assert_eq!(effective.embedding.dimensions, 8);
    assert_eq!(effective.data.edges, Some(tmp.path().join("edges.txt")));

    let o = interdisc(&["run", "--config", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let echoed = ExperimentConfig::from_toml(&fs::read_to_string(cfg.out.join("config.toml")).unwrap()).unwrap();
    assert_eq!(echoed.seeds, vec![1, 2]);
    assert_eq!(echoed.embedding, cfg.embedding);
}

#[test]
fn plot_rerenders_from_report_files() {
    let tmp = TempDir::new().unwrap();
    let (o, out) = run(&tmp, "p", &["--seeds", "0", "--distance-kinds", "network", "--no-plots"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(!out.join("auc_vs_distance.svg").exists());
    let figs = tmp.path().join("figs");
    let p = interdisc(&["plot", out.to_str().unwrap(), "--out", figs.to_str().unwrap()]);
    assert!(p.status.success(), "{}", stderr(&p));
    assert!(figs.join("auc_vs_distance.svg").exists());
    assert!(figs.join("histogram_network.svg").exists());

    let empty = tmp.path().join("empty");
    fs::create_dir(&empty).unwrap();
    let e = interdisc(&["plot", empty.to_str().unwrap()]);
    assert!(!e.status.success());
    assert!(stderr(&e).contains("[plot]"));
}

#[test]
fn stats_reports_summary_and_betweenness_test() {
    let tmp = TempDir::new().unwrap();
    let (e, l) = dataset(tmp.path());
    let o = interdisc(&["stats", "--edges", e.to_str().unwrap(), "--labels", l.to_str().unwrap(), "--betweenness", "--json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["summary"]["paper_count"], 180);
    assert_eq!(v["summary"]["topic_count"], 3);
    assert_eq!(v["betweenness_idr"]["inter_greater"], true);
    let text = interdisc(&["stats", "--edges", e.to_str().unwrap()]);
    assert!(stdout(&text).starts_with("180 papers"));
}
