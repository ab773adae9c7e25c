//! Command-line front end: cluster, metrics, verify-duality and bench.
//!
//! Exit codes: 0 success, 1 parse/IO error, 2 invalid flags or label
//! mismatch, 3 duality property violation.

mod duality_suite;

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use harary_clust::cluster::{run, ClusterResult, Config};
use harary_clust::graph::{parse_edge_list, preprocess, InputFormat, SignedGraph};
use harary_clust::metrics::metrics_record;
use harary_clust::Error;

const EXIT_IO: i32 = 1;
const EXIT_FLAGS: i32 = 2;
const EXIT_DUALITY: i32 = 3;

#[derive(Parser)]
#[command(name = "harary-clust", version, about = "Signed-graph clustering via Harary cuts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cluster a signed graph and write labels, trace and manifest.
    Cluster(ClusterArgs),
    /// Report the quality measures of an existing labeling.
    Metrics(MetricsArgs),
    /// Check the spectral/balance duality properties on small graphs.
    VerifyDuality(DualityArgs),
    /// Run the clusterer over every dataset in a directory for each value
    /// of a swept parameter and emit one CSV row per run.
    Bench(BenchArgs),
}

#[derive(Args, Clone)]
struct ConfigArgs {
    /// Tree samples per component split search.
    #[arg(short = 'I', long, default_value_t = 1000)]
    iterations: u64,
    /// Weight of positive versus negative violations in the cut loss.
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Weight of the edge terms versus the isolated-vertex penalty.
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Minimum overall improvement a split must deliver.
    #[arg(long, default_value_t = 1e-8)]
    epsilon: f64,
    /// Components of at most this size are never split.
    #[arg(long, default_value_t = 2)]
    gamma: u64,
    /// Wall-clock budget in seconds (-1 = unlimited).
    #[arg(long = "time-limit", default_value_t = -1, allow_negative_numbers = true)]
    time_limit: i64,
    /// Master seed for all randomness.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Spanning-tree sampler: random-bfs or random-kruskal.
    #[arg(long = "tree-method", default_value = "random-bfs")]
    tree_method: String,
}

impl ConfigArgs {
    fn to_config(&self) -> Result<Config, String> {
        let tree_method = self.tree_method.parse()?;
        let config = Config {
            iterations: self.iterations,
            alpha: self.alpha,
            beta: self.beta,
            epsilon: self.epsilon,
            gamma: self.gamma,
            time_limit_s: self.time_limit,
            seed: self.seed,
            tree_method,
            refine: false,
        };
        config.validate().map_err(|e| e.to_string())?;
        Ok(config)
    }
}

#[derive(Args)]
struct ClusterArgs {
    /// Input edge-list file.
    #[arg(long)]
    input: PathBuf,
    /// Input format: konect or amazon-ratings.
    #[arg(long, default_value = "konect")]
    format: String,
    #[command(flatten)]
    config: ConfigArgs,
    /// Write per-vertex cluster labels to this CSV file.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Write the committed-split trace to this CSV file.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write a replayable run manifest to this JSON file.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct MetricsArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "konect")]
    format: String,
    /// Labels CSV (vertex,cluster) covering every vertex.
    #[arg(long)]
    labels: PathBuf,
}

#[derive(Args)]
struct DualityArgs {
    /// Largest random-graph size for the property checks.
    #[arg(long = "n-max", default_value_t = 8)]
    n_max: usize,
    /// Number of random graphs per property.
    #[arg(long, default_value_t = 40)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Optional signed graph whose balance duality is checked as well;
    /// an unbalanced fixture fails the suite.
    #[arg(long)]
    fixture: Option<PathBuf>,
    #[arg(long, default_value = "konect")]
    format: String,
}

#[derive(Args)]
struct BenchArgs {
    /// Directory of dataset files; every file with an edge-list extension
    /// (tsv, txt, csv, edges, el, konect) is clustered.
    #[arg(long)]
    dir: PathBuf,
    /// Parameter sweep, e.g. `gamma=2,1000,2000` or `iterations=10,50,1000`.
    #[arg(long)]
    sweep: String,
    #[arg(long, default_value = "konect")]
    format: String,
    #[command(flatten)]
    config: ConfigArgs,
    /// Write the result rows here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Parse { .. } | Error::Io(_) | Error::EmptyGraph => EXIT_IO,
        _ => EXIT_FLAGS,
    }
}

fn load_graph(path: &Path, format: &str) -> Result<SignedGraph, i32> {
    let format: InputFormat = format.parse().map_err(|e: String| {
        eprintln!("error: {e}");
        EXIT_FLAGS
    })?;
    let file = File::open(path).map_err(|e| {
        eprintln!("error: cannot open {}: {e}", path.display());
        EXIT_IO
    })?;
    let list = parse_edge_list(BufReader::new(file), format).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        exit_code_for(&e)
    })?;
    preprocess(&list).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        exit_code_for(&e)
    })
}

#[derive(Serialize, Deserialize)]
struct ManifestConfig {
    iterations: u64,
    alpha: f64,
    beta: f64,
    epsilon: f64,
    gamma: u64,
    time_limit_s: i64,
    seed: u64,
    tree_method: String,
}

#[derive(Serialize, Deserialize)]
struct ManifestSummary {
    clusters_ge5: usize,
    clusters_lt5: usize,
    splits: usize,
    pos_in: f64,
    neg_out: f64,
    overall_loss: f64,
}

#[derive(Serialize, Deserialize)]
struct ManifestOutputs {
    labels: Option<String>,
    trace: Option<String>,
}

/// Everything needed to replay a run and reproduce its labels exactly.
#[derive(Serialize, Deserialize)]
struct RunManifest {
    input: String,
    format: String,
    config: ManifestConfig,
    elapsed_s: f64,
    summary: ManifestSummary,
    outputs: ManifestOutputs,
}

fn write_labels(path: &Path, g: &SignedGraph, result: &ClusterResult) -> std::io::Result<()> {
    let mut f = File::create(path)?;
    writeln!(f, "vertex,cluster")?;
    for (name, label) in result.labeled_vertices(g) {
        writeln!(f, "{name},{label}")?;
    }
    Ok(())
}

fn write_trace(path: &Path, result: &ClusterResult) -> std::io::Result<()> {
    let mut f = File::create(path)?;
    writeln!(f, "split,label,size,frustration,pos_in,neg_out,overall_loss,clusters,elapsed_s")?;
    for r in &result.trace {
        writeln!(
            f,
            "{},{},{},{},{:.6},{:.6},{:.6},{},{:.3}",
            r.split_index,
            r.component_label,
            r.component_size,
            r.frustration,
            r.pos_in,
            r.neg_out,
            r.overall_loss,
            r.cluster_count,
            r.elapsed_s
        )?;
    }
    Ok(())
}

fn summary_line(result: &ClusterResult) -> String {
    format!(
        "clusters≥5={} clusters<5={} splits={} pos_in={:.4} neg_out={:.4} time_s={:.2}",
        result.clusters_ge5,
        result.clusters_lt5,
        result.split_count,
        result.final_metrics.pos_in,
        result.final_metrics.neg_out,
        result.elapsed_s
    )
}

fn cmd_cluster(args: &ClusterArgs) -> i32 {
    let config = match args.config.to_config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_FLAGS;
        }
    };
    let g = match load_graph(&args.input, &args.format) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let started = Instant::now();
    let result = match run(&g, &config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    let elapsed = started.elapsed().as_secs_f64();

    if let Some(path) = &args.labels {
        if let Err(e) = write_labels(path, &g, &result) {
            eprintln!("error: writing {}: {e}", path.display());
            return EXIT_IO;
        }
    }
    if let Some(path) = &args.trace {
        if let Err(e) = write_trace(path, &result) {
            eprintln!("error: writing {}: {e}", path.display());
            return EXIT_IO;
        }
    }
    if let Some(path) = &args.manifest {
        let manifest = RunManifest {
            input: args.input.display().to_string(),
            format: args.format.clone(),
            config: ManifestConfig {
                iterations: config.iterations,
                alpha: config.alpha,
                beta: config.beta,
                epsilon: config.epsilon,
                gamma: config.gamma,
                time_limit_s: config.time_limit_s,
                seed: config.seed,
                tree_method: config.tree_method.to_string(),
            },
            elapsed_s: elapsed,
            summary: ManifestSummary {
                clusters_ge5: result.clusters_ge5,
                clusters_lt5: result.clusters_lt5,
                splits: result.split_count,
                pos_in: result.final_metrics.pos_in,
                neg_out: result.final_metrics.neg_out,
                overall_loss: result.final_metrics.overall_loss,
            },
            outputs: ManifestOutputs {
                labels: args.labels.as_ref().map(|p| p.display().to_string()),
                trace: args.trace.as_ref().map(|p| p.display().to_string()),
            },
        };
        let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        if let Err(e) = std::fs::write(path, json) {
            eprintln!("error: writing {}: {e}", path.display());
            return EXIT_IO;
        }
    }
    println!("{}", summary_line(&result));
    0
}

fn read_labels_csv(path: &Path) -> Result<HashMap<String, u32>, i32> {
    let file = File::open(path).map_err(|e| {
        eprintln!("error: cannot open {}: {e}", path.display());
        EXIT_IO
    })?;
    let mut map = HashMap::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| {
            eprintln!("error: {e}");
            EXIT_IO
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || (idx == 0 && trimmed.eq_ignore_ascii_case("vertex,cluster")) {
            continue;
        }
        let Some((vertex, cluster)) = trimmed.split_once(',') else {
            eprintln!("error: {}:{}: expected 'vertex,cluster'", path.display(), idx + 1);
            return Err(EXIT_FLAGS);
        };
        let cluster: u32 = cluster.trim().parse().map_err(|_| {
            eprintln!("error: {}:{}: bad cluster id '{cluster}'", path.display(), idx + 1);
            EXIT_FLAGS
        })?;
        map.insert(vertex.trim().to_string(), cluster);
    }
    Ok(map)
}

fn cmd_metrics(args: &MetricsArgs) -> i32 {
    let g = match load_graph(&args.input, &args.format) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let by_name = match read_labels_csv(&args.labels) {
        Ok(m) => m,
        Err(code) => return code,
    };
    let mut labels = Vec::with_capacity(g.vertex_count());
    for v in 0..g.vertex_count() as u32 {
        match by_name.get(g.original_id(v)) {
            Some(&l) => labels.push(l),
            None => {
                eprintln!("error: vertex '{}' has no label in {}", g.original_id(v), args.labels.display());
                return EXIT_FLAGS;
            }
        }
    }
    let record = match metrics_record(&g, &labels, 0.5, 1.0) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    println!("pos_between={}", record.counts.pos_between);
    println!("pos_within={}", record.counts.pos_within);
    println!("neg_within={}", record.counts.neg_within);
    println!("neg_between={}", record.counts.neg_between);
    println!("unhappy_ratio={:.6}", record.unhappy_ratio);
    println!("unhappy_score={:.6}", record.unhappy_score);
    println!("pos_in={:.4}", record.pos_in);
    println!("pos_out={:.4}", record.pos_out);
    println!("neg_in={:.4}", record.neg_in);
    println!("neg_out={:.4}", record.neg_out);
    println!("v_iso={}", record.v_iso);
    println!("v_total={}", record.v_total);
    println!("loss={:.6}", record.loss);
    println!("overall_loss={:.6}", record.overall_loss);
    0
}

fn cmd_verify_duality(args: &DualityArgs) -> i32 {
    let fixture = match &args.fixture {
        Some(path) => match load_graph(path, &args.format) {
            Ok(g) => Some(g),
            Err(code) => return code,
        },
        None => None,
    };
    let reports = duality_suite::run_suite(args.n_max, args.trials, args.seed, fixture.as_ref());
    let mut all_ok = true;
    for report in &reports {
        if report.passed {
            println!("PASS {} — {}", report.name, report.detail);
        } else {
            all_ok = false;
            println!("FAIL {} — {}", report.name, report.detail);
            if let Some(edges) = &report.counterexample {
                println!("counterexample edge list:");
                for line in edges {
                    println!("  {line}");
                }
            }
        }
    }
    if all_ok {
        0
    } else {
        EXIT_DUALITY
    }
}

fn parse_sweep(spec: &str) -> Result<(String, Vec<String>), String> {
    let (param, values) = spec
        .split_once('=')
        .ok_or_else(|| format!("sweep '{spec}' is not of the form param=v1,v2,..."))?;
    let values: Vec<String> = values.split(',').map(|v| v.trim().to_string()).collect();
    if values.is_empty() || values.iter().any(String::is_empty) {
        return Err(format!("sweep '{spec}' has empty values"));
    }
    match param {
        "iterations" | "gamma" | "seed" => {
            for v in &values {
                v.parse::<u64>().map_err(|_| format!("sweep value '{v}' is not an integer"))?;
            }
        }
        "epsilon" | "alpha" | "beta" => {
            for v in &values {
                v.parse::<f64>().map_err(|_| format!("sweep value '{v}' is not a number"))?;
            }
        }
        other => return Err(format!("unknown sweep parameter '{other}'")),
    }
    Ok((param.to_string(), values))
}

fn apply_sweep(base: &Config, param: &str, value: &str) -> Config {
    let mut config = *base;
    match param {
        "iterations" => config.iterations = value.parse().unwrap(),
        "gamma" => config.gamma = value.parse().unwrap(),
        "seed" => config.seed = value.parse().unwrap(),
        "epsilon" => config.epsilon = value.parse().unwrap(),
        "alpha" => config.alpha = value.parse().unwrap(),
        "beta" => config.beta = value.parse().unwrap(),
        _ => unreachable!("sweep parameter validated earlier"),
    }
    config
}

fn cmd_bench(args: &BenchArgs) -> i32 {
    let base = match args.config.to_config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_FLAGS;
        }
    };
    let (param, values) = match parse_sweep(&args.sweep) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_FLAGS;
        }
    };
    const DATASET_EXTENSIONS: [&str; 6] = ["tsv", "txt", "csv", "edges", "el", "konect"];
    let mut files: Vec<PathBuf> = match std::fs::read_dir(&args.dir) {
        Ok(entries) => entries
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| {
                p.is_file()
                    && p.extension()
                        .and_then(|e| e.to_str())
                        .is_some_and(|e| DATASET_EXTENSIONS.contains(&e))
            })
            .collect(),
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.dir.display());
            return EXIT_IO;
        }
    };
    files.sort();
    if files.is_empty() {
        eprintln!("error: {} contains no dataset files", args.dir.display());
        return EXIT_FLAGS;
    }

    let mut rows: Vec<(String, usize, String)> = Vec::new();
    let mut failures = 0usize;
    for file in &files {
        let dataset = file
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| file.display().to_string());
        let g = match load_graph(file, &args.format) {
            Ok(g) => g,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        for (value_index, value) in values.iter().enumerate() {
            let config = apply_sweep(&base, &param, value);
            if let Err(e) = config.validate() {
                eprintln!("error: {dataset}: {e}");
                failures += 1;
                continue;
            }
            let started = Instant::now();
            match run(&g, &config) {
                Ok(result) => {
                    let time_s = started.elapsed().as_secs_f64();
                    rows.push((
                        dataset.clone(),
                        value_index,
                        format!(
                            "{dataset},{param},{value},{:.6},{:.6},{},{},{:.3}",
                            result.final_metrics.pos_in,
                            result.final_metrics.neg_out,
                            result.split_count,
                            result.assignment.cluster_count(),
                            time_s
                        ),
                    ));
                }
                Err(e) => {
                    eprintln!("error: {dataset}: {e}");
                    failures += 1;
                }
            }
        }
    }
    rows.sort();
    let mut body = String::from("dataset,param,value,pos_in,neg_out,splits,clusters,time_s\n");
    for (_, _, row) in &rows {
        body.push_str(row);
        body.push('\n');
    }
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, body) {
                eprintln!("error: writing {}: {e}", path.display());
                return EXIT_IO;
            }
        }
        None => print!("{body}"),
    }
    if failures > 0 {
        eprintln!("{failures} run(s) failed");
        EXIT_IO
    } else {
        0
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Cluster(args) => cmd_cluster(args),
        Command::Metrics(args) => cmd_metrics(args),
        Command::VerifyDuality(args) => cmd_verify_duality(args),
        Command::Bench(args) => cmd_bench(args),
    };
    std::process::exit(code);
}
