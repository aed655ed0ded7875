//! Benchmark harness: runs algorithm/instance/repetition grids described by
//! a suite config and emits one CSV row per run plus per-group mean rows.
//!
//! Rows are computed on a small worker pool (capped by `OFFLOAD_THREADS`)
//! and written in the deterministic (instance, algorithm, repetition)
//! order, so a fixed suite and `--no-timing` produce byte-identical CSV.

use crate::baselines::{greedy_local_search, solve_mincut, BaselineError};
use crate::datagen::{generate, GenConfig};
use crate::io::load_instance;
use crate::model::{check_assumption, TaskGraph};
use crate::oracle::{brute_force, OracleError};
use crate::solver::{solve, SolveResult, SolveStats, DEFAULT_EPS};
use serde::Deserialize;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

pub const CSV_HEADER: &str =
    "instance,n,m,algorithm,total_cost,f_min,wall_time_ms,assumption_strong,certified,seed,status";

/// The algorithms the harness (and the `solve` command) can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Min-norm-point submodular minimization.
    Sma,
    /// Best-improvement local search.
    Greedy,
    /// s-t min-cut transform (homogeneous instances only).
    Mincut,
    /// Exhaustive enumeration (ground set ≤ 24).
    Brute,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Sma => "sma",
            Algorithm::Greedy => "greedy",
            Algorithm::Mincut => "mincut",
            Algorithm::Brute => "brute",
        }
    }
}

/// Runs one algorithm on one instance. Failures come back as a status
/// string so harness rows can record them without aborting the suite.
pub fn run_algorithm(g: &TaskGraph, algo: Algorithm, eps: f64) -> Result<SolveResult, String> {
    match algo {
        Algorithm::Sma => Ok(solve(g, eps)),
        Algorithm::Greedy => Ok(greedy_local_search(g)),
        Algorithm::Mincut => solve_mincut(g).map_err(|e| match e {
            BaselineError::NotApplicable => "not_applicable".to_string(),
            BaselineError::FlowCutMismatch { .. } => format!("error: {e}"),
        }),
        Algorithm::Brute => brute_force_solve(g).map_err(|e| match e {
            OracleError::GroundSetTooLarge { .. } => "ground_set_too_large".to_string(),
            other => format!("error: {other}"),
        }),
    }
}

/// Exhaustive enumeration packaged as a [`SolveResult`].
pub fn brute_force_solve(g: &TaskGraph) -> Result<SolveResult, OracleError> {
    let start = std::time::Instant::now();
    let r = brute_force(g)?;
    let mut partition = crate::model::Partition::all_edge(g.node_count());
    for v in g.pinned_cloud_nodes() {
        partition.set_cloud(v, true);
    }
    for &v in &r.best_set {
        partition.set_cloud(v, true);
    }
    Ok(SolveResult {
        cloud_set: partition.cloud_set(),
        f_min: r.best_f,
        total_cost: r.best_total,
        assumption: check_assumption(g),
        optimal_certified: true,
        stats: SolveStats {
            major_cycles: 0,
            minor_cycles: 0,
            oracle_calls: r.subsets_evaluated as usize,
            wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
            hit_iteration_limit: false,
        },
        partition,
    })
}

fn default_repetitions() -> usize {
    1
}

fn default_eps() -> f64 {
    DEFAULT_EPS
}

/// One family of generated instances: the same shape across several seeds.
#[derive(Debug, Clone, Deserialize)]
pub struct GeneratorGroup {
    pub name: String,
    pub nodes: usize,
    pub edges: usize,
    #[serde(default)]
    pub ratio: Option<[f64; 4]>,
    #[serde(default = "default_range")]
    pub comp_range: (f64, f64),
    #[serde(default = "default_range")]
    pub comm_range: (f64, f64),
    #[serde(default)]
    pub enforce_assumption: bool,
    #[serde(default)]
    pub pin_fraction: f64,
    #[serde(default)]
    pub transfer_range: Option<(f64, f64)>,
    pub seeds: Vec<u64>,
}

fn default_range() -> (f64, f64) {
    (1.0, 10.0)
}

impl GeneratorGroup {
    fn config(&self, seed: u64) -> GenConfig {
        GenConfig {
            nodes: self.nodes,
            edges: self.edges,
            ratio: self.ratio,
            comp_range: self.comp_range,
            comm_range: self.comm_range,
            seed,
            enforce_assumption: self.enforce_assumption,
            pin_fraction: self.pin_fraction,
            transfer_range: self.transfer_range,
        }
    }
}

/// Suite description: which instances, which algorithms, how many
/// repetitions.
#[derive(Debug, Clone, Deserialize)]
pub struct SuiteConfig {
    pub algorithms: Vec<Algorithm>,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default)]
    pub generators: Vec<GeneratorGroup>,
    #[serde(default)]
    pub files: Vec<PathBuf>,
}

/// One CSV row.
#[derive(Debug, Clone)]
pub struct BenchRecord {
    pub group: String,
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub algorithm: String,
    pub total_cost: Option<f64>,
    pub f_min: Option<f64>,
    pub wall_time_ms: f64,
    pub assumption_strong: bool,
    pub certified: bool,
    pub seed: Option<u64>,
    pub status: String,
}

impl BenchRecord {
    fn csv_row(&self, no_timing: bool) -> String {
        let opt = |v: Option<f64>| v.map(|x| format!("{x}")).unwrap_or_default();
        let time = if no_timing {
            "0".to_string()
        } else {
            format!("{:.3}", self.wall_time_ms)
        };
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.instance,
            self.n,
            self.m,
            self.algorithm,
            opt(self.total_cost),
            opt(self.f_min),
            time,
            self.assumption_strong,
            self.certified,
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
            self.status
        )
    }
}

struct Job {
    group: String,
    instance_name: String,
    seed: Option<u64>,
    graph: Option<std::sync::Arc<TaskGraph>>,
    load_error: Option<String>,
    algo: Algorithm,
}

/// Result of running a suite.
pub struct SuiteOutcome {
    pub csv: String,
    pub rows: usize,
    pub failures: usize,
}

/// Runs a suite on up to `threads` workers and renders the CSV.
pub fn run_suite(cfg: &SuiteConfig, threads: usize, no_timing: bool) -> SuiteOutcome {
    let mut jobs: Vec<Job> = Vec::new();

    for group in &cfg.generators {
        for &seed in &group.seeds {
            let name = format!("{}-s{}", group.name, seed);
            let (graph, load_error) = match generate(&group.config(seed)) {
                Ok(mut g) => {
                    g.set_name(name.clone());
                    (Some(std::sync::Arc::new(g)), None)
                }
                Err(e) => (None, Some(format!("error: {e}"))),
            };
            for &algo in &cfg.algorithms {
                for _ in 0..cfg.repetitions.max(1) {
                    jobs.push(Job {
                        group: group.name.clone(),
                        instance_name: name.clone(),
                        seed: Some(seed),
                        graph: graph.clone(),
                        load_error: load_error.clone(),
                        algo,
                    });
                }
            }
        }
    }
    for file in &cfg.files {
        let (graph, load_error, name) = match load_instance(file) {
            Ok(g) => {
                let name = g.name().to_string();
                (Some(std::sync::Arc::new(g)), None, name)
            }
            Err(e) => (
                None,
                Some(format!("error: {e}")),
                file.display().to_string(),
            ),
        };
        for &algo in &cfg.algorithms {
            for _ in 0..cfg.repetitions.max(1) {
                jobs.push(Job {
                    group: "files".to_string(),
                    instance_name: name.clone(),
                    seed: None,
                    graph: graph.clone(),
                    load_error: load_error.clone(),
                    algo,
                });
            }
        }
    }

    let records = run_jobs(&jobs, cfg.eps, threads);

    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    let mut failures = 0usize;
    for r in &records {
        if r.status != "ok" {
            failures += 1;
        }
        csv.push_str(&r.csv_row(no_timing));
        csv.push('\n');
    }

    // Per-(group, algorithm) means over successful rows, appended in config
    // order with a ":mean" algorithm suffix.
    let mut group_order: Vec<String> = cfg.generators.iter().map(|g| g.name.clone()).collect();
    if !cfg.files.is_empty() {
        group_order.push("files".to_string());
    }
    for group in &group_order {
        for algo in &cfg.algorithms {
            let ok_rows: Vec<&BenchRecord> = records
                .iter()
                .filter(|r| &r.group == group && r.algorithm == algo.name() && r.status == "ok")
                .collect();
            if ok_rows.is_empty() {
                continue;
            }
            let count = ok_rows.len() as f64;
            let mean =
                |f: &dyn Fn(&BenchRecord) -> f64| ok_rows.iter().map(|r| f(r)).sum::<f64>() / count;
            let frac = |f: &dyn Fn(&BenchRecord) -> bool| {
                ok_rows.iter().filter(|r| f(r)).count() as f64 / count
            };
            let time = if no_timing {
                "0".to_string()
            } else {
                format!("{:.3}", mean(&|r| r.wall_time_ms))
            };
            csv.push_str(&format!(
                "{},{},{},{}:mean,{},{},{},{},{},,mean\n",
                group,
                mean(&|r| r.n as f64),
                mean(&|r| r.m as f64),
                algo.name(),
                mean(&|r| r.total_cost.unwrap()),
                mean(&|r| r.f_min.unwrap()),
                time,
                frac(&|r| r.assumption_strong),
                frac(&|r| r.certified),
            ));
        }
    }

    SuiteOutcome {
        csv,
        rows: records.len(),
        failures,
    }
}

fn run_jobs(jobs: &[Job], eps: f64, threads: usize) -> Vec<BenchRecord> {
    let slots: Mutex<Vec<Option<BenchRecord>>> = Mutex::new(vec![None; jobs.len()]);
    let next: AtomicUsize = AtomicUsize::new(0);
    let workers = threads.max(1).min(jobs.len().max(1));

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= jobs.len() {
                    break;
                }
                let record = run_one(&jobs[idx], eps);
                slots.lock().unwrap()[idx] = Some(record);
            });
        }
    });

    slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("every job produces a record"))
        .collect()
}

fn run_one(job: &Job, eps: f64) -> BenchRecord {
    let base = BenchRecord {
        group: job.group.clone(),
        instance: job.instance_name.clone(),
        n: 0,
        m: 0,
        algorithm: job.algo.name().to_string(),
        total_cost: None,
        f_min: None,
        wall_time_ms: 0.0,
        assumption_strong: false,
        certified: false,
        seed: job.seed,
        status: String::new(),
    };
    let graph = match (&job.graph, &job.load_error) {
        (Some(g), _) => g,
        (None, Some(err)) => {
            return BenchRecord {
                status: err.clone(),
                ..base
            }
        }
        (None, None) => unreachable!("job without graph or error"),
    };
    let assumption_strong = check_assumption(graph).holds_strong;
    let base = BenchRecord {
        n: graph.node_count(),
        m: graph.edge_count(),
        assumption_strong,
        ..base
    };
    match run_algorithm(graph, job.algo, eps) {
        Ok(res) => BenchRecord {
            total_cost: Some(res.total_cost),
            f_min: Some(res.f_min),
            wall_time_ms: res.stats.wall_time_ms,
            certified: res.optimal_certified,
            status: "ok".to_string(),
            ..base
        },
        Err(status) => BenchRecord { status, ..base },
    }
}
