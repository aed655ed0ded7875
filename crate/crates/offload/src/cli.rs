//! Command-line surface: `solve`, `bench`, `gen`, `reduce`, `validate`.
//!
//! Exit codes: 0 success, 1 IO/schema/config errors, 2 min-cut guard
//! (instance not homogeneous), 3 instance too large for exhaustive
//! enumeration, 4 validation failure, 64 usage errors.

use crate::bench::{run_suite, Algorithm, SuiteConfig};
use crate::datagen::{generate, GenConfig};
use crate::io::{instance_to_json, load_instance, read_edge_list_file, save_instance};
use crate::oracle::{export_ilp, OracleError};
use crate::reductions::{maxcut_to_offloading, validate_lemma2, CutInstance, ReductionError};
use crate::solver::DEFAULT_EPS;
use clap::{Parser, Subcommand};
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NOT_APPLICABLE: i32 = 2;
pub const EXIT_TOO_LARGE: i32 = 3;
pub const EXIT_VALIDATION_FAILED: i32 = 4;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser)]
#[command(
    name = "offload",
    version,
    about = "Edge-cloud task offloading optimizer and benchmark harness"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance file and print a one-line summary
    Solve {
        /// Instance JSON file
        #[arg(long)]
        instance: PathBuf,
        /// Algorithm to run
        #[arg(long, value_enum)]
        algo: Algorithm,
        /// Termination tolerance of the min-norm-point loop
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
        /// Write the full result JSON here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a benchmark suite config and write a CSV
    Bench {
        /// Suite config JSON file
        #[arg(long)]
        suite: PathBuf,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
        /// Report wall_time_ms as 0 for byte-stable golden files
        #[arg(long)]
        no_timing: bool,
    },
    /// Generate a seeded random instance file
    Gen {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        edges: usize,
        /// Communication cost ratio A:B:C:D for (ee, ec, ce, cc)
        #[arg(long)]
        ratio: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Uniform range LO:HI for computation costs
        #[arg(long, default_value = "1:10")]
        comp_range: String,
        /// Uniform range LO:HI for communication costs
        #[arg(long, default_value = "1:10")]
        comm_range: String,
        /// Fraction of nodes pinned to the edge side
        #[arg(long, default_value_t = 0.0)]
        pin_fraction: f64,
        /// Draw same-side costs below cross-side costs (no ratio mode)
        #[arg(long)]
        enforce_assumption: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Instance construction from other problems
    Reduce {
        #[command(subcommand)]
        what: ReduceCommand,
    },
    /// Exhaustive self-checks
    Validate {
        #[command(subcommand)]
        what: ValidateCommand,
    },
    /// Export the instance's 0/1 integer program in LP format
    ExportIlp {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum ReduceCommand {
    /// Build the symmetric offloading instance of a MAX-CUT decision problem
    Maxcut {
        /// Undirected edge list ("u v" per line, '#' comments)
        #[arg(long)]
        graph: PathBuf,
        /// Target cut size
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum ValidateCommand {
    /// Check the reduction identities on a small graph by double brute force
    Lemma2 {
        #[arg(long)]
        graph: PathBuf,
    },
}

/// Parses "lo:hi" into a range pair.
fn parse_range(text: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 2 {
        return Err(format!("expected LO:HI, got '{text}'"));
    }
    let lo = parts[0]
        .parse::<f64>()
        .map_err(|e| format!("bad range bound '{}': {e}", parts[0]))?;
    let hi = parts[1]
        .parse::<f64>()
        .map_err(|e| format!("bad range bound '{}': {e}", parts[1]))?;
    Ok((lo, hi))
}

/// Parses "a:b:c:d" into a ratio array.
fn parse_ratio(text: &str) -> Result<[f64; 4], String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 4 {
        return Err(format!("expected A:B:C:D, got '{text}'"));
    }
    let mut r = [0.0; 4];
    for (i, p) in parts.iter().enumerate() {
        r[i] = p
            .parse::<f64>()
            .map_err(|e| format!("bad ratio component '{p}': {e}"))?;
    }
    Ok(r)
}

fn worker_threads() -> usize {
    let available = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    match std::env::var("OFFLOAD_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        Some(cap) if cap >= 1 => available.min(cap),
        _ => available,
    }
}

macro_rules! fail {
    ($code:expr, $($arg:tt)*) => {{
        eprintln!($($arg)*);
        return $code;
    }};
}

/// Parses arguments and dispatches. Returns the process exit code; never
/// panics on user errors.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Solve {
            instance,
            algo,
            eps,
            out,
        } => cmd_solve(&instance, algo, eps, out.as_deref()),
        Command::Bench {
            suite,
            out,
            no_timing,
        } => cmd_bench(&suite, &out, no_timing),
        Command::Gen {
            nodes,
            edges,
            ratio,
            seed,
            comp_range,
            comm_range,
            pin_fraction,
            enforce_assumption,
            out,
        } => cmd_gen(
            nodes,
            edges,
            ratio,
            seed,
            &comp_range,
            &comm_range,
            pin_fraction,
            enforce_assumption,
            &out,
        ),
        Command::Reduce { what } => match what {
            ReduceCommand::Maxcut { graph, k, out } => cmd_reduce_maxcut(&graph, k, &out),
        },
        Command::Validate { what } => match what {
            ValidateCommand::Lemma2 { graph } => cmd_validate_lemma2(&graph),
        },
        Command::ExportIlp { instance, out } => cmd_export_ilp(&instance, &out),
    }
}

fn cmd_solve(
    instance: &std::path::Path,
    algo: Algorithm,
    eps: f64,
    out: Option<&std::path::Path>,
) -> i32 {
    let g = match load_instance(instance) {
        Ok(g) => g,
        Err(e) => fail!(EXIT_ERROR, "failed to load instance: {e}"),
    };
    let result = match crate::bench::run_algorithm(&g, algo, eps) {
        Ok(r) => r,
        Err(status) if status == "not_applicable" => {
            fail!(
                EXIT_NOT_APPLICABLE,
                "{}: instance is not homogeneous, min-cut transform does not apply",
                algo.name()
            )
        }
        Err(status) if status == "ground_set_too_large" => {
            fail!(
                EXIT_TOO_LARGE,
                "{}: ground set exceeds the enumeration limit",
                algo.name()
            )
        }
        Err(status) => fail!(EXIT_ERROR, "{}: {status}", algo.name()),
    };
    if let Some(path) = out {
        let json = match serde_json::to_string_pretty(&result) {
            Ok(j) => j,
            Err(e) => fail!(EXIT_ERROR, "failed to serialize result: {e}"),
        };
        if let Err(e) = std::fs::write(path, json + "\n") {
            fail!(EXIT_ERROR, "failed to write {}: {e}", path.display());
        }
    }
    println!(
        "{} total={} certified={} time_ms={:.3}",
        algo.name(),
        result.total_cost,
        result.optimal_certified,
        result.stats.wall_time_ms
    );
    EXIT_OK
}

fn cmd_bench(suite: &std::path::Path, out: &std::path::Path, no_timing: bool) -> i32 {
    let text = match std::fs::read_to_string(suite) {
        Ok(t) => t,
        Err(e) => fail!(EXIT_ERROR, "failed to read suite config: {e}"),
    };
    let cfg: SuiteConfig = match serde_json::from_str(&text) {
        Ok(c) => c,
        Err(e) => fail!(EXIT_ERROR, "bad suite config: {e}"),
    };
    let outcome = run_suite(&cfg, worker_threads(), no_timing);
    if let Err(e) = std::fs::write(out, &outcome.csv) {
        fail!(EXIT_ERROR, "failed to write {}: {e}", out.display());
    }
    println!(
        "bench rows={} failures={} out={}",
        outcome.rows,
        outcome.failures,
        out.display()
    );
    if outcome.rows > 0 && outcome.failures == outcome.rows {
        return EXIT_ERROR;
    }
    EXIT_OK
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen(
    nodes: usize,
    edges: usize,
    ratio: Option<String>,
    seed: u64,
    comp_range: &str,
    comm_range: &str,
    pin_fraction: f64,
    enforce_assumption: bool,
    out: &std::path::Path,
) -> i32 {
    let ratio = match ratio.as_deref().map(parse_ratio).transpose() {
        Ok(r) => r,
        Err(e) => fail!(EXIT_USAGE, "{e}"),
    };
    let comp_range = match parse_range(comp_range) {
        Ok(r) => r,
        Err(e) => fail!(EXIT_USAGE, "{e}"),
    };
    let comm_range = match parse_range(comm_range) {
        Ok(r) => r,
        Err(e) => fail!(EXIT_USAGE, "{e}"),
    };
    let cfg = GenConfig {
        nodes,
        edges,
        ratio,
        comp_range,
        comm_range,
        seed,
        enforce_assumption,
        pin_fraction,
        transfer_range: None,
    };
    let g = match generate(&cfg) {
        Ok(g) => g,
        Err(e) => fail!(EXIT_ERROR, "generation failed: {e}"),
    };
    if let Err(e) = save_instance(&g, out) {
        fail!(EXIT_ERROR, "failed to write {}: {e}", out.display());
    }
    let report = crate::model::check_assumption(&g);
    println!(
        "gen n={} m={} seed={} assumption_strong={} out={}",
        g.node_count(),
        g.edge_count(),
        seed,
        report.holds_strong,
        out.display()
    );
    EXIT_OK
}

fn cmd_reduce_maxcut(graph: &std::path::Path, k: usize, out: &std::path::Path) -> i32 {
    let pairs = match read_edge_list_file(graph) {
        Ok(p) => p,
        Err(e) => fail!(EXIT_ERROR, "failed to read graph: {e}"),
    };
    let cut = match CutInstance::from_pairs(&pairs, k) {
        Ok(c) => c,
        Err(e) => fail!(EXIT_ERROR, "bad MAX-CUT instance: {e}"),
    };
    let (g, threshold) = match maxcut_to_offloading(&cut) {
        Ok(r) => r,
        Err(e) => fail!(EXIT_ERROR, "reduction failed: {e}"),
    };
    let mut doc = instance_to_json(&g);
    doc.as_object_mut().unwrap().insert(
        "meta".to_string(),
        serde_json::json!({ "reduction": "maxcut", "k": k, "m": cut.edge_count(), "threshold": threshold }),
    );
    let rendered = serde_json::to_string_pretty(&doc).expect("instance documents serialize");
    if let Err(e) = std::fs::write(out, rendered + "\n") {
        fail!(EXIT_ERROR, "failed to write {}: {e}", out.display());
    }
    println!(
        "reduce maxcut n={} m={} k={} threshold={} out={}",
        cut.n,
        cut.edge_count(),
        k,
        threshold,
        out.display()
    );
    EXIT_OK
}

fn cmd_validate_lemma2(graph: &std::path::Path) -> i32 {
    let pairs = match read_edge_list_file(graph) {
        Ok(p) => p,
        Err(e) => fail!(EXIT_ERROR, "failed to read graph: {e}"),
    };
    let cut = match CutInstance::from_pairs(&pairs, 0) {
        Ok(c) => c,
        Err(e) => fail!(EXIT_ERROR, "bad graph: {e}"),
    };
    let report = match validate_lemma2(&cut) {
        Ok(r) => r,
        Err(ReductionError::SizeGuard { what }) => {
            fail!(EXIT_TOO_LARGE, "instance too large: {what}")
        }
        Err(ReductionError::Oracle(OracleError::GroundSetTooLarge { size, limit })) => {
            fail!(
                EXIT_TOO_LARGE,
                "ground set of size {size} exceeds limit {limit}"
            )
        }
        Err(e) => fail!(EXIT_ERROR, "validation failed to run: {e}"),
    };
    println!(
        "lemma2 n={} m={} max_cut={} offloading_opt={} expected={} decision_mismatches={}",
        report.vertices,
        report.edges,
        report.max_cut,
        report.offloading_optimum,
        report.expected_optimum,
        report.decision_mismatches.len()
    );
    if report.pass() {
        println!("PASS");
        EXIT_OK
    } else {
        println!("FAIL");
        EXIT_VALIDATION_FAILED
    }
}

fn cmd_export_ilp(instance: &std::path::Path, out: &std::path::Path) -> i32 {
    let g = match load_instance(instance) {
        Ok(g) => g,
        Err(e) => fail!(EXIT_ERROR, "failed to load instance: {e}"),
    };
    if let Err(e) = export_ilp(&g, out) {
        fail!(EXIT_ERROR, "failed to export: {e}");
    }
    println!(
        "export-ilp n={} m={} out={}",
        g.node_count(),
        g.edge_count(),
        out.display()
    );
    EXIT_OK
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("1:10").unwrap(), (1.0, 10.0));
        assert!(parse_range("1").is_err());
        assert!(parse_range("a:b").is_err());
    }

    #[test]
    fn ratio_parsing() {
        assert_eq!(parse_ratio("3:5:4:2").unwrap(), [3.0, 5.0, 4.0, 2.0]);
        assert!(parse_ratio("3:5:4").is_err());
    }
}
