//! Run a small benchmark suite in-process and print the CSV.
//!
//! ```bash
//! cargo run --release --example bench_suite
//! ```

use offload::bench::{run_suite, Algorithm, GeneratorGroup, SuiteConfig};
use offload::solver::DEFAULT_EPS;

fn main() {
    let suite = SuiteConfig {
        algorithms: vec![Algorithm::Sma, Algorithm::Greedy, Algorithm::Brute],
        repetitions: 2,
        eps: DEFAULT_EPS,
        generators: vec![
            GeneratorGroup {
                name: "assumption-ok".into(),
                nodes: 12,
                edges: 36,
                ratio: Some([3.0, 5.0, 4.0, 2.0]),
                comp_range: (1.0, 10.0),
                comm_range: (1.0, 10.0),
                enforce_assumption: false,
                pin_fraction: 0.0,
                transfer_range: None,
                seeds: vec![1, 2, 3, 4, 5],
            },
            GeneratorGroup {
                name: "assumption-violated".into(),
                nodes: 12,
                edges: 36,
                ratio: Some([8.0, 5.0, 6.0, 7.0]),
                comp_range: (1.0, 10.0),
                comm_range: (1.0, 10.0),
                enforce_assumption: false,
                pin_fraction: 0.0,
                transfer_range: None,
                seeds: vec![1, 2, 3, 4, 5],
            },
        ],
        files: vec![],
    };

    let threads = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    let outcome = run_suite(&suite, threads, false);
    print!("{}", outcome.csv);
    eprintln!(
        "\n{} rows, {} failures; the :mean rows aggregate each group.",
        outcome.rows, outcome.failures
    );
}
