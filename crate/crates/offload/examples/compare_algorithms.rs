//! Run every algorithm on the same instances and compare costs and runtime.
//!
//! ```bash
//! cargo run --release --example compare_algorithms
//! ```

use offload::baselines::{greedy_local_search, mincut_applicable, solve_mincut};
use offload::bench::brute_force_solve;
use offload::datagen::{generate, GenConfig};
use offload::{solve, DEFAULT_EPS};

fn main() {
    // A homogeneous instance (min-cut applies) and an asymmetric one (it
    // does not).
    let homogeneous = GenConfig {
        nodes: 14,
        edges: 40,
        ratio: Some([1.0, 3.0, 3.0, 1.0]),
        seed: 3,
        ..GenConfig::default()
    };
    let asymmetric = GenConfig {
        nodes: 14,
        edges: 40,
        ratio: Some([3.0, 5.0, 4.0, 2.0]),
        seed: 3,
        ..GenConfig::default()
    };

    for (label, cfg) in [
        ("homogeneous 1:3:3:1", homogeneous),
        ("asymmetric 3:5:4:2", asymmetric),
    ] {
        let graph = generate(&cfg).unwrap();
        println!(
            "== {label} (n={}, m={})",
            graph.node_count(),
            graph.edge_count()
        );

        let sma = solve(&graph, DEFAULT_EPS);
        println!(
            "  sma    total={:<10.4} certified={} ({:.3} ms)",
            sma.total_cost, sma.optimal_certified, sma.stats.wall_time_ms
        );

        let greedy = greedy_local_search(&graph);
        println!(
            "  greedy total={:<10.4} flips={} ({:.3} ms)",
            greedy.total_cost, greedy.stats.major_cycles, greedy.stats.wall_time_ms
        );

        if mincut_applicable(&graph) {
            let mc = solve_mincut(&graph).unwrap();
            println!(
                "  mincut total={:<10.4} ({:.3} ms)",
                mc.total_cost, mc.stats.wall_time_ms
            );
        } else {
            println!("  mincut not applicable (communication costs are not homogeneous)");
        }

        let brute = brute_force_solve(&graph).unwrap();
        println!(
            "  brute  total={:<10.4} over {} subsets ({:.3} ms)",
            brute.total_cost, brute.stats.oracle_calls, brute.stats.wall_time_ms
        );
        println!();
    }
}
