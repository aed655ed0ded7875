//! Check the communication-cost ordering that separates exact solving from
//! the heuristic regime.
//!
//! ```bash
//! cargo run --example assumption_check
//! ```

use offload::datagen::{generate, GenConfig};
use offload::{check_assumption, solve, DEFAULT_EPS};

fn main() {
    // Ratio (ee:ec:ce:cc) = 3:5:4:2 keeps same-side costs below cross-side
    // costs on every edge; 8:5:6:7 puts the intra-cloud cost above a
    // cross-side cost and breaks the ordering.
    for ratio in [[3.0, 5.0, 4.0, 2.0], [8.0, 5.0, 6.0, 7.0]] {
        let cfg = GenConfig {
            nodes: 30,
            edges: 90,
            ratio: Some(ratio),
            seed: 11,
            ..GenConfig::default()
        };
        let graph = generate(&cfg).unwrap();
        let report = check_assumption(&graph);
        let result = solve(&graph, DEFAULT_EPS);

        println!("ratio {ratio:?}");
        println!("  holds_weak:   {}", report.holds_weak);
        println!("  holds_strong: {}", report.holds_strong);
        println!("  violations:   {}", report.violations.len());
        if let Some(v) = report.violations.first() {
            println!("  first violation: edge {} fails {:?}", v.edge, v.kind);
        }
        println!(
            "  total cost {}, certified optimal: {}",
            result.total_cost, result.optimal_certified
        );
        println!();
    }
}
