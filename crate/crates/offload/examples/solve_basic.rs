//! Build a small task graph by hand and solve it exactly.
//!
//! ```bash
//! cargo run --example solve_basic
//! ```

use offload::{solve, EdgeCost, NodeCost, TaskGraph, DEFAULT_EPS};

fn main() {
    // Five tasks. Node costs are (edge-side, cloud-side); the third field of
    // with_transfer is the overhead charged when the task stays on the edge.
    let nodes = vec![
        NodeCost::new(4.0, 1.5),
        NodeCost::new(2.0, 9.0),
        NodeCost::with_transfer(5.0, 2.0, 0.5),
        NodeCost::new(3.0, 8.0),
        NodeCost::new(6.0, 1.0),
    ];
    // Directed communication requirements with per-side-combination costs
    // (ee, ec, ce, cc). Same-side costs stay below cross-side costs, so the
    // solver's optimality certificate applies.
    let edges = vec![
        (0, 1, EdgeCost::new(1.0, 4.0, 3.0, 0.5)),
        (1, 2, EdgeCost::new(2.0, 5.0, 5.0, 1.0)),
        (2, 3, EdgeCost::new(1.0, 2.5, 3.0, 0.5)),
        (3, 4, EdgeCost::new(0.5, 2.0, 2.0, 0.2)),
        (0, 4, EdgeCost::new(1.5, 3.0, 4.0, 1.0)),
    ];
    let graph = TaskGraph::build("five-tasks", nodes, edges, vec![]).unwrap();

    let result = solve(&graph, DEFAULT_EPS);

    println!(
        "instance: {} ({} tasks, {} edges)",
        graph.name(),
        graph.node_count(),
        graph.edge_count()
    );
    println!("cloud set: {:?}", result.cloud_set);
    println!(
        "edge set:  {:?}",
        (0..graph.node_count())
            .filter(|v| !result.cloud_set.contains(v))
            .collect::<Vec<_>>()
    );
    println!("total cost: {}", result.total_cost);
    println!("cost increment over all-edge: {}", result.f_min);
    println!("certified optimal: {}", result.optimal_certified);
    println!(
        "solver work: {} major cycles, {} oracle calls, {:.3} ms",
        result.stats.major_cycles, result.stats.oracle_calls, result.stats.wall_time_ms
    );
}
