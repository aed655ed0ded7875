//! Export an instance's 0/1 integer program in LP format for an external
//! solver (CPLEX, Gurobi, HiGHS, SCIP) to cross-check the optimizer.
//!
//! ```bash
//! cargo run --example export_lp
//! ```

use offload::bench::brute_force_solve;
use offload::oracle::write_ilp;
use offload::{EdgeCost, NodeCost, Pin, TaskGraph};

fn main() {
    let graph = TaskGraph::build(
        "lp-demo",
        vec![
            NodeCost::new(2.0, 1.0),
            NodeCost::new(3.0, 2.0),
            NodeCost::new(1.0, 4.0),
        ],
        vec![
            (0, 1, EdgeCost::new(1.0, 4.0, 5.0, 0.0)),
            (1, 2, EdgeCost::new(0.5, 2.0, 3.0, 0.5)),
        ],
        vec![Pin::Free, Pin::Free, Pin::Edge],
    )
    .unwrap();

    let mut buf = Vec::new();
    write_ilp(&graph, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    println!("{text}");

    let exact = brute_force_solve(&graph).unwrap();
    println!(
        "\\ an external ILP solver should reproduce the optimum {}",
        exact.total_cost
    );
}
