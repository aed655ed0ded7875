//! Latency-constrained offloading: pin real-time tasks to the edge and see
//! how the optimum shifts.
//!
//! ```bash
//! cargo run --example latency_pins
//! ```

use offload::{solve, EdgeCost, NodeCost, Pin, TaskGraph, DEFAULT_EPS};

fn main() {
    let nodes = vec![
        NodeCost::new(6.0, 1.0), // cheap in the cloud
        NodeCost::new(5.0, 1.5),
        NodeCost::new(4.0, 1.0),
        NodeCost::new(3.0, 2.5),
    ];
    let edges = vec![
        (0, 1, EdgeCost::new(1.0, 3.0, 3.0, 0.5)),
        (1, 2, EdgeCost::new(1.0, 4.0, 4.0, 0.5)),
        (2, 3, EdgeCost::new(1.0, 3.0, 3.0, 0.5)),
    ];

    // Unconstrained: everything migrates to the cloud.
    let free = TaskGraph::build("unpinned", nodes.clone(), edges.clone(), vec![]).unwrap();
    let r = solve(&free, DEFAULT_EPS);
    println!("unpinned:  cloud {:?}, total {}", r.cloud_set, r.total_cost);

    // Task 0 is real-time and must stay on the edge; an infinite cloud cost
    // expresses the same constraint for task 2.
    let mut pinned_nodes = nodes;
    pinned_nodes[2] = NodeCost::new(4.0, f64::INFINITY);
    let pins = vec![Pin::Edge, Pin::Free, Pin::Free, Pin::Free];
    let pinned = TaskGraph::build("pinned", pinned_nodes, edges, pins).unwrap();
    println!(
        "pins after construction: {:?} (infinite cloud cost became a pin)",
        pinned.pins()
    );
    let r = solve(&pinned, DEFAULT_EPS);
    println!("pinned:    cloud {:?}, total {}", r.cloud_set, r.total_cost);
    println!("pins respected: {}", r.partition.respects_pins(&pinned));
    println!(
        "still certified optimal over the free tasks: {}",
        r.optimal_certified
    );
}
