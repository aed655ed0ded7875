//! Reduce MAX-CUT decision problems to offloading instances and validate
//! the cost identity by double brute force.
//!
//! ```bash
//! cargo run --example maxcut_reduction
//! ```

use offload::reductions::{
    decide_offloading, decision_threshold, maxcut_to_offloading, validate_lemma2, CutInstance,
};

fn main() {
    // The triangle: 3 edges, maximum cut 2.
    let triangle = CutInstance::new(3, vec![(0, 1), (0, 2), (1, 2)], 2).unwrap();
    let (graph, threshold) = maxcut_to_offloading(&triangle).unwrap();

    println!(
        "triangle reduction: {} tasks, {} edges",
        graph.node_count(),
        graph.edge_count()
    );
    println!("edge cost tuple: {:?}", graph.edges()[0].cost.as_array());
    println!("decision threshold for k=2: {threshold}");
    println!(
        "cut of size 2 exists: {}",
        decide_offloading(&graph, threshold).unwrap()
    );
    let t3 = decision_threshold(3, 3);
    println!(
        "cut of size 3 exists: {} (threshold {t3})",
        decide_offloading(&graph, t3).unwrap()
    );
    println!();

    // Full validation sweeps every target k and checks the optimum formula.
    for (name, cut) in [
        ("triangle", triangle),
        (
            "path",
            CutInstance::new(3, vec![(0, 1), (1, 2)], 0).unwrap(),
        ),
        (
            "k4",
            CutInstance::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], 0).unwrap(),
        ),
    ] {
        let report = validate_lemma2(&cut).unwrap();
        println!(
            "{name}: max_cut={} offloading_opt={} expected={} -> {}",
            report.max_cut,
            report.offloading_optimum,
            report.expected_optimum,
            if report.pass() { "PASS" } else { "FAIL" }
        );
    }
}
