//! Peek inside the minimum-norm-point solver: the greedy oracle's base
//! vertices, the corral, and minimizer extraction.
//!
//! ```bash
//! cargo run --example solver_internals
//! ```

use offload::cost::OffloadObjective;
use offload::solver::{extract_minimizer, greedy_vertex, min_norm_point, DEFAULT_EPS};
use offload::{EdgeCost, NodeCost, TaskGraph};

fn main() {
    // Two tasks where only joint offloading pays off.
    let graph = TaskGraph::build(
        "internals",
        vec![NodeCost::new(2.0, 1.0), NodeCost::new(3.0, 2.0)],
        vec![(0, 1, EdgeCost::new(1.0, 4.0, 5.0, 0.0))],
        vec![],
    )
    .unwrap();
    let obj = OffloadObjective::new(&graph);

    println!("ground set: {:?}", obj.ground_set());
    println!("F(empty) = {}", obj.f_value(&[]).unwrap());
    println!("F({{0}}) = {}", obj.f_value(&[0]).unwrap());
    println!("F({{1}}) = {}", obj.f_value(&[1]).unwrap());
    println!("F({{0,1}}) = {}", obj.f_value(&[0, 1]).unwrap());
    println!();

    // Each permutation of the ground set generates one base-polytope vertex
    // whose prefix sums are exactly the F values along the chain.
    for perm in [vec![0, 1], vec![1, 0]] {
        let v = greedy_vertex(&obj, &perm);
        println!(
            "greedy vertex for {:?}: {:?} (sums to {})",
            v.perm,
            v.coords,
            v.coords.iter().sum::<f64>()
        );
    }
    println!();

    let state = min_norm_point(&obj, DEFAULT_EPS);
    println!("min-norm point: {:?}", state.point);
    println!(
        "corral size {} with weights {:?}, {} major / {} minor cycles",
        state.corral.len(),
        state.lambdas,
        state.major_cycles,
        state.minor_cycles
    );

    let minimizer = extract_minimizer(&obj, &state);
    println!(
        "extracted minimizer: {:?} with F = {}",
        minimizer,
        obj.f_value(&minimizer).unwrap()
    );
}
