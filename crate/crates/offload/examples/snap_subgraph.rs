//! Load a SNAP-style edge list, induce a subgraph on the first nodes seen,
//! synthesize costs, and solve it.
//!
//! ```bash
//! cargo run --example snap_subgraph
//! ```

use offload::datagen::GenConfig;
use offload::io::load_snap;
use offload::{solve, DEFAULT_EPS};

fn main() {
    // A miniature edge list in the usual '#'-comment, pair-per-line format.
    // Real inputs would be files like ego-Facebook from the SNAP collection.
    let edge_list = "\
# tiny social graph
0 1
0 2
1 2
2 3
3 4
4 0
4 5
5 6
6 3
7 0
";
    let dir = std::env::temp_dir();
    let path = dir.join("offload_example_snap.txt");
    std::fs::write(&path, edge_list).unwrap();

    let cfg = GenConfig {
        ratio: Some([3.0, 5.0, 4.0, 2.0]),
        comp_range: (1.0, 10.0),
        comm_range: (1.0, 10.0),
        seed: 7,
        ..GenConfig::default()
    };

    for take in [8, 5] {
        let graph = load_snap(&path, take, &cfg).unwrap();
        let result = solve(&graph, DEFAULT_EPS);
        println!(
            "take {take}: '{}' has {} nodes / {} induced edges -> cloud {:?}, total {:.4}",
            graph.name(),
            graph.node_count(),
            graph.edge_count(),
            result.cloud_set,
            result.total_cost
        );
    }
}
