//! Generate seeded random instances and round-trip them through the JSON
//! schema.
//!
//! ```bash
//! cargo run --example generate_and_save
//! ```

use offload::check_assumption;
use offload::datagen::{generate, GenConfig};
use offload::io::{load_instance, save_instance};

fn main() {
    let cfg = GenConfig {
        nodes: 12,
        edges: 30,
        ratio: Some([3.0, 5.0, 4.0, 2.0]),
        comp_range: (1.0, 10.0),
        comm_range: (1.0, 10.0),
        seed: 42,
        pin_fraction: 0.25,
        ..GenConfig::default()
    };
    let graph = generate(&cfg).unwrap();
    println!(
        "generated '{}': {} nodes ({} pinned to edge), {} edges, strong ordering: {}",
        graph.name(),
        graph.node_count(),
        graph.pinned_edge_nodes().len(),
        graph.edge_count(),
        check_assumption(&graph).holds_strong
    );

    let dir = std::env::temp_dir();
    let path = dir.join("offload_example_instance.json");
    save_instance(&graph, &path).unwrap();
    println!("saved to {}", path.display());

    let back = load_instance(&path).unwrap();
    println!("round trip identical: {}", back == graph);

    // The same seed always regenerates the same instance.
    let again = generate(&cfg).unwrap();
    println!("regeneration identical: {}", again == graph);
}
