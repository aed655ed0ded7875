//! Shared fixtures for unit tests.

use crate::model::{EdgeCost, NodeCost, Pin, TaskGraph};

/// Two free nodes w0=(2,1), w1=(3,2), edge 0->1 with cost (1,4,5,0).
/// Brute-force optimum: cloud = {0,1}, F = -3, total 3.
pub(crate) fn two_node_graph() -> TaskGraph {
    TaskGraph::build(
        "two-node",
        vec![NodeCost::new(2.0, 1.0), NodeCost::new(3.0, 2.0)],
        vec![(0, 1, EdgeCost::new(1.0, 4.0, 5.0, 0.0))],
        vec![],
    )
    .unwrap()
}

/// Same instance with node 1 pinned to the edge side.
pub(crate) fn two_node_graph_pinned() -> TaskGraph {
    TaskGraph::build(
        "two-node-pinned",
        vec![NodeCost::new(2.0, 1.0), NodeCost::new(3.0, 2.0)],
        vec![(0, 1, EdgeCost::new(1.0, 4.0, 5.0, 0.0))],
        vec![Pin::Free, Pin::Edge],
    )
    .unwrap()
}

/// Homogeneous two-node instance: edge (0,2,2,0). Optimum cloud = {0,1},
/// total 3.
pub(crate) fn homogeneous_two_node_graph() -> TaskGraph {
    TaskGraph::build(
        "homogeneous",
        vec![NodeCost::new(2.0, 1.0), NodeCost::new(3.0, 2.0)],
        vec![(0, 1, EdgeCost::new(0.0, 2.0, 2.0, 0.0))],
        vec![],
    )
    .unwrap()
}

/// Isolated free node with w = (5, 3); offloading it saves 2.
pub(crate) fn isolated_node_graph() -> TaskGraph {
    TaskGraph::build("isolated", vec![NodeCost::new(5.0, 3.0)], vec![], vec![]).unwrap()
}

/// Instance whose marginals are all nonnegative (cloud much more expensive),
/// so the empty cloud set is optimal.
pub(crate) fn cloud_hostile_graph() -> TaskGraph {
    TaskGraph::build(
        "cloud-hostile",
        vec![
            NodeCost::new(1.0, 50.0),
            NodeCost::new(2.0, 60.0),
            NodeCost::new(1.5, 55.0),
        ],
        vec![
            (0, 1, EdgeCost::new(1.0, 3.0, 3.0, 1.0)),
            (1, 2, EdgeCost::new(1.0, 2.0, 4.0, 0.5)),
        ],
        vec![],
    )
    .unwrap()
}
