//! Domain types for offloading instances and solutions.
//!
//! A [`TaskGraph`] is a directed multigraph of tasks. Every node carries a
//! pair of computation costs (edge-side, cloud-side) plus a transfer cost
//! charged on edge-side execution; every directed edge carries four
//! communication costs, one per (source side, target side) combination.
//! Nodes may be pinned to a side, either explicitly or by an infinite
//! computation cost on the other side.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Per-node cost tuple. `w_edge`/`w_cloud` are the computation costs on the
/// respective side; `transfer` is charged on top of `w_edge` whenever the
/// task executes edge-side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodeCost {
    pub w_edge: f64,
    pub w_cloud: f64,
    pub transfer: f64,
}

impl NodeCost {
    pub fn new(w_edge: f64, w_cloud: f64) -> Self {
        Self {
            w_edge,
            w_cloud,
            transfer: 0.0,
        }
    }

    pub fn with_transfer(w_edge: f64, w_cloud: f64, transfer: f64) -> Self {
        Self {
            w_edge,
            w_cloud,
            transfer,
        }
    }
}

/// Communication cost of one directed edge, split by the sides its endpoints
/// run on: `ee` = both edge, `ec` = source edge / target cloud, `ce` = source
/// cloud / target edge, `cc` = both cloud.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeCost {
    pub ee: f64,
    pub ec: f64,
    pub ce: f64,
    pub cc: f64,
}

impl EdgeCost {
    pub fn new(ee: f64, ec: f64, ce: f64, cc: f64) -> Self {
        Self { ee, ec, ce, cc }
    }

    /// Component selected by the sides of (source, target).
    pub fn select(&self, src_cloud: bool, dst_cloud: bool) -> f64 {
        match (src_cloud, dst_cloud) {
            (false, false) => self.ee,
            (false, true) => self.ec,
            (true, false) => self.ce,
            (true, true) => self.cc,
        }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.ee, self.ec, self.ce, self.cc]
    }

    fn componentwise_add(&mut self, other: &EdgeCost) {
        self.ee += other.ee;
        self.ec += other.ec;
        self.ce += other.ce;
        self.cc += other.cc;
    }
}

/// Side constraint of a task.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pin {
    Free,
    /// Must run on an edge server (latency-constrained tasks).
    Edge,
    /// Must run in the cloud.
    Cloud,
}

/// One directed communication requirement between two tasks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TaskEdge {
    pub src: usize,
    pub dst: usize,
    pub cost: EdgeCost,
}

/// Errors raised while constructing a [`TaskGraph`].
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("node index {index} out of range (graph has {len} nodes)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("negative or NaN cost on {what}")]
    NegativeCost { what: String },
    #[error("infinite cost on {what} (only w_edge/w_cloud may be infinite)")]
    NonFiniteCost { what: String },
    #[error("node {node}: both computation costs are infinite")]
    BothComputationCostsInfinite { node: usize },
    #[error("node {node}: infinite computation cost contradicts explicit pin")]
    PinConflict { node: usize },
}

/// Immutable, normalized offloading instance.
///
/// Construction drops self-loops, merges parallel edges by componentwise sum
/// and converts infinite computation costs into pins, so all stored costs are
/// finite. Adjacency lists are materialized for O(degree) marginal queries.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskGraph {
    name: String,
    nodes: Vec<NodeCost>,
    edges: Vec<TaskEdge>,
    pins: Vec<Pin>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
}

impl TaskGraph {
    /// Builds a normalized task graph from raw parts.
    ///
    /// `pins` may be shorter than `nodes`; missing entries default to
    /// [`Pin::Free`]. A node with `w_cloud = +inf` becomes [`Pin::Edge`] and
    /// vice versa; the infinity is replaced by `0.0` so later arithmetic
    /// stays finite (the pin makes the value unreachable).
    pub fn build(
        name: impl Into<String>,
        nodes: Vec<NodeCost>,
        raw_edges: Vec<(usize, usize, EdgeCost)>,
        pins: Vec<Pin>,
    ) -> Result<TaskGraph, ModelError> {
        let n = nodes.len();
        let mut nodes = nodes;
        let mut pins = pins;
        if pins.len() > n {
            return Err(ModelError::IndexOutOfRange {
                index: pins.len() - 1,
                len: n,
            });
        }
        pins.resize(n, Pin::Free);

        for (i, w) in nodes.iter_mut().enumerate() {
            if w.w_edge.is_nan() || w.w_edge < 0.0 {
                return Err(ModelError::NegativeCost {
                    what: format!("node {i} w_edge"),
                });
            }
            if w.w_cloud.is_nan() || w.w_cloud < 0.0 {
                return Err(ModelError::NegativeCost {
                    what: format!("node {i} w_cloud"),
                });
            }
            if !w.transfer.is_finite() || w.transfer < 0.0 {
                if w.transfer.is_infinite() {
                    return Err(ModelError::NonFiniteCost {
                        what: format!("node {i} transfer"),
                    });
                }
                return Err(ModelError::NegativeCost {
                    what: format!("node {i} transfer"),
                });
            }
            if w.w_edge.is_infinite() && w.w_cloud.is_infinite() {
                return Err(ModelError::BothComputationCostsInfinite { node: i });
            }
            if w.w_cloud.is_infinite() {
                if pins[i] == Pin::Cloud {
                    return Err(ModelError::PinConflict { node: i });
                }
                pins[i] = Pin::Edge;
                w.w_cloud = 0.0;
            }
            if w.w_edge.is_infinite() {
                if pins[i] == Pin::Edge {
                    return Err(ModelError::PinConflict { node: i });
                }
                pins[i] = Pin::Cloud;
                w.w_edge = 0.0;
            }
        }

        // Merge parallel edges (componentwise sum), drop self-loops, keep
        // first-occurrence order for determinism.
        let mut edges: Vec<TaskEdge> = Vec::new();
        let mut slot: std::collections::HashMap<(usize, usize), usize> =
            std::collections::HashMap::new();
        for (src, dst, cost) in raw_edges {
            if src >= n {
                return Err(ModelError::IndexOutOfRange { index: src, len: n });
            }
            if dst >= n {
                return Err(ModelError::IndexOutOfRange { index: dst, len: n });
            }
            for (k, c) in [
                ("ee", cost.ee),
                ("ec", cost.ec),
                ("ce", cost.ce),
                ("cc", cost.cc),
            ] {
                if c.is_nan() || c < 0.0 {
                    return Err(ModelError::NegativeCost {
                        what: format!("edge ({src},{dst}) l_{k}"),
                    });
                }
                if c.is_infinite() {
                    return Err(ModelError::NonFiniteCost {
                        what: format!("edge ({src},{dst}) l_{k}"),
                    });
                }
            }
            if src == dst {
                continue;
            }
            match slot.entry((src, dst)) {
                std::collections::hash_map::Entry::Occupied(e) => {
                    edges[*e.get()].cost.componentwise_add(&cost);
                }
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(edges.len());
                    edges.push(TaskEdge { src, dst, cost });
                }
            }
        }

        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges = vec![Vec::new(); n];
        for (idx, e) in edges.iter().enumerate() {
            out_edges[e.src].push(idx);
            in_edges[e.dst].push(idx);
        }

        Ok(TaskGraph {
            name: name.into(),
            nodes,
            edges,
            pins,
            out_edges,
            in_edges,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn node(&self, i: usize) -> &NodeCost {
        &self.nodes[i]
    }

    pub fn nodes(&self) -> &[NodeCost] {
        &self.nodes
    }

    pub fn edges(&self) -> &[TaskEdge] {
        &self.edges
    }

    pub fn pin(&self, i: usize) -> Pin {
        self.pins[i]
    }

    pub fn pins(&self) -> &[Pin] {
        &self.pins
    }

    /// Edge indices leaving node `i`.
    pub fn out_edges(&self, i: usize) -> &[usize] {
        &self.out_edges[i]
    }

    /// Edge indices entering node `i`.
    pub fn in_edges(&self, i: usize) -> &[usize] {
        &self.in_edges[i]
    }

    /// Nodes without a pin, in index order. This is the ground set the
    /// optimizer works over.
    pub fn free_nodes(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| self.pins[i] == Pin::Free)
            .collect()
    }

    pub fn pinned_cloud_nodes(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| self.pins[i] == Pin::Cloud)
            .collect()
    }

    pub fn pinned_edge_nodes(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| self.pins[i] == Pin::Edge)
            .collect()
    }

    /// Sum of every node and edge cost component. Used as a finite stand-in
    /// for infinity when encoding pins in flow networks.
    pub fn total_cost_mass(&self) -> f64 {
        let node_sum: f64 = self
            .nodes
            .iter()
            .map(|w| w.w_edge + w.w_cloud + w.transfer)
            .sum();
        let edge_sum: f64 = self
            .edges
            .iter()
            .map(|e| e.cost.ee + e.cost.ec + e.cost.ce + e.cost.cc)
            .sum();
        node_sum + edge_sum
    }
}

/// Assignment of every task to a side; stores the cloud side, the edge side
/// is the complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    is_cloud: Vec<bool>,
}

impl Partition {
    /// All tasks on the edge side.
    pub fn all_edge(n: usize) -> Self {
        Self {
            is_cloud: vec![false; n],
        }
    }

    /// Partition with the given nodes in the cloud.
    pub fn from_cloud_set(
        n: usize,
        cloud: impl IntoIterator<Item = usize>,
    ) -> Result<Self, ModelError> {
        let mut is_cloud = vec![false; n];
        for i in cloud {
            if i >= n {
                return Err(ModelError::IndexOutOfRange { index: i, len: n });
            }
            is_cloud[i] = true;
        }
        Ok(Self { is_cloud })
    }

    pub fn len(&self) -> usize {
        self.is_cloud.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_cloud.is_empty()
    }

    pub fn is_cloud(&self, i: usize) -> bool {
        self.is_cloud[i]
    }

    pub fn set_cloud(&mut self, i: usize, cloud: bool) {
        self.is_cloud[i] = cloud;
    }

    /// Cloud-side node indices in ascending order.
    pub fn cloud_set(&self) -> Vec<usize> {
        (0..self.is_cloud.len())
            .filter(|&i| self.is_cloud[i])
            .collect()
    }

    /// True when no pinned node sits on the wrong side.
    pub fn respects_pins(&self, g: &TaskGraph) -> bool {
        self.is_cloud.len() == g.node_count()
            && (0..self.is_cloud.len()).all(|i| match g.pin(i) {
                Pin::Free => true,
                Pin::Edge => !self.is_cloud[i],
                Pin::Cloud => self.is_cloud[i],
            })
    }
}

/// Which of the four per-edge communication inequalities failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AssumptionViolationKind {
    /// l_cc > l_ec
    IntraCloudExceedsEdgeToCloud,
    /// l_cc > l_ce
    IntraCloudExceedsCloudToEdge,
    /// l_ee > l_ec
    IntraEdgeExceedsEdgeToCloud,
    /// l_ee > l_ce
    IntraEdgeExceedsCloudToEdge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AssumptionViolation {
    /// Index into `TaskGraph::edges`.
    pub edge: usize,
    pub kind: AssumptionViolationKind,
}

/// Result of checking the communication-cost ordering of an instance.
///
/// `holds_weak` requires the intra-cloud cost of every edge to be bounded by
/// both cross-side costs. `holds_strong` additionally bounds the intra-edge
/// cost the same way; it is the condition under which the minimizer returned
/// by the solver is certified globally optimal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionReport {
    pub holds_weak: bool,
    pub holds_strong: bool,
    pub violations: Vec<AssumptionViolation>,
}

/// Checks the per-edge communication-cost inequalities and lists every
/// failing (edge, inequality) pair.
pub fn check_assumption(g: &TaskGraph) -> AssumptionReport {
    use AssumptionViolationKind::*;
    let mut violations = Vec::new();
    let mut holds_weak = true;
    let mut holds_strong = true;
    for (idx, e) in g.edges().iter().enumerate() {
        let c = &e.cost;
        if c.cc > c.ec {
            holds_weak = false;
            violations.push(AssumptionViolation {
                edge: idx,
                kind: IntraCloudExceedsEdgeToCloud,
            });
        }
        if c.cc > c.ce {
            holds_weak = false;
            violations.push(AssumptionViolation {
                edge: idx,
                kind: IntraCloudExceedsCloudToEdge,
            });
        }
        if c.ee > c.ec {
            holds_strong = false;
            violations.push(AssumptionViolation {
                edge: idx,
                kind: IntraEdgeExceedsEdgeToCloud,
            });
        }
        if c.ee > c.ce {
            holds_strong = false;
            violations.push(AssumptionViolation {
                edge: idx,
                kind: IntraEdgeExceedsCloudToEdge,
            });
        }
    }
    holds_strong = holds_strong && holds_weak;
    AssumptionReport {
        holds_weak,
        holds_strong,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cost(ee: f64, ec: f64, ce: f64, cc: f64) -> EdgeCost {
        EdgeCost::new(ee, ec, ce, cc)
    }

    #[test]
    fn minimal_instance_is_valid() {
        let g = TaskGraph::build("one", vec![NodeCost::new(5.0, 3.0)], vec![], vec![]).unwrap();
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.free_nodes(), vec![0]);
    }

    #[test]
    fn infinite_cloud_cost_becomes_edge_pin() {
        let g = TaskGraph::build(
            "pinned",
            vec![NodeCost::new(4.0, f64::INFINITY)],
            vec![],
            vec![],
        )
        .unwrap();
        assert_eq!(g.pin(0), Pin::Edge);
        assert!(g.node(0).w_cloud.is_finite());
    }

    #[test]
    fn infinite_edge_cost_becomes_cloud_pin() {
        let g = TaskGraph::build(
            "pinned",
            vec![NodeCost::new(f64::INFINITY, 4.0)],
            vec![],
            vec![],
        )
        .unwrap();
        assert_eq!(g.pin(0), Pin::Cloud);
    }

    #[test]
    fn parallel_edges_merge_by_sum() {
        let g = TaskGraph::build(
            "par",
            vec![NodeCost::new(1.0, 1.0), NodeCost::new(1.0, 1.0)],
            vec![
                (0, 1, cost(1.0, 2.0, 2.0, 1.0)),
                (0, 1, cost(1.0, 2.0, 2.0, 1.0)),
            ],
            vec![],
        )
        .unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edges()[0].cost, cost(2.0, 4.0, 4.0, 2.0));
    }

    #[test]
    fn self_loops_are_dropped() {
        let g = TaskGraph::build(
            "loop",
            vec![NodeCost::new(1.0, 1.0)],
            vec![(0, 0, cost(1.0, 1.0, 1.0, 1.0))],
            vec![],
        )
        .unwrap();
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn both_infinite_costs_rejected() {
        let err = TaskGraph::build(
            "bad",
            vec![NodeCost::new(f64::INFINITY, f64::INFINITY)],
            vec![],
            vec![],
        )
        .unwrap_err();
        assert_eq!(err, ModelError::BothComputationCostsInfinite { node: 0 });
    }

    #[test]
    fn negative_cost_rejected() {
        let err =
            TaskGraph::build("bad", vec![NodeCost::new(-1.0, 0.0)], vec![], vec![]).unwrap_err();
        assert!(matches!(err, ModelError::NegativeCost { .. }));
    }

    #[test]
    fn out_of_range_edge_rejected() {
        let err = TaskGraph::build(
            "bad",
            vec![NodeCost::new(1.0, 1.0)],
            vec![(0, 3, cost(0.0, 0.0, 0.0, 0.0))],
            vec![],
        )
        .unwrap_err();
        assert_eq!(err, ModelError::IndexOutOfRange { index: 3, len: 1 });
    }

    #[test]
    fn pin_conflict_rejected() {
        let err = TaskGraph::build(
            "bad",
            vec![NodeCost::new(4.0, f64::INFINITY)],
            vec![],
            vec![Pin::Cloud],
        )
        .unwrap_err();
        assert_eq!(err, ModelError::PinConflict { node: 0 });
    }

    #[test]
    fn pinned_and_free_sets_partition_the_nodes() {
        let g = TaskGraph::build(
            "mix",
            vec![
                NodeCost::new(1.0, 2.0),
                NodeCost::new(1.0, f64::INFINITY),
                NodeCost::new(f64::INFINITY, 2.0),
                NodeCost::new(3.0, 4.0),
            ],
            vec![],
            vec![Pin::Free, Pin::Free, Pin::Free, Pin::Edge],
        )
        .unwrap();
        let free = g.free_nodes();
        let pe = g.pinned_edge_nodes();
        let pc = g.pinned_cloud_nodes();
        let mut all: Vec<usize> = free.iter().chain(&pe).chain(&pc).copied().collect();
        all.sort_unstable();
        assert_eq!(all, vec![0, 1, 2, 3]);
        assert_eq!(free, vec![0]);
        assert_eq!(pe, vec![1, 3]);
        assert_eq!(pc, vec![2]);
    }

    #[test]
    fn assumption_holds_with_ties() {
        let g = TaskGraph::build(
            "ties",
            vec![NodeCost::new(1.0, 1.0), NodeCost::new(1.0, 1.0)],
            vec![(0, 1, cost(5.0, 5.0, 5.0, 2.0))],
            vec![],
        )
        .unwrap();
        let rep = check_assumption(&g);
        assert!(rep.holds_weak);
        assert!(rep.holds_strong);
        assert!(rep.violations.is_empty());
    }

    #[test]
    fn assumption_example_holds() {
        let g = TaskGraph::build(
            "ok",
            vec![NodeCost::new(1.0, 1.0), NodeCost::new(1.0, 1.0)],
            vec![(0, 1, cost(1.0, 4.0, 5.0, 0.0))],
            vec![],
        )
        .unwrap();
        let rep = check_assumption(&g);
        assert!(rep.holds_weak && rep.holds_strong);
    }

    #[test]
    fn symmetric_reduction_edge_fails_fourfold() {
        // (m, 1, 1, m) with m = 3: every inequality fails.
        let g = TaskGraph::build(
            "sym",
            vec![NodeCost::new(0.0, 0.0), NodeCost::new(0.0, 0.0)],
            vec![(0, 1, cost(3.0, 1.0, 1.0, 3.0))],
            vec![],
        )
        .unwrap();
        let rep = check_assumption(&g);
        assert!(!rep.holds_weak);
        assert!(!rep.holds_strong);
        assert_eq!(rep.violations.len(), 4);
    }

    #[test]
    fn strong_implies_weak() {
        let g = TaskGraph::build(
            "w",
            vec![NodeCost::new(0.0, 0.0), NodeCost::new(0.0, 0.0)],
            // weak ok (cc small), strong violated (ee large)
            vec![(0, 1, cost(9.0, 4.0, 5.0, 0.0))],
            vec![],
        )
        .unwrap();
        let rep = check_assumption(&g);
        assert!(rep.holds_weak);
        assert!(!rep.holds_strong);
        assert_eq!(rep.violations.len(), 2);
    }

    #[test]
    fn partition_pin_check() {
        let g = TaskGraph::build(
            "pins",
            vec![NodeCost::new(1.0, 1.0), NodeCost::new(1.0, 1.0)],
            vec![],
            vec![Pin::Edge, Pin::Cloud],
        )
        .unwrap();
        let good = Partition::from_cloud_set(2, [1]).unwrap();
        assert!(good.respects_pins(&g));
        let bad = Partition::from_cloud_set(2, [0, 1]).unwrap();
        assert!(!bad.respects_pins(&g));
    }
}
