//! Cost evaluation: total service cost of a partition, and the normalized
//! cost-increment objective the solver minimizes.
//!
//! For a partition with cloud set `Y`, the total cost is
//!
//! ```text
//! C(Y) = sum_{v edge} (w_edge(v) + transfer(v)) + sum_{v cloud} w_cloud(v)
//!      + sum_{(i,j)} l(side(i), side(j))
//! ```
//!
//! The objective `F(X) = C(X ∪ pinned_cloud) − C(pinned_cloud)` is defined
//! over the free nodes only; `F(∅) = 0` by construction, and moving one node
//! changes `F` by an amount computable from its incident edges alone, which
//! is what makes the greedy linear oracle cheap.

use crate::model::{Partition, Pin, TaskGraph};
use serde::Serialize;
use thiserror::Error;

/// Absolute slack used in float comparisons throughout the crate.
pub const TOL_ABS: f64 = 1e-6;
/// Relative slack used in float comparisons throughout the crate.
pub const TOL_REL: f64 = 1e-9;

/// `a` and `b` agree within the crate-wide mixed absolute/relative tolerance.
pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL_ABS + TOL_REL * a.abs().max(b.abs())
}

/// Total cost split into its buckets. `total` is always the sum of the four
/// parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostBreakdown {
    pub comp: f64,
    pub comm_inter: f64,
    pub comm_intra_edge: f64,
    pub comm_intra_cloud: f64,
    pub total: f64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CostError {
    #[error("partition places a pinned node on the wrong side")]
    PinViolation,
    #[error("node {0} is not in the ground set")]
    NotInGroundSet(usize),
    #[error("node {0} is already in the set")]
    AlreadyInSet(usize),
}

/// Evaluates the total service cost of `p`, bucketed by cost source.
///
/// Fails with [`CostError::PinViolation`] when `p` puts a pinned node on the
/// wrong side.
pub fn total_cost(g: &TaskGraph, p: &Partition) -> Result<CostBreakdown, CostError> {
    if !p.respects_pins(g) {
        return Err(CostError::PinViolation);
    }
    Ok(total_cost_unchecked(g, |i| p.is_cloud(i)))
}

fn total_cost_unchecked(g: &TaskGraph, is_cloud: impl Fn(usize) -> bool) -> CostBreakdown {
    let mut comp = 0.0;
    for i in 0..g.node_count() {
        let w = g.node(i);
        comp += if is_cloud(i) {
            w.w_cloud
        } else {
            w.w_edge + w.transfer
        };
    }
    let mut inter = 0.0;
    let mut intra_edge = 0.0;
    let mut intra_cloud = 0.0;
    for e in g.edges() {
        let c = e.cost.select(is_cloud(e.src), is_cloud(e.dst));
        match (is_cloud(e.src), is_cloud(e.dst)) {
            (false, false) => intra_edge += c,
            (true, true) => intra_cloud += c,
            _ => inter += c,
        }
    }
    CostBreakdown {
        comp,
        comm_inter: inter,
        comm_intra_edge: intra_edge,
        comm_intra_cloud: intra_cloud,
        total: comp + inter + intra_edge + intra_cloud,
    }
}

/// The normalized cost-increment objective over the free ground set.
///
/// Pinned-cloud nodes are folded into every evaluation as `base_cloud`;
/// pinned-edge nodes always stay edge-side. All evaluations are pure reads,
/// so one objective can serve many concurrent queries.
#[derive(Debug)]
pub struct OffloadObjective<'a> {
    graph: &'a TaskGraph,
    ground_set: Vec<usize>,
    /// node id -> position in `ground_set`, or None when pinned.
    ground_pos: Vec<Option<usize>>,
    base_cloud: Vec<bool>,
    gamma_empty: f64,
}

impl<'a> OffloadObjective<'a> {
    pub fn new(graph: &'a TaskGraph) -> Self {
        let n = graph.node_count();
        let ground_set = graph.free_nodes();
        let mut ground_pos = vec![None; n];
        for (pos, &v) in ground_set.iter().enumerate() {
            ground_pos[v] = Some(pos);
        }
        let base_cloud: Vec<bool> = (0..n).map(|i| graph.pin(i) == Pin::Cloud).collect();
        let gamma_empty = total_cost_unchecked(graph, |i| base_cloud[i]).total;
        Self {
            graph,
            ground_set,
            ground_pos,
            base_cloud,
            gamma_empty,
        }
    }

    pub fn graph(&self) -> &TaskGraph {
        self.graph
    }

    /// Free nodes in ascending index order.
    pub fn ground_set(&self) -> &[usize] {
        &self.ground_set
    }

    pub fn ground_size(&self) -> usize {
        self.ground_set.len()
    }

    /// Position of node `v` within the ground set.
    pub fn ground_position(&self, v: usize) -> Option<usize> {
        self.ground_pos.get(v).copied().flatten()
    }

    pub fn is_base_cloud(&self, v: usize) -> bool {
        self.base_cloud[v]
    }

    /// Total cost with only the pinned-cloud nodes offloaded.
    pub fn gamma_empty(&self) -> f64 {
        self.gamma_empty
    }

    fn side_lookup(&self, subset: &[usize]) -> Result<Vec<bool>, CostError> {
        let mut is_cloud = self.base_cloud.clone();
        for &v in subset {
            if self.ground_position(v).is_none() {
                return Err(CostError::NotInGroundSet(v));
            }
            is_cloud[v] = true;
        }
        Ok(is_cloud)
    }

    /// Total cost when `subset ∪ pinned_cloud` executes in the cloud.
    pub fn gamma(&self, subset: &[usize]) -> Result<f64, CostError> {
        let is_cloud = self.side_lookup(subset)?;
        Ok(total_cost_unchecked(self.graph, |i| is_cloud[i]).total)
    }

    /// Cost increment of offloading `subset`: `gamma(subset) − gamma(∅)`.
    /// Zero (bit-exact) on the empty set.
    pub fn f_value(&self, subset: &[usize]) -> Result<f64, CostError> {
        Ok(self.gamma(subset)? - self.gamma_empty)
    }

    /// Change of `F` when node `v` moves from edge to cloud, given the
    /// current side of every other node. O(deg(v)).
    ///
    /// `is_cloud` must report the cloud membership of every node other than
    /// `v` (its value at `v` is ignored; `v` is treated as moving).
    pub fn marginal_with(&self, v: usize, is_cloud: impl Fn(usize) -> bool) -> f64 {
        let g = self.graph;
        let w = g.node(v);
        let mut delta = w.w_cloud - w.w_edge - w.transfer;
        for &ei in g.out_edges(v) {
            let e = &g.edges()[ei];
            let c = &e.cost;
            delta += if is_cloud(e.dst) {
                c.cc - c.ec
            } else {
                c.ce - c.ee
            };
        }
        for &ei in g.in_edges(v) {
            let e = &g.edges()[ei];
            let c = &e.cost;
            delta += if is_cloud(e.src) {
                c.cc - c.ce
            } else {
                c.ec - c.ee
            };
        }
        delta
    }

    /// Checked marginal against an explicit subset: `F(A ∪ {v}) − F(A)`.
    pub fn marginal(&self, v: usize, a: &[usize]) -> Result<f64, CostError> {
        if self.ground_position(v).is_none() {
            return Err(CostError::NotInGroundSet(v));
        }
        if a.contains(&v) {
            return Err(CostError::AlreadyInSet(v));
        }
        let is_cloud = self.side_lookup(a)?;
        Ok(self.marginal_with(v, |i| is_cloud[i]))
    }
}
