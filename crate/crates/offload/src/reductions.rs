//! Constructive MAX-CUT → offloading reduction and its empirical validator.
//!
//! A MAX-CUT instance with `m` edges maps to a symmetric offloading
//! instance: zero computation costs and edge costs `(m, 1, 1, m)`. A cut
//! with `q` crossing edges then costs exactly `m(m−q) + q`, which decreases
//! in `q`, so the offloading optimum sits at the maximum cut and a cut of
//! size at least `k` exists iff some partition costs at most `m(m−k) + k`.
//! This is the hardness witness: the reduced instances violate the
//! communication-cost ordering on purpose.

use crate::model::{EdgeCost, NodeCost, TaskGraph};
use crate::oracle::{brute_force, OracleError};
use serde::Serialize;
use thiserror::Error;

/// An undirected MAX-CUT decision instance: is there a cut with at least `k`
/// crossing edges?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutInstance {
    pub n: usize,
    /// Simple undirected edges, canonicalized to (low, high).
    pub edges: Vec<(usize, usize)>,
    pub k: usize,
}

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error("reduction needs at least one edge")]
    EmptyGraph,
    #[error("self-loop ({0},{0}) is not allowed")]
    SelfLoop(usize),
    #[error("vertex {index} out of range (graph has {n} vertices)")]
    VertexOutOfRange { index: usize, n: usize },
    #[error("target cut size {k} exceeds the edge count {m}")]
    TargetTooLarge { k: usize, m: usize },
    #[error("instance too large for exhaustive validation: {what}")]
    SizeGuard { what: String },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

impl CutInstance {
    /// Validates and canonicalizes: endpoints in range, no self-loops,
    /// duplicate edges collapsed.
    pub fn new(n: usize, edges: Vec<(usize, usize)>, k: usize) -> Result<Self, ReductionError> {
        let mut canonical: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u == v {
                return Err(ReductionError::SelfLoop(u));
            }
            for w in [u, v] {
                if w >= n {
                    return Err(ReductionError::VertexOutOfRange { index: w, n });
                }
            }
            canonical.push((u.min(v), u.max(v)));
        }
        canonical.sort_unstable();
        canonical.dedup();
        if k > canonical.len() {
            return Err(ReductionError::TargetTooLarge {
                k,
                m: canonical.len(),
            });
        }
        Ok(Self {
            n,
            edges: canonical,
            k,
        })
    }

    /// Builds an instance from raw id pairs (e.g. an edge-list file),
    /// remapping ids densely in first-seen order.
    pub fn from_pairs(pairs: &[(u64, u64)], k: usize) -> Result<Self, ReductionError> {
        let mut index = std::collections::HashMap::new();
        let mut next = 0usize;
        let mut edges = Vec::with_capacity(pairs.len());
        for &(u, v) in pairs {
            let mut id = |raw: u64| -> usize {
                *index.entry(raw).or_insert_with(|| {
                    let i = next;
                    next += 1;
                    i
                })
            };
            let (a, b) = (id(u), id(v));
            edges.push((a, b));
        }
        Self::new(next, edges, k)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Exhaustive maximum cut value. Exponential in `n`; callers guard size.
    pub fn max_cut_brute_force(&self) -> usize {
        let mut best = 0usize;
        for mask in 0u32..(1u32 << self.n) {
            let cut = self
                .edges
                .iter()
                .filter(|&&(u, v)| (mask >> u & 1) != (mask >> v & 1))
                .count();
            best = best.max(cut);
        }
        best
    }
}

/// Maps a MAX-CUT instance to a symmetric offloading instance and the
/// decision threshold `m(m−k) + k`.
///
/// One zero-cost free task per vertex; one directed edge per undirected edge
/// (low index → high) with cost `(m, 1, 1, m)`.
pub fn maxcut_to_offloading(c: &CutInstance) -> Result<(TaskGraph, f64), ReductionError> {
    let m = c.edge_count();
    if m == 0 {
        return Err(ReductionError::EmptyGraph);
    }
    let mf = m as f64;
    let cost = EdgeCost::new(mf, 1.0, 1.0, mf);
    let nodes = vec![NodeCost::new(0.0, 0.0); c.n];
    let raw_edges: Vec<(usize, usize, EdgeCost)> =
        c.edges.iter().map(|&(u, v)| (u, v, cost)).collect();
    let g = TaskGraph::build(format!("maxcut-n{}-m{}", c.n, m), nodes, raw_edges, vec![])
        .expect("reduction instances are valid");
    let threshold = decision_threshold(m, c.k);
    Ok((g, threshold))
}

/// The decision threshold `m(m−k) + k`.
pub fn decision_threshold(m: usize, k: usize) -> f64 {
    let (m, k) = (m as f64, k as f64);
    m * (m - k) + k
}

/// True iff some feasible partition of `g` costs at most `threshold`
/// (established by exhaustive enumeration; ground sets above 24 are
/// rejected).
pub fn decide_offloading(g: &TaskGraph, threshold: f64) -> Result<bool, OracleError> {
    Ok(brute_force(g)?.best_total <= threshold + 1e-9)
}

/// Outcome of cross-checking the reduction: the reduced instance's exact
/// optimum must equal `m(m−q*) + q*` at the exact maximum cut `q*`, and the
/// threshold decision must agree with MAX-CUT feasibility for every target.
#[derive(Debug, Clone, Serialize)]
pub struct Lemma2Report {
    pub vertices: usize,
    pub edges: usize,
    pub max_cut: usize,
    pub offloading_optimum: f64,
    pub expected_optimum: f64,
    pub equality_holds: bool,
    /// Targets `k` where the threshold decision disagreed with `q* >= k`.
    pub decision_mismatches: Vec<usize>,
}

impl Lemma2Report {
    pub fn pass(&self) -> bool {
        self.equality_holds && self.decision_mismatches.is_empty()
    }
}

/// Exhaustively validates the reduction on a small instance (n ≤ 16,
/// m ≤ 24).
pub fn validate_lemma2(c: &CutInstance) -> Result<Lemma2Report, ReductionError> {
    let m = c.edge_count();
    if c.n > 16 {
        return Err(ReductionError::SizeGuard {
            what: format!("{} vertices (max 16)", c.n),
        });
    }
    if m > 24 {
        return Err(ReductionError::SizeGuard {
            what: format!("{m} edges (max 24)"),
        });
    }
    let (g, _) = maxcut_to_offloading(c)?;

    let q_star = c.max_cut_brute_force();
    let offloading_optimum = brute_force(&g)?.best_total;
    let expected_optimum = decision_threshold(m, q_star);
    let equality_holds = (offloading_optimum - expected_optimum).abs() <= 1e-9;

    let mut decision_mismatches = Vec::new();
    for k in 0..=m {
        let decided = decide_offloading(&g, decision_threshold(m, k))?;
        if decided != (q_star >= k) {
            decision_mismatches.push(k);
        }
    }

    Ok(Lemma2Report {
        vertices: c.n,
        edges: m,
        max_cut: q_star,
        offloading_optimum,
        expected_optimum,
        equality_holds,
        decision_mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::check_assumption;

    pub(crate) fn triangle(k: usize) -> CutInstance {
        CutInstance::new(3, vec![(0, 1), (0, 2), (1, 2)], k).unwrap()
    }

    #[test]
    fn triangle_reduction_costs_and_threshold() {
        let (g, threshold) = maxcut_to_offloading(&triangle(2)).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 3);
        for e in g.edges() {
            assert_eq!(e.cost, EdgeCost::new(3.0, 1.0, 1.0, 3.0));
        }
        assert_eq!(threshold, 5.0); // 3·(3−2)+2
    }

    #[test]
    fn single_edge_threshold() {
        let c = CutInstance::new(2, vec![(0, 1)], 1).unwrap();
        let (_, threshold) = maxcut_to_offloading(&c).unwrap();
        assert_eq!(threshold, 1.0);
    }

    #[test]
    fn triangle_k3_is_infeasible() {
        let c = triangle(3);
        assert_eq!(c.max_cut_brute_force(), 2);
        let (g, threshold) = maxcut_to_offloading(&c).unwrap();
        assert_eq!(threshold, 3.0);
        assert!(!decide_offloading(&g, threshold).unwrap());
    }

    #[test]
    fn triangle_decisions() {
        let (g, _) = maxcut_to_offloading(&triangle(2)).unwrap();
        assert!(decide_offloading(&g, 5.0).unwrap());
        assert!(!decide_offloading(&g, 4.5).unwrap());
    }

    #[test]
    fn empty_graph_rejected() {
        let c = CutInstance::new(1, vec![], 0).unwrap();
        assert!(matches!(
            maxcut_to_offloading(&c),
            Err(ReductionError::EmptyGraph)
        ));
    }

    #[test]
    fn self_loop_rejected() {
        assert!(matches!(
            CutInstance::new(2, vec![(1, 1)], 0),
            Err(ReductionError::SelfLoop(1))
        ));
    }

    #[test]
    fn duplicate_edges_collapse() {
        let c = CutInstance::new(2, vec![(0, 1), (1, 0), (0, 1)], 1).unwrap();
        assert_eq!(c.edge_count(), 1);
    }

    #[test]
    fn validate_triangle() {
        let r = validate_lemma2(&triangle(2)).unwrap();
        assert_eq!(r.max_cut, 2);
        assert_eq!(r.offloading_optimum, 5.0);
        assert!(r.pass());
    }

    #[test]
    fn validate_two_edge_path() {
        // Bipartite: every edge can be cut, so the optimum is m(m−m)+m = 2.
        let c = CutInstance::new(3, vec![(0, 1), (1, 2)], 0).unwrap();
        let r = validate_lemma2(&c).unwrap();
        assert_eq!(r.max_cut, 2);
        assert_eq!(r.offloading_optimum, 2.0);
        assert!(r.pass());
    }

    #[test]
    fn reduced_instances_are_symmetric_and_violate_the_assumption() {
        let (g, _) = maxcut_to_offloading(&triangle(2)).unwrap();
        for e in g.edges() {
            assert_eq!(e.cost.ec, e.cost.ce);
            assert_eq!(e.cost.ee, e.cost.cc);
        }
        let rep = check_assumption(&g);
        assert!(!rep.holds_weak);
        assert!(!rep.holds_strong);
    }

    #[test]
    fn every_multi_edge_reduction_violates_the_assumption() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        for _ in 0..25 {
            let n = rng.random_range(3..9usize);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.random_bool(0.5) {
                        edges.push((u, v));
                    }
                }
            }
            if edges.len() < 2 {
                continue;
            }
            let c = CutInstance::new(n, edges, 0).unwrap();
            let (g, _) = maxcut_to_offloading(&c).unwrap();
            let rep = check_assumption(&g);
            assert!(
                !rep.holds_weak && !rep.holds_strong,
                "m = {}",
                c.edge_count()
            );
        }
    }

    #[test]
    fn validator_rejects_edgeless_graphs() {
        let c = CutInstance::new(1, vec![], 0).unwrap();
        assert!(matches!(
            validate_lemma2(&c),
            Err(ReductionError::EmptyGraph)
        ));
    }

    #[test]
    fn single_edge_reduction_degenerately_satisfies_the_assumption() {
        // m = 1 makes every cost equal; the ordering holds with ties.
        let c = CutInstance::new(2, vec![(0, 1)], 1).unwrap();
        let (g, _) = maxcut_to_offloading(&c).unwrap();
        assert!(check_assumption(&g).holds_strong);
        let r = validate_lemma2(&c).unwrap();
        assert!(r.pass());
    }

    #[test]
    fn size_guards() {
        let c = CutInstance::new(17, vec![(0, 1)], 0).unwrap();
        assert!(matches!(
            validate_lemma2(&c),
            Err(ReductionError::SizeGuard { .. })
        ));
    }

    #[test]
    fn from_pairs_remaps_ids() {
        let c = CutInstance::from_pairs(&[(100, 7), (7, 42)], 1).unwrap();
        assert_eq!(c.n, 3);
        assert_eq!(c.edge_count(), 2);
    }
}
