//! Ground-truth solvers for small instances: exhaustive enumeration over the
//! free ground set, and an LP-format export so external ILP solvers can
//! cross-check results.

use crate::cost::OffloadObjective;
use crate::model::TaskGraph;
use std::io::{self, Write};
use std::path::Path;
use thiserror::Error;

/// Hard cap on the ground-set size accepted by [`brute_force`].
pub const BRUTE_FORCE_LIMIT: usize = 24;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("ground set of size {size} exceeds the enumeration limit {limit}")]
    GroundSetTooLarge { size: usize, limit: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Result of exhaustive enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    /// Optimal cloud subset of the ground set, node ids ascending.
    pub best_set: Vec<usize>,
    pub best_f: f64,
    pub best_total: f64,
    pub subsets_evaluated: u64,
}

/// `(f, |S|, S)` ordering used for all oracle tie-breaking.
pub(crate) fn better_candidate(f: f64, set: &[usize], best_f: f64, best_set: &[usize]) -> bool {
    f < best_f || (f == best_f && (set.len(), set) < (best_set.len(), best_set))
}

/// Enumerates every subset of the free ground set in Gray-code order with
/// O(degree) incremental objective updates, and returns the minimizer under
/// the (f, cardinality, lexicographic) tie-break.
pub fn brute_force(g: &TaskGraph) -> Result<OracleResult, OracleError> {
    let obj = OffloadObjective::new(g);
    let k = obj.ground_size();
    if k > BRUTE_FORCE_LIMIT {
        return Err(OracleError::GroundSetTooLarge {
            size: k,
            limit: BRUTE_FORCE_LIMIT,
        });
    }

    let ground = obj.ground_set().to_vec();
    let n = g.node_count();
    let mut in_set = vec![false; n];
    let is_cloud = |in_set: &[bool], u: usize| in_set[u] || obj.is_base_cloud(u);

    let mut f_cur = 0.0f64;
    let mut best_f = 0.0f64;
    let mut best_set: Vec<usize> = Vec::new();

    let total: u64 = 1u64 << k;
    for step in 1..total {
        let j = step.trailing_zeros() as usize;
        let v = ground[j];
        if !in_set[v] {
            let delta = obj.marginal_with(v, |u| is_cloud(&in_set, u));
            in_set[v] = true;
            f_cur += delta;
        } else {
            in_set[v] = false;
            let delta = obj.marginal_with(v, |u| is_cloud(&in_set, u));
            f_cur -= delta;
        }
        // Periodic resync keeps the incremental value free of accumulated
        // rounding drift on long walks.
        if step.is_multiple_of(65_536) {
            let cur: Vec<usize> = ground.iter().copied().filter(|&u| in_set[u]).collect();
            f_cur = obj
                .f_value(&cur)
                .expect("enumeration stays in the ground set");
        }
        let guard = 1e-9 * f_cur.abs().max(best_f.abs()).max(1.0);
        if f_cur <= best_f + guard {
            let cur: Vec<usize> = ground.iter().copied().filter(|&u| in_set[u]).collect();
            let exact = obj
                .f_value(&cur)
                .expect("enumeration stays in the ground set");
            if better_candidate(exact, &cur, best_f, &best_set) {
                best_f = exact;
                best_set = cur;
            }
        }
    }

    let best_total = obj
        .gamma(&best_set)
        .expect("best set lies in the ground set");
    Ok(OracleResult {
        best_set,
        best_f,
        best_total,
        subsets_evaluated: total,
    })
}

fn fmt_num(x: f64) -> String {
    format!("{x}")
}

struct LinearTerm {
    coef: f64,
    var: String,
}

fn push_term(terms: &mut Vec<LinearTerm>, coef: f64, var: String) {
    if coef != 0.0 {
        terms.push(LinearTerm { coef, var });
    }
}

fn write_expression(w: &mut impl Write, terms: &[LinearTerm], constant: f64) -> io::Result<()> {
    if terms.is_empty() && constant == 0.0 {
        write!(w, " 0")?;
        return Ok(());
    }
    let mut per_line = 0;
    for (i, t) in terms.iter().enumerate() {
        if i == 0 {
            write!(w, " {} {}", fmt_num(t.coef), t.var)?;
        } else if t.coef >= 0.0 {
            write!(w, " + {} {}", fmt_num(t.coef), t.var)?;
        } else {
            write!(w, " - {} {}", fmt_num(-t.coef), t.var)?;
        }
        per_line += 1;
        if per_line == 8 && i + 1 < terms.len() {
            writeln!(w)?;
            write!(w, "   ")?;
            per_line = 0;
        }
    }
    if constant != 0.0 {
        if terms.is_empty() {
            write!(w, " {}", fmt_num(constant))?;
        } else if constant > 0.0 {
            write!(w, " + {}", fmt_num(constant))?;
        } else {
            write!(w, " - {}", fmt_num(-constant))?;
        }
    }
    Ok(())
}

/// Writes the 0/1 integer program whose optimum is the minimal total service
/// cost, in CPLEX LP format.
///
/// `x_<id> = 1` places task `id` in the cloud; pins become fixed bounds. Per
/// directed edge, the three cross/cloud side-indicator products are
/// linearized through auxiliaries `y_<src>_<dst>_{2,3,4}` (edge→cloud,
/// cloud→edge, cloud→cloud); the both-edge indicator is eliminated via the
/// identity that the four indicators sum to one. The objective evaluated at
/// any feasible 0/1 point equals the total cost of that partition.
pub fn write_ilp(g: &TaskGraph, w: &mut impl Write) -> io::Result<()> {
    let mut terms: Vec<LinearTerm> = Vec::new();
    let mut constant = 0.0f64;

    for (i, c) in g.nodes().iter().enumerate() {
        constant += c.w_edge + c.transfer;
        push_term(
            &mut terms,
            c.w_cloud - c.w_edge - c.transfer,
            format!("x_{i}"),
        );
    }
    for e in g.edges() {
        let c = &e.cost;
        constant += c.ee;
        push_term(&mut terms, c.ec - c.ee, format!("y_{}_{}_2", e.src, e.dst));
        push_term(&mut terms, c.ce - c.ee, format!("y_{}_{}_3", e.src, e.dst));
        push_term(&mut terms, c.cc - c.ee, format!("y_{}_{}_4", e.src, e.dst));
    }

    writeln!(
        w,
        "\\ offloading instance '{}': x_v = 1 places task v in the cloud",
        g.name()
    )?;
    writeln!(w, "Minimize")?;
    write!(w, " obj:")?;
    write_expression(w, &terms, constant)?;
    writeln!(w)?;

    writeln!(w, "Subject To")?;
    for e in g.edges() {
        let (i, j) = (e.src, e.dst);
        // y2 = (1 - x_i) x_j
        writeln!(w, " c_{i}_{j}_2a: y_{i}_{j}_2 - x_{j} <= 0")?;
        writeln!(w, " c_{i}_{j}_2b: y_{i}_{j}_2 + x_{i} <= 1")?;
        writeln!(w, " c_{i}_{j}_2c: y_{i}_{j}_2 - x_{j} + x_{i} >= 0")?;
        // y3 = x_i (1 - x_j)
        writeln!(w, " c_{i}_{j}_3a: y_{i}_{j}_3 - x_{i} <= 0")?;
        writeln!(w, " c_{i}_{j}_3b: y_{i}_{j}_3 + x_{j} <= 1")?;
        writeln!(w, " c_{i}_{j}_3c: y_{i}_{j}_3 - x_{i} + x_{j} >= 0")?;
        // y4 = x_i x_j
        writeln!(w, " c_{i}_{j}_4a: y_{i}_{j}_4 - x_{i} <= 0")?;
        writeln!(w, " c_{i}_{j}_4b: y_{i}_{j}_4 - x_{j} <= 0")?;
        writeln!(w, " c_{i}_{j}_4c: y_{i}_{j}_4 - x_{i} - x_{j} >= -1")?;
    }

    writeln!(w, "Bounds")?;
    for i in 0..g.node_count() {
        match g.pin(i) {
            crate::model::Pin::Edge => writeln!(w, " x_{i} = 0")?,
            crate::model::Pin::Cloud => writeln!(w, " x_{i} = 1")?,
            crate::model::Pin::Free => {}
        }
    }

    writeln!(w, "Binary")?;
    for i in 0..g.node_count() {
        writeln!(w, " x_{i}")?;
    }
    writeln!(w, "End")?;
    Ok(())
}

/// Writes the instance ILP to `path`. See [`write_ilp`].
pub fn export_ilp(g: &TaskGraph, path: impl AsRef<Path>) -> Result<(), OracleError> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_ilp(g, &mut file)?;
    file.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{EdgeCost, NodeCost, Partition, Pin};
    use crate::testutil::*;

    pub(crate) fn triangle_reduction() -> TaskGraph {
        let zero = NodeCost::new(0.0, 0.0);
        let c = EdgeCost::new(3.0, 1.0, 1.0, 3.0);
        TaskGraph::build(
            "triangle",
            vec![zero, zero, zero],
            vec![(0, 1, c), (0, 2, c), (1, 2, c)],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn two_node_enumeration() {
        let r = brute_force(&two_node_graph()).unwrap();
        assert_eq!(r.best_set, vec![0, 1]);
        assert_eq!(r.best_f, -3.0);
        assert_eq!(r.best_total, 3.0);
        assert_eq!(r.subsets_evaluated, 4);
    }

    #[test]
    fn triangle_reduction_optimum_is_five() {
        // m(m-q)+q with m=3 and max cut q=2.
        let r = brute_force(&triangle_reduction()).unwrap();
        assert_eq!(r.best_total, 5.0);
    }

    #[test]
    fn empty_ground_set() {
        let g = TaskGraph::build(
            "pinned",
            vec![NodeCost::new(1.0, 2.0)],
            vec![],
            vec![Pin::Edge],
        )
        .unwrap();
        let r = brute_force(&g).unwrap();
        assert!(r.best_set.is_empty());
        assert_eq!(r.best_f, 0.0);
        assert_eq!(r.subsets_evaluated, 1);
    }

    #[test]
    fn ground_set_guard() {
        let nodes = vec![NodeCost::new(1.0, 1.0); 25];
        let g = TaskGraph::build("big", nodes, vec![], vec![]).unwrap();
        assert!(matches!(
            brute_force(&g),
            Err(OracleError::GroundSetTooLarge { size: 25, .. })
        ));
    }

    #[test]
    fn tie_break_prefers_smaller_then_lexicographic() {
        // Two isolated nodes with zero-cost moves: F = 0 on every subset.
        let g = TaskGraph::build(
            "ties",
            vec![NodeCost::new(1.0, 1.0), NodeCost::new(1.0, 1.0)],
            vec![],
            vec![],
        )
        .unwrap();
        let r = brute_force(&g).unwrap();
        assert!(r.best_set.is_empty());
        assert_eq!(r.best_f, 0.0);
    }

    #[test]
    fn matches_full_partition_enumeration() {
        use crate::datagen::{generate, GenConfig};
        for seed in 0..6u64 {
            let cfg = GenConfig {
                nodes: 7,
                edges: 12,
                ratio: None,
                comp_range: (1.0, 10.0),
                comm_range: (1.0, 8.0),
                seed,
                enforce_assumption: seed % 2 == 0,
                pin_fraction: if seed % 3 == 0 { 0.3 } else { 0.0 },
                transfer_range: None,
            };
            let g = generate(&cfg).unwrap();
            let r = brute_force(&g).unwrap();
            let n = g.node_count();
            let mut best = f64::INFINITY;
            for mask in 0..(1u32 << n) {
                let p =
                    Partition::from_cloud_set(n, (0..n).filter(|&i| mask >> i & 1 == 1)).unwrap();
                if let Ok(b) = crate::cost::total_cost(&g, &p) {
                    best = best.min(b.total);
                }
            }
            assert!(
                (r.best_total - best).abs() <= 1e-9 * best.abs().max(1.0),
                "seed {seed}: oracle {} vs direct {}",
                r.best_total,
                best
            );
        }
    }

    #[test]
    fn lp_export_structure() {
        let g = two_node_graph();
        let mut buf = Vec::new();
        write_ilp(&g, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("\\ offloading instance"));
        assert!(text.contains("Minimize"));
        assert!(text.contains("Subject To"));
        assert!(text.contains("Binary"));
        assert!(text.trim_end().ends_with("End"));
        assert!(text.contains("y_0_1_4"));
    }

    #[test]
    fn lp_pins_are_fixed_bounds() {
        let g = TaskGraph::build(
            "pins",
            vec![NodeCost::new(1.0, 2.0), NodeCost::new(2.0, 1.0)],
            vec![],
            vec![Pin::Edge, Pin::Cloud],
        )
        .unwrap();
        let mut buf = Vec::new();
        write_ilp(&g, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains(" x_0 = 0"));
        assert!(text.contains(" x_1 = 1"));
    }

    /// Parses the objective back out of the LP text: (terms, constant).
    fn parse_objective(text: &str) -> (Vec<(f64, String)>, f64) {
        let start = text.find("obj:").unwrap() + 4;
        let end = text.find("Subject To").unwrap();
        let body = &text[start..end];
        let tokens: Vec<&str> = body.split_whitespace().collect();
        let mut terms = Vec::new();
        let mut constant = 0.0;
        let mut sign = 1.0;
        let mut pending: Option<f64> = None;
        for tok in tokens {
            match tok {
                "+" => {
                    if let Some(c) = pending.take() {
                        constant += sign * c;
                    }
                    sign = 1.0;
                }
                "-" => {
                    if let Some(c) = pending.take() {
                        constant += sign * c;
                    }
                    sign = -1.0;
                }
                _ => {
                    if let Ok(num) = tok.parse::<f64>() {
                        if let Some(c) = pending.take() {
                            constant += sign * c;
                            sign = 1.0;
                        }
                        pending = Some(num);
                    } else {
                        let c = pending.take().unwrap_or(1.0);
                        terms.push((sign * c, tok.to_string()));
                        sign = 1.0;
                    }
                }
            }
        }
        if let Some(c) = pending {
            constant += sign * c;
        }
        (terms, constant)
    }

    fn eval_objective(terms: &[(f64, String)], constant: f64, x: &[f64]) -> f64 {
        let mut total = constant;
        for (coef, var) in terms {
            let parts: Vec<&str> = var.split('_').collect();
            let value = match parts[0] {
                "x" => x[parts[1].parse::<usize>().unwrap()],
                "y" => {
                    let i = parts[1].parse::<usize>().unwrap();
                    let j = parts[2].parse::<usize>().unwrap();
                    match parts[3] {
                        "2" => (1.0 - x[i]) * x[j],
                        "3" => x[i] * (1.0 - x[j]),
                        "4" => x[i] * x[j],
                        other => panic!("unexpected auxiliary kind {other}"),
                    }
                }
                other => panic!("unexpected variable {other}"),
            };
            total += coef * value;
        }
        total
    }

    #[test]
    fn lp_optimum_matches_brute_force_on_small_instances() {
        // Exhaustively minimizing the exported objective over feasible 0/1
        // assignments stands in for an external ILP solver.
        for (g, expected) in [(two_node_graph(), 3.0), (triangle_reduction(), 5.0)] {
            let mut buf = Vec::new();
            write_ilp(&g, &mut buf).unwrap();
            let text = String::from_utf8(buf).unwrap();
            let (terms, constant) = parse_objective(&text);
            let n = g.node_count();
            let mut best = f64::INFINITY;
            for mask in 0u32..(1 << n) {
                let mut feasible = true;
                let mut x = vec![0.0; n];
                for (i, xi) in x.iter_mut().enumerate() {
                    let bit = mask >> i & 1 == 1;
                    match g.pin(i) {
                        Pin::Edge if bit => feasible = false,
                        Pin::Cloud if !bit => feasible = false,
                        _ => {}
                    }
                    *xi = if bit { 1.0 } else { 0.0 };
                }
                if feasible {
                    best = best.min(eval_objective(&terms, constant, &x));
                }
            }
            assert!(
                (best - expected).abs() <= 1e-9,
                "LP optimum {best} vs {expected}"
            );
        }
    }

    #[test]
    fn lp_objective_matches_total_cost_on_random_assignments() {
        use crate::datagen::{generate, GenConfig};
        use rand::prelude::*;
        let cfg = GenConfig {
            nodes: 8,
            edges: 16,
            ratio: None,
            comp_range: (0.5, 9.0),
            comm_range: (0.5, 7.0),
            seed: 11,
            enforce_assumption: false,
            pin_fraction: 0.25,
            transfer_range: Some((0.0, 2.0)),
        };
        let g = generate(&cfg).unwrap();
        let mut buf = Vec::new();
        write_ilp(&g, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let (terms, constant) = parse_objective(&text);

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..50 {
            let mut x = vec![0.0; g.node_count()];
            let mut cloud = Vec::new();
            for (i, xi) in x.iter_mut().enumerate() {
                let bit = match g.pin(i) {
                    Pin::Edge => false,
                    Pin::Cloud => true,
                    Pin::Free => rng.random_bool(0.5),
                };
                if bit {
                    *xi = 1.0;
                    cloud.push(i);
                }
            }
            let p = Partition::from_cloud_set(g.node_count(), cloud).unwrap();
            let expected = crate::cost::total_cost(&g, &p).unwrap().total;
            let got = eval_objective(&terms, constant, &x);
            assert!(
                (got - expected).abs() <= 1e-9 * expected.abs().max(1.0),
                "objective {got} vs cost {expected}"
            );
        }
    }
}
