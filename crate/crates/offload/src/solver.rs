//! Exact minimization of the offloading objective via Wolfe's minimum-norm
//! point algorithm on the base polytope, with the Edmonds greedy linear
//! oracle.
//!
//! When the communication-cost ordering holds (`holds_strong`), the
//! objective is submodular and the extracted minimizer is a certified global
//! optimum of the total service cost. On other inputs the same procedure
//! still returns a feasible partition, flagged as uncertified.

use crate::cost::OffloadObjective;
use crate::model::{check_assumption, AssumptionReport, Partition, TaskGraph};
use serde::Serialize;
use std::time::Instant;

/// Default termination tolerance for the min-norm-point loop. The effective
/// threshold is `eps * scale` with `scale = max(1, max |F| seen)`.
pub const DEFAULT_EPS: f64 = 1e-10;

/// Convex coefficients below this are treated as zero and their vertices
/// dropped from the corral.
const TOL_COEFF: f64 = 1e-12;

/// One vertex of the base polytope, generated by running the greedy chain
/// along `perm`.
#[derive(Debug, Clone)]
pub struct BaseVertex {
    /// Marginal gains indexed by position in the objective's ground set.
    pub coords: Vec<f64>,
    /// The generating permutation, as node ids.
    pub perm: Vec<usize>,
}

/// Working state of the min-norm-point loop.
#[derive(Debug)]
pub struct MinNormState {
    /// Current iterate, indexed by ground-set position.
    pub point: Vec<f64>,
    pub corral: Vec<BaseVertex>,
    /// Convex coefficients of `corral`, summing to 1.
    pub lambdas: Vec<f64>,
    pub eps: f64,
    pub major_cycles: usize,
    pub minor_cycles: usize,
    pub oracle_calls: usize,
    /// Running max of 1 and |F| over all oracle evaluations.
    pub scale: f64,
    /// Set when the major-cycle budget (10·n²) ran out before convergence.
    pub hit_iteration_limit: bool,
    /// ‖x‖² after every major cycle; non-increasing modulo float noise.
    pub norm_sq_history: Vec<f64>,
}

/// Runs the greedy chain along `perm` (node ids forming a permutation of the
/// ground set) and returns the resulting base-polytope vertex.
///
/// Coordinate `perm[k]` is the marginal of adding it after `perm[0..k]`;
/// side bookkeeping makes the whole chain O(sum of degrees).
pub fn greedy_vertex(obj: &OffloadObjective, perm: &[usize]) -> BaseVertex {
    debug_assert_eq!(perm.len(), obj.ground_size());
    let mut coords = vec![0.0; obj.ground_size()];
    let mut is_cloud: Vec<bool> = (0..obj.graph().node_count())
        .map(|v| obj.is_base_cloud(v))
        .collect();
    for &v in perm {
        let pos = obj
            .ground_position(v)
            .expect("perm must consist of ground-set nodes");
        coords[pos] = obj.marginal_with(v, |u| is_cloud[u]);
        is_cloud[v] = true;
    }
    BaseVertex {
        coords,
        perm: perm.to_vec(),
    }
}

/// Greedy vertex for a permutation given by ground-set positions; also
/// updates `scale` with the prefix F values seen along the chain.
fn greedy_vertex_by_pos(obj: &OffloadObjective, order: &[usize], scale: &mut f64) -> Vec<f64> {
    let mut coords = vec![0.0; obj.ground_size()];
    let mut is_cloud: Vec<bool> = (0..obj.graph().node_count())
        .map(|v| obj.is_base_cloud(v))
        .collect();
    let mut prefix = 0.0;
    for &pos in order {
        let v = obj.ground_set()[pos];
        let m = obj.marginal_with(v, |u| is_cloud[u]);
        coords[pos] = m;
        is_cloud[v] = true;
        prefix += m;
        let a = prefix.abs();
        if a > *scale {
            *scale = a;
        }
    }
    coords
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Cholesky factor R (upper triangular, stored by columns) of the corral's
/// augmented Gram matrix M = Q + 1·1ᵀ, Q[i][j] = vᵢ·vⱼ. M is positive
/// definite exactly while the corral stays affinely independent.
struct CorralFactor {
    /// cols[j] holds R[0..=j][j].
    cols: Vec<Vec<f64>>,
    /// Diagonal of M, for the relative pivot floor.
    m_diag: Vec<f64>,
}

impl CorralFactor {
    fn new() -> Self {
        Self {
            cols: Vec::new(),
            m_diag: Vec::new(),
        }
    }

    fn len(&self) -> usize {
        self.cols.len()
    }

    fn pivot_floor(&self, incoming_diag: f64) -> f64 {
        let trace: f64 = self.m_diag.iter().sum::<f64>() + incoming_diag;
        1e-12 * trace.max(1.0)
    }

    /// Appends the vertex whose Gram column (against the existing corral) is
    /// `col` and whose M-diagonal entry is `d`. Fails when the new pivot
    /// falls under the conditioning floor.
    fn try_add(&mut self, col: &[f64], d: f64) -> bool {
        let k = self.len();
        debug_assert_eq!(col.len(), k);
        let mut r = vec![0.0; k];
        for i in 0..k {
            let s = col[i] - dot(&self.cols[i][..i], &r[..i]);
            r[i] = s / self.cols[i][i];
        }
        let rho2 = d - dot(&r, &r);
        if rho2 <= self.pivot_floor(d) {
            return false;
        }
        r.push(rho2.sqrt());
        self.cols.push(r);
        self.m_diag.push(d);
        true
    }

    /// Removes column `j`, restoring triangularity with Givens rotations.
    fn remove(&mut self, j: usize) {
        self.cols.remove(j);
        self.m_diag.remove(j);
        let k = self.len();
        for p in j..k {
            // Zero the subdiagonal entry R[p+1][p] left by the removal.
            let a = self.cols[p][p];
            let b = self.cols[p][p + 1];
            let rho = a.hypot(b);
            let (c, s) = if rho > 0.0 {
                (a / rho, b / rho)
            } else {
                (1.0, 0.0)
            };
            self.cols[p][p] = rho;
            self.cols[p].truncate(p + 1);
            for q in (p + 1)..k {
                let u = self.cols[q][p];
                let w = self.cols[q][p + 1];
                self.cols[q][p] = c * u + s * w;
                self.cols[q][p + 1] = c * w - s * u;
            }
        }
    }

    /// Solves M y = 1. Normalizing y to unit sum gives the affine
    /// minimum-norm coefficients over the corral.
    fn solve_unit(&self) -> Option<Vec<f64>> {
        let k = self.len();
        let mut z = vec![0.0; k];
        for i in 0..k {
            let s = 1.0 - dot(&self.cols[i][..i], &z[..i]);
            z[i] = s / self.cols[i][i];
        }
        let mut y = vec![0.0; k];
        for i in (0..k).rev() {
            let mut s = z[i];
            for (col, yt) in self.cols[(i + 1)..].iter().zip(&y[(i + 1)..]) {
                s -= col[i] * yt;
            }
            y[i] = s / self.cols[i][i];
            if !y[i].is_finite() {
                return None;
            }
        }
        Some(y)
    }

    /// Recomputes the factorization from the vertex coordinates.
    fn rebuild(vertices: &[Vec<f64>]) -> Option<Self> {
        let mut f = CorralFactor::new();
        for (i, v) in vertices.iter().enumerate() {
            let col: Vec<f64> = vertices[..i].iter().map(|u| dot(u, v) + 1.0).collect();
            if !f.try_add(&col, dot(v, v) + 1.0) {
                return None;
            }
        }
        Some(f)
    }
}

/// Affine minimum-norm coefficients over the corral (sum to 1, may be
/// negative outside the convex hull).
fn affine_coefficients(factor: &CorralFactor) -> Option<Vec<f64>> {
    let y = factor.solve_unit()?;
    let sum: f64 = y.iter().sum();
    if !(sum.is_finite() && sum > 0.0) {
        return None;
    }
    Some(y.iter().map(|&t| t / sum).collect())
}

fn combination(vertices: &[Vec<f64>], coeffs: &[f64], n: usize) -> Vec<f64> {
    let mut x = vec![0.0; n];
    for (v, &c) in vertices.iter().zip(coeffs) {
        for (xi, vi) in x.iter_mut().zip(v) {
            *xi += c * vi;
        }
    }
    x
}

/// Ascending order of `x` with index tie-breaking; deterministic.
fn ascending_order(x: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].partial_cmp(&x[b]).unwrap().then(a.cmp(&b)));
    order
}

/// Wolfe's minimum-norm-point loop over the base polytope of the objective.
///
/// Returns once the duality gap `x·x − x·q` of the current iterate drops
/// below `eps * scale`, the linear oracle reproduces a corral vertex (no
/// further progress is representable), or the 10·n² major-cycle budget runs
/// out (flagged, never fatal).
pub fn min_norm_point(obj: &OffloadObjective, eps: f64) -> MinNormState {
    let n = obj.ground_size();
    assert!(n >= 1, "min_norm_point needs a nonempty ground set");
    assert!(eps > 0.0);

    let mut scale = 1.0f64;
    let order: Vec<usize> = (0..n).collect();
    let first = greedy_vertex_by_pos(obj, &order, &mut scale);
    let mut oracle_calls = 1usize;

    let mut vertices: Vec<Vec<f64>> = vec![first.clone()];
    let mut perms: Vec<Vec<usize>> = vec![order];
    let mut lambdas: Vec<f64> = vec![1.0];
    let mut factor = CorralFactor::new();
    factor.try_add(&[], dot(&first, &first) + 1.0);
    let mut x = first;

    let mut major = 0usize;
    let mut minor = 0usize;
    let mut hit_limit = false;
    let mut norm_sq_history = Vec::new();
    let limit = 10 * n * n;

    loop {
        major += 1;
        if major > limit {
            hit_limit = true;
            break;
        }

        let order = ascending_order(&x);
        let q = greedy_vertex_by_pos(obj, &order, &mut scale);
        oracle_calls += 1;

        let xx = dot(&x, &x);
        let xq = dot(&x, &q);
        norm_sq_history.push(xx);
        if xq >= xx - eps * scale {
            break;
        }
        // A reproduced vertex means x already minimizes over the hull to
        // float resolution.
        let dup_tol = 1e-9 * scale;
        if vertices
            .iter()
            .any(|v| v.iter().zip(&q).all(|(a, b)| (a - b).abs() <= dup_tol))
        {
            break;
        }

        let col: Vec<f64> = vertices.iter().map(|v| dot(v, &q) + 1.0).collect();
        let d = dot(&q, &q) + 1.0;
        let mut added = factor.try_add(&col, d);
        if !added {
            match CorralFactor::rebuild(&vertices) {
                Some(f) => {
                    factor = f;
                    added = factor.try_add(&col, d);
                }
                None => break,
            }
        }
        if !added {
            // Numerically dependent on the current corral: no progress.
            break;
        }
        vertices.push(q);
        perms.push(order);
        lambdas.push(0.0);

        // Minor cycles: pull x back into the convex hull, shrinking the
        // corral until the affine minimizer is interior.
        let mut guard = vertices.len() + 1;
        loop {
            minor += 1;
            guard -= 1;
            if guard == 0 {
                break;
            }
            let alpha = match affine_coefficients(&factor) {
                Some(a) => a,
                None => match CorralFactor::rebuild(&vertices) {
                    Some(f) => {
                        factor = f;
                        match affine_coefficients(&factor) {
                            Some(a) => a,
                            None => break,
                        }
                    }
                    None => break,
                },
            };
            let min_alpha = alpha.iter().cloned().fold(f64::INFINITY, f64::min);
            if min_alpha > -TOL_COEFF {
                lambdas = alpha.iter().map(|&a| a.max(0.0)).collect();
                let s: f64 = lambdas.iter().sum();
                for l in &mut lambdas {
                    *l /= s;
                }
                x = combination(&vertices, &lambdas, n);
                break;
            }
            let mut theta = 1.0f64;
            for (&l, &a) in lambdas.iter().zip(&alpha) {
                if a < l {
                    let t = l / (l - a);
                    if t < theta {
                        theta = t;
                    }
                }
            }
            let mut new_lambdas: Vec<f64> = lambdas
                .iter()
                .zip(&alpha)
                .map(|(&l, &a)| (1.0 - theta) * l + theta * a)
                .collect();
            let mut removed_any = false;
            let mut i = new_lambdas.len();
            while i > 0 {
                i -= 1;
                if new_lambdas[i] <= TOL_COEFF {
                    new_lambdas.remove(i);
                    vertices.remove(i);
                    perms.remove(i);
                    factor.remove(i);
                    removed_any = true;
                }
            }
            if !removed_any {
                // theta computation failed to clear a vertex; drop the
                // smallest coefficient to guarantee progress.
                let (j, _) = new_lambdas
                    .iter()
                    .enumerate()
                    .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                    .unwrap();
                new_lambdas.remove(j);
                vertices.remove(j);
                perms.remove(j);
                factor.remove(j);
            }
            let s: f64 = new_lambdas.iter().sum();
            lambdas = new_lambdas.iter().map(|&l| l / s).collect();
            x = combination(&vertices, &lambdas, n);
        }
    }

    let corral: Vec<BaseVertex> = vertices
        .into_iter()
        .zip(perms)
        .map(|(coords, order)| BaseVertex {
            coords,
            perm: order.iter().map(|&pos| obj.ground_set()[pos]).collect(),
        })
        .collect();

    MinNormState {
        point: x,
        corral,
        lambdas,
        eps,
        major_cycles: major,
        minor_cycles: minor,
        oracle_calls,
        scale,
        hit_iteration_limit: hit_limit,
        norm_sq_history,
    }
}

/// Recovers the best minimizer candidate from the min-norm point.
///
/// Evaluates F on every prefix of the ground set sorted by `x` ascending,
/// plus the two sign-threshold sets `{x < 0}` and `{x ≤ 0}`, and returns the
/// best set under (F, cardinality, lexicographic) ordering. Node ids,
/// ascending.
pub fn extract_minimizer(obj: &OffloadObjective, state: &MinNormState) -> Vec<usize> {
    let order = ascending_order(&state.point);
    let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(order.len() + 3);
    for take in 0..=order.len() {
        let mut set: Vec<usize> = order[..take]
            .iter()
            .map(|&pos| obj.ground_set()[pos])
            .collect();
        set.sort_unstable();
        candidates.push(set);
    }
    for strict in [true, false] {
        let set: Vec<usize> = (0..state.point.len())
            .filter(|&pos| {
                if strict {
                    state.point[pos] < 0.0
                } else {
                    state.point[pos] <= 0.0
                }
            })
            .map(|pos| obj.ground_set()[pos])
            .collect();
        candidates.push(set);
    }

    let mut best: Option<(f64, Vec<usize>)> = None;
    for set in candidates {
        let f = obj
            .f_value(&set)
            .expect("candidate sets lie in the ground set");
        let replace = match &best {
            None => true,
            Some((bf, bset)) => f < *bf || (f == *bf && (set.len(), &set) < (bset.len(), bset)),
        };
        if replace {
            best = Some((f, set));
        }
    }
    best.expect("at least the empty prefix is a candidate").1
}

/// Per-solve counters and timing.
#[derive(Debug, Clone, Serialize)]
pub struct SolveStats {
    pub major_cycles: usize,
    pub minor_cycles: usize,
    pub oracle_calls: usize,
    pub wall_time_ms: f64,
    pub hit_iteration_limit: bool,
}

/// Outcome of a solver run: the partition, its costs, and whether the
/// communication-cost ordering certifies it as globally optimal.
#[derive(Debug, Clone, Serialize)]
pub struct SolveResult {
    /// Cloud-side node ids, ascending (pinned-cloud nodes included).
    pub cloud_set: Vec<usize>,
    /// Objective value of the returned set: total − gamma(∅). Never above 0.
    pub f_min: f64,
    pub total_cost: f64,
    pub assumption: AssumptionReport,
    pub optimal_certified: bool,
    pub stats: SolveStats,
    #[serde(skip)]
    pub partition: Partition,
}

/// Minimizes the total service cost of `g` via min-norm-point submodular
/// minimization.
///
/// Inputs violating the communication-cost ordering are accepted — the
/// result is then a feasible heuristic with `optimal_certified = false`.
pub fn solve(g: &TaskGraph, eps: f64) -> SolveResult {
    let start = Instant::now();
    let obj = OffloadObjective::new(g);
    let (chosen, stats) = if obj.ground_size() == 0 {
        (
            Vec::new(),
            SolveStats {
                major_cycles: 0,
                minor_cycles: 0,
                oracle_calls: 0,
                wall_time_ms: 0.0,
                hit_iteration_limit: false,
            },
        )
    } else {
        let state = min_norm_point(&obj, eps);
        let set = extract_minimizer(&obj, &state);
        (
            set,
            SolveStats {
                major_cycles: state.major_cycles,
                minor_cycles: state.minor_cycles,
                oracle_calls: state.oracle_calls,
                wall_time_ms: 0.0,
                hit_iteration_limit: state.hit_iteration_limit,
            },
        )
    };

    let f_min = obj
        .f_value(&chosen)
        .expect("minimizer lies in the ground set");
    let mut partition = Partition::all_edge(g.node_count());
    for v in g.pinned_cloud_nodes() {
        partition.set_cloud(v, true);
    }
    for &v in &chosen {
        partition.set_cloud(v, true);
    }
    let total = crate::cost::total_cost(g, &partition)
        .expect("solver partitions respect pins")
        .total;
    let assumption = check_assumption(g);
    let optimal_certified = assumption.holds_strong;

    let mut stats = stats;
    stats.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;

    SolveResult {
        cloud_set: partition.cloud_set(),
        f_min,
        total_cost: total,
        assumption,
        optimal_certified,
        stats,
        partition,
    }
}
