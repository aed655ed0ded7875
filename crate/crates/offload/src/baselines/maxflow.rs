//! Preflow-push max-flow (highest-label with the gap heuristic) on real
//! capacities.

/// Directed flow network with residual bookkeeping. Arcs are stored in
/// pairs: arc `2k` is the forward arc, `2k+1` its reverse.
pub struct FlowNetwork {
    n: usize,
    to: Vec<usize>,
    cap: Vec<f64>,
    cap_orig: Vec<f64>,
    adj: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            to: Vec::new(),
            cap: Vec::new(),
            cap_orig: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Adds a directed arc `u -> v` with the given capacity (reverse
    /// residual capacity 0).
    pub fn add_arc(&mut self, u: usize, v: usize, capacity: f64) {
        debug_assert!(u < self.n && v < self.n && capacity >= 0.0);
        let id = self.to.len();
        self.to.push(v);
        self.cap.push(capacity);
        self.cap_orig.push(capacity);
        self.adj[u].push(id);
        self.to.push(u);
        self.cap.push(0.0);
        self.cap_orig.push(0.0);
        self.adj[v].push(id + 1);
    }

    fn residual_floor(&self) -> f64 {
        let max_cap = self.cap_orig.iter().cloned().fold(0.0f64, f64::max);
        1e-12 * max_cap.max(1.0)
    }

    /// Highest-label preflow-push with the gap heuristic; returns the max
    /// flow value from `s` to `t`. Phase 1 only: excess trapped at relabeled
    /// nodes is not routed back, which is all a min-cut needs.
    pub fn max_flow(&mut self, s: usize, t: usize) -> f64 {
        let n = self.n;
        assert!(s < n && t < n && s != t);
        let mut height = vec![0usize; n];
        let mut excess = vec![0.0f64; n];
        let mut ptr = vec![0usize; n];
        let mut count = vec![0usize; 2 * n + 1];
        height[s] = n;
        for v in 0..n {
            if v != s {
                count[0] += 1;
            }
        }

        let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); 2 * n + 1];
        let mut highest = 0usize;

        macro_rules! activate {
            ($v:expr) => {
                if $v != s && $v != t && excess[$v] > 0.0 && height[$v] < n {
                    buckets[height[$v]].push($v);
                    if height[$v] > highest {
                        highest = height[$v];
                    }
                }
            };
        }

        // Saturate the source's out-arcs.
        for ai in 0..self.adj[s].len() {
            let a = self.adj[s][ai];
            let delta = self.cap[a];
            if delta > 0.0 {
                let v = self.to[a];
                self.cap[a] = 0.0;
                self.cap[a ^ 1] += delta;
                excess[v] += delta;
                activate!(v);
            }
        }

        loop {
            while highest > 0 && buckets[highest].is_empty() {
                highest -= 1;
            }
            let u = match buckets[highest].pop() {
                Some(u) => u,
                None => break,
            };
            if u == s || u == t || excess[u] <= 0.0 || height[u] != highest || height[u] >= n {
                continue;
            }

            // Discharge u.
            while excess[u] > 0.0 {
                if ptr[u] == self.adj[u].len() {
                    // Relabel: lift u to one above its lowest residual
                    // neighbor, with the gap heuristic on the vacated level.
                    let old_h = height[u];
                    let mut min_h = usize::MAX;
                    for &a in &self.adj[u] {
                        if self.cap[a] > 0.0 {
                            min_h = min_h.min(height[self.to[a]]);
                        }
                    }
                    let new_h = if min_h == usize::MAX {
                        2 * n
                    } else {
                        min_h + 1
                    };
                    count[old_h] -= 1;
                    if count[old_h] == 0 && old_h < n {
                        // Gap: every node strictly above the empty level
                        // (but below n) can never reach t again.
                        for v in 0..n {
                            if v != s && old_h < height[v] && height[v] < n {
                                count[height[v]] -= 1;
                                height[v] = n + 1;
                                count[height[v].min(2 * n)] += 1;
                            }
                        }
                    }
                    height[u] = new_h.min(2 * n);
                    count[height[u]] += 1;
                    ptr[u] = 0;
                    if height[u] >= n {
                        break;
                    }
                    continue;
                }
                let a = self.adj[u][ptr[u]];
                let v = self.to[a];
                if self.cap[a] > 0.0 && height[u] == height[v] + 1 {
                    let delta = excess[u].min(self.cap[a]);
                    let had_excess = excess[v] > 0.0;
                    self.cap[a] -= delta;
                    self.cap[a ^ 1] += delta;
                    excess[u] -= delta;
                    excess[v] += delta;
                    if !had_excess {
                        activate!(v);
                    }
                } else {
                    ptr[u] += 1;
                }
            }
            activate!(u);
        }

        excess[t]
    }

    /// Source side of a min cut once `max_flow` has run: the complement of
    /// the nodes that can still reach `t` in the residual graph. (Forward
    /// reachability from `s` would misclassify nodes holding trapped excess,
    /// since phase 1 never routes it back.)
    pub fn min_cut_source_side(&self, s: usize, t: usize) -> Vec<bool> {
        let floor = self.residual_floor();
        let mut reaches_t = vec![false; self.n];
        let mut queue = std::collections::VecDeque::new();
        reaches_t[t] = true;
        queue.push_back(t);
        while let Some(v) = queue.pop_front() {
            for &a in &self.adj[v] {
                // The paired arc runs to[a] -> v; positive residual there
                // means to[a] reaches t through v.
                let u = self.to[a];
                if !reaches_t[u] && self.cap[a ^ 1] > floor {
                    reaches_t[u] = true;
                    queue.push_back(u);
                }
            }
        }
        debug_assert!(!reaches_t[s], "phase 1 must cut every augmenting path");
        reaches_t.iter().map(|&r| !r).collect()
    }

    /// Total original capacity of arcs crossing from `side` to its
    /// complement.
    pub fn cut_capacity(&self, side: &[bool]) -> f64 {
        let mut total = 0.0;
        for u in 0..self.n {
            if !side[u] {
                continue;
            }
            for &a in &self.adj[u] {
                if a % 2 == 0 && !side[self.to[a]] {
                    total += self.cap_orig[a];
                }
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_arc() {
        let mut net = FlowNetwork::new(2);
        net.add_arc(0, 1, 3.5);
        assert_eq!(net.max_flow(0, 1), 3.5);
        let side = net.min_cut_source_side(0, 1);
        assert!(side[0] && !side[1]);
        assert_eq!(net.cut_capacity(&side), 3.5);
    }

    #[test]
    fn classic_diamond() {
        // s=0, t=3; two paths with a cross arc.
        let mut net = FlowNetwork::new(4);
        net.add_arc(0, 1, 3.0);
        net.add_arc(0, 2, 2.0);
        net.add_arc(1, 2, 1.0);
        net.add_arc(1, 3, 2.0);
        net.add_arc(2, 3, 3.0);
        let flow = net.max_flow(0, 3);
        assert!((flow - 5.0).abs() < 1e-12);
        let side = net.min_cut_source_side(0, 3);
        assert!((net.cut_capacity(&side) - flow).abs() < 1e-12);
    }

    #[test]
    fn disconnected_sink() {
        let mut net = FlowNetwork::new(3);
        net.add_arc(0, 1, 5.0);
        assert_eq!(net.max_flow(0, 2), 0.0);
        let side = net.min_cut_source_side(0, 2);
        assert!(side[0] && side[1] && !side[2]);
        assert_eq!(net.cut_capacity(&side), 0.0);
    }

    #[test]
    fn bipartite_bottleneck() {
        // s -> a,b (10 each); a,b -> t capped at 1.5 and 2.5.
        let mut net = FlowNetwork::new(4);
        net.add_arc(0, 1, 10.0);
        net.add_arc(0, 2, 10.0);
        net.add_arc(1, 3, 1.5);
        net.add_arc(2, 3, 2.5);
        let flow = net.max_flow(0, 3);
        assert!((flow - 4.0).abs() < 1e-12);
    }

    #[test]
    fn flow_equals_cut_on_random_networks() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..30 {
            let n = rng.random_range(4..12);
            let mut net = FlowNetwork::new(n);
            for u in 0..n {
                for v in 0..n {
                    if u != v && rng.random_bool(0.35) {
                        net.add_arc(u, v, rng.random_range(0.0..5.0));
                    }
                }
            }
            let flow = net.max_flow(0, n - 1);
            let side = net.min_cut_source_side(0, n - 1);
            assert!(side[0] && !side[n - 1]);
            let cut = net.cut_capacity(&side);
            assert!(
                (flow - cut).abs() <= 1e-9 * cut.abs().max(1.0),
                "flow {flow} vs cut {cut}"
            );
        }
    }
}
