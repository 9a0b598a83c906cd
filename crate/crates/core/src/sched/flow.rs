//! Exact min-cost bipartite assignment with region capacities.
//!
//! Jobs are matched to regions through a unit-capacity flow network
//! `source -> job -> region -> sink` solved by successive shortest paths.
//! Costs are converted to fixed-point integers so path comparisons are
//! exact; a secondary key folded into the low digits makes every tie
//! resolve towards lower region indices, then lower job indices.

use std::collections::VecDeque;

/// Fixed-point scale applied to floating costs.
const SCALE: f64 = (1u64 << 40) as f64;
/// Costs are clamped to this magnitude before scaling.
const COST_LIMIT: f64 = 1e9;

struct Edge {
    to: usize,
    cap: i32,
    cost: i128,
}

struct Network {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl Network {
    fn new(nodes: usize) -> Self {
        Self {
            edges: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: i32, cost: i128) {
        self.adj[from].push(self.edges.len());
        self.edges.push(Edge { to, cap, cost });
        self.adj[to].push(self.edges.len());
        self.edges.push(Edge {
            to: from,
            cap: 0,
            cost: -cost,
        });
    }

    /// Bellman-Ford (queue based) shortest path tree from `src`.
    fn shortest_paths(&self, src: usize) -> (Vec<Option<i128>>, Vec<Option<usize>>) {
        let n = self.adj.len();
        let mut dist: Vec<Option<i128>> = vec![None; n];
        let mut via: Vec<Option<usize>> = vec![None; n];
        let mut queued = vec![false; n];
        let mut queue = VecDeque::new();
        dist[src] = Some(0);
        queue.push_back(src);
        queued[src] = true;
        while let Some(u) = queue.pop_front() {
            queued[u] = false;
            let du = dist[u].expect("queued nodes have a distance");
            for &e in &self.adj[u] {
                let edge = &self.edges[e];
                if edge.cap <= 0 {
                    continue;
                }
                let nd = du + edge.cost;
                if dist[edge.to].is_none_or(|d| nd < d) {
                    dist[edge.to] = Some(nd);
                    via[edge.to] = Some(e);
                    if !queued[edge.to] {
                        queued[edge.to] = true;
                        queue.push_back(edge.to);
                    }
                }
            }
        }
        (dist, via)
    }
}

fn to_fixed(cost: f64) -> i128 {
    debug_assert!(!cost.is_nan(), "assignment cost is NaN");
    (cost.clamp(-COST_LIMIT, COST_LIMIT) * SCALE).round() as i128
}

/// Assigns as many jobs as possible, and among maximum assignments picks
/// the one of least total cost.
///
/// `cost` and `allowed` are row-major `jobs x regions`. Returns the chosen
/// region per job (`None` when a job could not be placed).
pub fn min_cost_assignment(
    jobs: usize,
    regions: usize,
    cost: &[f64],
    allowed: &[bool],
    capacity: &[usize],
) -> Vec<Option<usize>> {
    assert_eq!(cost.len(), jobs * regions);
    assert_eq!(allowed.len(), jobs * regions);
    assert_eq!(capacity.len(), regions);
    if jobs == 0 || regions == 0 {
        return vec![None; jobs];
    }

    // Lexicographic weights: primary cost, then sum of region indices,
    // then -sum(job * region) which gives lower jobs the lower regions.
    let cross_span = (jobs * jobs * regions) as i128 + 1;
    let region_span = (jobs * regions) as i128 * cross_span + cross_span;
    let tie = |m: usize, n: usize| n as i128 * cross_span - (m * n) as i128;

    let source = 0;
    let sink = jobs + regions + 1;
    let mut net = Network::new(jobs + regions + 2);
    for m in 0..jobs {
        net.add_edge(source, 1 + m, 1, 0);
    }
    let mut job_edges = Vec::new();
    for m in 0..jobs {
        for n in 0..regions {
            if allowed[m * regions + n] && capacity[n] > 0 {
                let c = to_fixed(cost[m * regions + n]) * region_span + tie(m, n);
                job_edges.push((m, n, net.edges.len()));
                net.add_edge(1 + m, 1 + jobs + n, 1, c);
            }
        }
    }
    for (n, &cap) in capacity.iter().enumerate() {
        if cap > 0 {
            let cap = i32::try_from(cap.min(jobs)).unwrap_or(i32::MAX);
            net.add_edge(1 + jobs + n, sink, cap, 0);
        }
    }

    for _ in 0..jobs {
        let (dist, via) = net.shortest_paths(source);
        if dist[sink].is_none() {
            break;
        }
        let mut v = sink;
        while v != source {
            let e = via[v].expect("path exists");
            net.edges[e].cap -= 1;
            net.edges[e ^ 1].cap += 1;
            v = net.edges[e ^ 1].to;
        }
    }

    let mut placement = vec![None; jobs];
    for (m, n, e) in job_edges {
        if net.edges[e].cap == 0 {
            placement[m] = Some(n);
        }
    }
    placement
}
