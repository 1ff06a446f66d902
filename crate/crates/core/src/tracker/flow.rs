//! Minimum-cost node-disjoint paths in a DAG via successive shortest paths.
//!
//! Each detection node is split into an in/out pair joined by a unit
//! capacity edge carrying the node cost, so paths cannot share detections.
//! The source feeds every in-node and every out-node drains into the sink.
//! Paths are augmented one unit at a time along the cheapest residual path
//! (Dijkstra on reduced costs) until that path stops being negative, which
//! gives the minimum total cost over all path counts.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Paths problem over nodes `0..node_cost.len()`. Every edge `(u, v, cost)`
/// must satisfy `u < v`, i.e. nodes are listed in a topological order.
#[derive(Debug, Clone, Default)]
pub struct PathProblem {
    pub node_cost: Vec<f64>,
    pub entry_cost: f64,
    pub exit_cost: f64,
    pub edges: Vec<(usize, usize, f64)>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PathSolution {
    /// Node sequences, ordered by their first node.
    pub paths: Vec<Vec<usize>>,
    pub total_cost: f64,
    /// Cost of each accepted augmentation, in order; non-decreasing.
    pub augment_costs: Vec<f64>,
}

impl PathProblem {
    /// Cost of using `path` as one trajectory, or `None` if some step is
    /// not an edge.
    pub fn path_cost(&self, path: &[usize]) -> Option<f64> {
        let mut cost = self.entry_cost + self.exit_cost;
        for (k, &n) in path.iter().enumerate() {
            cost += self.node_cost[n];
            if k > 0 {
                let u = path[k - 1];
                cost += self
                    .edges
                    .iter()
                    .find(|&&(a, b, _)| a == u && b == n)
                    .map(|e| e.2)?;
            }
        }
        Some(cost)
    }
}

#[derive(Debug, Clone)]
struct Edge {
    to: usize,
    cap: i32,
    cost: f64,
}

struct Graph {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    fn new(n: usize) -> Self {
        Graph {
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    /// Adds a unit edge and its residual twin; returns the forward index.
    fn add(&mut self, from: usize, to: usize, cost: f64) -> usize {
        let id = self.edges.len();
        self.edges.push(Edge { to, cap: 1, cost });
        self.edges.push(Edge { to: from, cap: 0, cost: -cost });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        id
    }
}

const SOURCE: usize = 0;
const SINK: usize = 1;

fn in_node(i: usize) -> usize {
    2 + 2 * i
}

fn out_node(i: usize) -> usize {
    3 + 2 * i
}

#[derive(PartialEq)]
struct Queued {
    dist: f64,
    node: usize,
}

impl Eq for Queued {}

impl Ord for Queued {
    // min-heap on distance, then lower node index
    fn cmp(&self, other: &Self) -> Ordering {
        other.dist.total_cmp(&self.dist).then(other.node.cmp(&self.node))
    }
}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn solve(problem: &PathProblem) -> PathSolution {
    let n = problem.node_cost.len();
    if n == 0 {
        return PathSolution::default();
    }
    let total = 2 + 2 * n;
    let mut g = Graph::new(total);
    let mut entry_edge = Vec::with_capacity(n);
    let mut preds: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for i in 0..n {
        entry_edge.push(g.add(SOURCE, in_node(i), problem.entry_cost));
        g.add(in_node(i), out_node(i), problem.node_cost[i]);
        g.add(out_node(i), SINK, problem.exit_cost);
    }
    let mut transition_edges = Vec::with_capacity(problem.edges.len());
    for &(u, v, c) in &problem.edges {
        assert!(u < v && v < n, "edges must point forward in node order");
        transition_edges.push((u, v, g.add(out_node(u), in_node(v), c)));
        preds[v].push((u, c));
    }

    // exact initial potentials by dynamic programming over the DAG
    let mut pot = vec![0.0; total];
    let mut best_exit = f64::INFINITY;
    for i in 0..n {
        let reach = preds[i]
            .iter()
            .map(|&(u, c)| pot[out_node(u)] + c)
            .fold(problem.entry_cost, f64::min);
        pot[in_node(i)] = reach;
        pot[out_node(i)] = reach + problem.node_cost[i];
        best_exit = best_exit.min(pot[out_node(i)] + problem.exit_cost);
    }
    pot[SINK] = best_exit;

    let mut augment_costs = Vec::new();
    let mut dist = vec![f64::INFINITY; total];
    let mut prev_edge = vec![usize::MAX; total];
    loop {
        dist.fill(f64::INFINITY);
        prev_edge.fill(usize::MAX);
        dist[SOURCE] = 0.0;
        let mut heap = BinaryHeap::new();
        heap.push(Queued { dist: 0.0, node: SOURCE });
        while let Some(Queued { dist: d, node: u }) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &eid in &g.adj[u] {
                let e = &g.edges[eid];
                if e.cap <= 0 {
                    continue;
                }
                let reduced = (e.cost + pot[u] - pot[e.to]).max(0.0);
                let nd = d + reduced;
                if nd < dist[e.to] {
                    dist[e.to] = nd;
                    prev_edge[e.to] = eid;
                    heap.push(Queued { dist: nd, node: e.to });
                }
            }
        }
        if !dist[SINK].is_finite() {
            break;
        }

        let mut path = Vec::new();
        let mut v = SINK;
        while v != SOURCE {
            let eid = prev_edge[v];
            path.push(eid);
            v = g.edges[eid ^ 1].to;
        }
        let cost: f64 = path.iter().map(|&eid| g.edges[eid].cost).sum();
        if cost >= -1e-12 {
            break;
        }
        for &eid in &path {
            g.edges[eid].cap -= 1;
            g.edges[eid ^ 1].cap += 1;
        }
        augment_costs.push(cost);

        let reached = dist.iter().copied().filter(|d| d.is_finite()).fold(0.0, f64::max);
        for (p, d) in pot.iter_mut().zip(&dist) {
            *p += if d.is_finite() { *d } else { reached };
        }
    }

    let mut next = vec![None; n];
    for (&(u, v, eid), &(_, _, c)) in transition_edges.iter().zip(&problem.edges) {
        if g.edges[eid].cap == 0 {
            next[u] = Some((v, c));
        }
    }
    let mut paths = Vec::new();
    let mut total_cost = 0.0;
    for (i, &eid) in entry_edge.iter().enumerate() {
        if g.edges[eid].cap == 0 {
            let mut p = vec![i];
            let mut cur = i;
            total_cost += problem.entry_cost + problem.exit_cost + problem.node_cost[i];
            while let Some((v, c)) = next[cur] {
                p.push(v);
                total_cost += c + problem.node_cost[v];
                cur = v;
            }
            paths.push(p);
        }
    }
    PathSolution {
        paths,
        total_cost,
        augment_costs,
    }
}
