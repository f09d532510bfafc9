//! Shared helpers for integration suites: a seeded random connected graph
//! generator and an independent distance oracle (level-counting BFS with
//! no port-order dependence).

use std::collections::VecDeque;

use rdv_core::graph::{NodeId, PortGraph};

pub fn bfs_distance(g: &PortGraph, u: NodeId, v: NodeId) -> Option<usize> {
    let mut dist = vec![None; g.node_count()];
    dist[u.0] = Some(0);
    let mut queue = VecDeque::from([u]);
    while let Some(x) = queue.pop_front() {
        if x == v {
            return dist[x.0];
        }
        for &(y, _) in g.ports(x) {
            if dist[y.0].is_none() {
                dist[y.0] = Some(dist[x.0].unwrap() + 1);
                queue.push_back(y);
            }
        }
    }
    dist[v.0]
}

pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

/// Random connected simple graph with 2..=max_n nodes: a random spanning
/// tree plus extra edges, ports assigned in edge-insertion order.
pub fn random_connected_graph(max_n: usize, seed: u64) -> PortGraph {
    let mut rng = TestRng::new(seed);
    let n = 2 + rng.below(max_n - 1);
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.below(v), v));
    }
    for _ in 0..rng.below(2 * n) {
        let u = rng.below(n);
        let v = rng.below(n);
        let (u, v) = (u.min(v), u.max(v));
        if u != v && !edges.contains(&(u, v)) {
            edges.push((u, v));
        }
    }
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (u, v) in edges {
        let pu = adj[u].len();
        let pv = adj[v].len();
        adj[u].push((v, pv));
        adj[v].push((u, pu));
    }
    PortGraph::from_adjacency(adj).expect("generator produces valid graphs")
}
