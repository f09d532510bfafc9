//! Constructors for the graph families the experiments run on: oriented
//! rings, edge-colored clique chains, path attachments, and joined double
//! copies.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{GraphError, NodeId, Port, PortGraph};

/// Oriented ring on `n >= 3` nodes: at every node, port 0 goes clockwise
/// (toward the next index) and port 1 counterclockwise.
pub fn build_oriented_ring(n: usize) -> Result<PortGraph, GraphError> {
    if n < 3 {
        return Err(GraphError::InvalidSize { min: 3, got: n });
    }
    let adj = (0..n)
        .map(|i| {
            vec![
                (NodeId((i + 1) % n), 1), // clockwise, enters by port 1
                (NodeId((i + n - 1) % n), 0),
            ]
        })
        .collect();
    Ok(PortGraph::from_parts(adj))
}

/// Color of edge `{a, b}` (1-based node indices in `1..=k`) under the
/// round-robin 1-factorization of the complete graph `K_k`, `k` even.
///
/// Node `k` is the hub; the others sit on a circle. With 0-based indices
/// `i = a-1`, `j = b-1`: circle edges get `(i + j) mod (k-1)`, hub edges
/// `(2i) mod (k-1)`. Proper for even `k` because 2 is invertible mod the
/// odd number `k-1`.
pub fn clique_edge_color(k: usize, a: usize, b: usize) -> usize {
    debug_assert!(k.is_multiple_of(2) && a != b && (1..=k).contains(&a) && (1..=k).contains(&b));
    let (i, j) = (a - 1, b - 1);
    let hub = k - 1;
    if j == hub {
        (2 * i) % (k - 1)
    } else if i == hub {
        (2 * j) % (k - 1)
    } else {
        (i + j) % (k - 1)
    }
}

/// Proper edge coloring of `K_k` with colors `{0, ..., k-2}`, as a map from
/// unordered node pairs (1-based, stored `(min, max)`) to colors. The color
/// of an edge doubles as its port number at both endpoints.
pub fn color_even_clique(k: usize) -> Result<BTreeMap<(usize, usize), usize>, GraphError> {
    if !k.is_multiple_of(2) || k == 0 {
        return Err(GraphError::OddCliqueSize(k));
    }
    let mut colors = BTreeMap::new();
    for a in 1..=k {
        for b in (a + 1)..=k {
            colors.insert((a, b), clique_edge_color(k, a, b));
        }
    }
    Ok(colors)
}

/// An edge of the clique not incident to the gate node `v_1`: an unordered
/// pair of 1-based clique-node indices with `2 <= a < b <= k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CliqueEdge {
    pub a: usize,
    pub b: usize,
}

impl CliqueEdge {
    pub fn new(a: usize, b: usize) -> Self {
        CliqueEdge { a, b }
    }
}

impl std::fmt::Display for CliqueEdge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

/// The edge-choice sequence `(e_1, ..., e_l)` identifying one member of the
/// clique-chain family: clique `i`'s edge `e_i` is subdivided by the next
/// gate. `k` must be even and at least 4 (for `k = 2` no edge avoids the
/// gate and the family is empty).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CliqueChainSpec {
    pub k: usize,
    pub edges: Vec<CliqueEdge>,
}

impl CliqueChainSpec {
    pub fn new(k: usize, edges: Vec<CliqueEdge>) -> Result<Self, GraphError> {
        let spec = CliqueChainSpec { k, edges };
        spec.check()?;
        Ok(spec)
    }

    pub fn ell(&self) -> usize {
        self.edges.len()
    }

    pub fn check(&self) -> Result<(), GraphError> {
        if !self.k.is_multiple_of(2) {
            return Err(GraphError::OddCliqueSize(self.k));
        }
        if self.k < 4 {
            return Err(GraphError::InvalidSpec(format!(
                "k must be at least 4, got {}",
                self.k
            )));
        }
        if self.edges.is_empty() {
            return Err(GraphError::InvalidSpec(
                "edge sequence must be non-empty".into(),
            ));
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.a < 2 || e.a >= e.b || e.b > self.k {
                return Err(GraphError::InvalidSpec(format!(
                    "edge {} of clique {} must satisfy 2 <= a < b <= {}",
                    e,
                    i + 1,
                    self.k
                )));
            }
        }
        Ok(())
    }

    /// Node id of gate `g_i` (1-based, `i` in `1..=ell+1`) under the fixed
    /// node layout of [`build_clique_chain`]: clique `H_i` occupies ids
    /// `(i-1)*k .. i*k`, with `v_j` at `(i-1)*k + (j-1)`.
    pub fn gate_id(&self, i: usize) -> NodeId {
        debug_assert!((1..=self.ell() + 1).contains(&i));
        NodeId((i - 1) * self.k)
    }
}

/// The distinguished nodes of a clique chain: the gates `g_1..g_{l+1}`,
/// with the agent start `g_1` and the treasure `g_{l+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignatedNodes {
    pub gates: Vec<NodeId>,
    pub agent_start: NodeId,
    pub treasure: NodeId,
}

/// Builds the clique-chain graph of `spec`: `l` copies of the colored
/// `K_k` where gate `g_{i+1}` subdivides edge `e_i` of clique `H_i` and is
/// simultaneously node `v_1` of `H_{i+1}`; a fresh degree-2 node `g_{l+1}`
/// subdivides `e_l`. Total size `k*l + 1`.
///
/// Ports: clique ports are the edge colors and stay unchanged (the port
/// that was `c(e_i)` at an endpoint of `e_i` now leads to the gate). At a
/// gate `g_i`, `1 < i <= l`, the two subdivision ports are `k-1` toward the
/// smaller-index endpoint and `k` toward the larger. At `g_{l+1}` they are
/// 0 and 1, with 0 toward the smaller-index endpoint.
pub fn build_clique_chain(
    spec: &CliqueChainSpec,
) -> Result<(PortGraph, DesignatedNodes), GraphError> {
    spec.check()?;
    let (k, ell) = (spec.k, spec.ell());
    let n = k * ell + 1;
    let mut adj: Vec<Vec<(NodeId, Port)>> = vec![Vec::new(); n];
    let node = |clique: usize, v: usize| NodeId((clique - 1) * k + (v - 1));

    let set = |id: NodeId, p: Port, to: NodeId, q: Port, adj: &mut Vec<Vec<(NodeId, Port)>>| {
        let row = &mut adj[id.0];
        if row.len() <= p {
            row.resize(p + 1, (NodeId(usize::MAX), 0));
        }
        row[p] = (to, q);
    };

    for i in 1..=ell {
        let sub = spec.edges[i - 1];
        let gate = spec.gate_id(i + 1);
        // Subdivision ports at the gate: interior gates use k-1/k, the
        // treasure uses 0/1; smaller-index endpoint first either way.
        let (gp_small, gp_large) = if i < ell { (k - 1, k) } else { (0, 1) };
        for a in 1..=k {
            for b in (a + 1)..=k {
                let c = clique_edge_color(k, a, b);
                if sub == CliqueEdge::new(a, b) {
                    set(node(i, a), c, gate, gp_small, &mut adj);
                    set(gate, gp_small, node(i, a), c, &mut adj);
                    set(node(i, b), c, gate, gp_large, &mut adj);
                    set(gate, gp_large, node(i, b), c, &mut adj);
                } else {
                    set(node(i, a), c, node(i, b), c, &mut adj);
                    set(node(i, b), c, node(i, a), c, &mut adj);
                }
            }
        }
    }

    let gates: Vec<NodeId> = (1..=ell + 1).map(|i| spec.gate_id(i)).collect();
    let designated = DesignatedNodes {
        agent_start: gates[0],
        treasure: gates[ell],
        gates,
    };
    Ok((PortGraph::from_parts(adj), designated))
}

/// Appends a path of `extra` fresh nodes at `at`. The new edge at `at`
/// takes the next free port there; interior path nodes use port 0 toward
/// `at` and port 1 away. `extra = 0` returns the graph unchanged.
pub fn attach_path(g: &PortGraph, at: NodeId, extra: usize) -> Result<PortGraph, GraphError> {
    g.check_node(at)?;
    if extra == 0 {
        return Ok(g.clone());
    }
    let n = g.node_count();
    let mut adj = g.clone().into_parts();
    adj[at.0].push((NodeId(n), 0));
    let attach_port = adj[at.0].len() - 1;
    for i in 0..extra {
        let id = n + i;
        let mut row = vec![if i == 0 {
            (at, attach_port)
        } else {
            (NodeId(id - 1), 1)
        }];
        if i + 1 < extra {
            row.push((NodeId(id + 1), 0));
        }
        adj.push(row);
    }
    Ok(PortGraph::from_parts(adj))
}

/// Two disjoint copies of `g` with the two copies of `w` joined by a new
/// edge, which takes the next free port at each copy of `w`. The second
/// copy of node `v` has id `v + n`; the returned pair is `(w, w + n)`.
/// For every node `v`, the distance between its two copies is
/// `2 * dist(v, w) + 1`.
pub fn join_copies_at(g: &PortGraph, w: NodeId) -> Result<(PortGraph, NodeId, NodeId), GraphError> {
    g.check_node(w)?;
    let n = g.node_count();
    let mut adj = g.clone().into_parts();
    let mut second: Vec<Vec<(NodeId, Port)>> = adj
        .iter()
        .map(|row| row.iter().map(|&(v, q)| (NodeId(v.0 + n), q)).collect())
        .collect();
    adj.append(&mut second);
    let bridge_port = adj[w.0].len();
    adj[w.0].push((NodeId(w.0 + n), bridge_port));
    adj[w.0 + n].push((w, bridge_port));
    Ok((PortGraph::from_parts(adj), w, NodeId(w.0 + n)))
}
