//! Anonymous port-labeled graphs.
//!
//! Nodes carry no labels visible to agents; the only navigational structure
//! is the local port numbering: at a node of degree `d`, the incident edges
//! are numbered `0..d`. Node ids exist purely for the harness and the
//! advice oracle.

mod build;
mod paths;

pub use build::{
    attach_path, build_clique_chain, build_oriented_ring, clique_edge_color, color_even_clique,
    join_copies_at, CliqueChainSpec, CliqueEdge, DesignatedNodes,
};
pub use paths::{path_degree_sum, shortest_path_ports, PathPorts};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Local port number at a node, in `0..degree`.
pub type Port = usize;

/// Index of a node in a [`PortGraph`]. Invisible to agents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "v{}", self.0)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph must have at least {min} nodes, got {got}")]
    InvalidSize { min: usize, got: usize },
    #[error("clique size must be even, got {0}")]
    OddCliqueSize(usize),
    #[error("invalid clique-chain spec: {0}")]
    InvalidSpec(String),
    #[error("node {0} out of range (graph has {1} nodes)")]
    NodeOutOfRange(usize, usize),
    #[error("degenerate node pair: both endpoints are node {0}")]
    DegeneratePair(usize),
    #[error("node {node} has no port {port} (degree {degree})")]
    NoSuchPort {
        node: usize,
        port: Port,
        degree: usize,
    },
    #[error("port {port} at node {node} is not symmetric: leads to ({to}, {arrival}) but the reverse entry is {reverse:?}")]
    AsymmetricPort {
        node: usize,
        port: Port,
        to: usize,
        arrival: Port,
        reverse: Option<(usize, usize)>,
    },
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("parallel edge between nodes {0} and {1}")]
    ParallelEdge(usize, usize),
    #[error("graph is not connected: node {0} unreachable from node 0")]
    Disconnected(usize),
    #[error("declared node count {declared} does not match adjacency length {actual}")]
    NodeCountMismatch { declared: usize, actual: usize },
    #[error("graph JSON malformed: {0}")]
    MalformedJson(String),
}

/// An undirected, connected, simple graph with per-node local port numbering.
///
/// `adj[v][p]` is the `(neighbor, arrival_port)` pair reached by taking port
/// `p` at node `v`; the arrival port is the port number of the same edge at
/// the neighbor. Values are immutable after construction, so a graph can be
/// shared freely across concurrent experiment runs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct PortGraph {
    adj: Vec<Vec<(NodeId, Port)>>,
}

/// Wire format: `{"n": int, "adj": [[[neighbor, arrival_port], ...], ...]}`.
#[derive(Serialize, Deserialize)]
struct RawGraph {
    n: usize,
    adj: Vec<Vec<(usize, usize)>>,
}

impl From<PortGraph> for RawGraph {
    fn from(g: PortGraph) -> Self {
        RawGraph {
            n: g.node_count(),
            adj: g
                .adj
                .into_iter()
                .map(|row| row.into_iter().map(|(v, q)| (v.0, q)).collect())
                .collect(),
        }
    }
}

impl TryFrom<RawGraph> for PortGraph {
    type Error = GraphError;

    fn try_from(raw: RawGraph) -> Result<Self, GraphError> {
        if raw.n != raw.adj.len() {
            return Err(GraphError::NodeCountMismatch {
                declared: raw.n,
                actual: raw.adj.len(),
            });
        }
        PortGraph::from_adjacency(raw.adj)
    }
}

impl PortGraph {
    /// Builds a graph from explicit port tables and checks every invariant:
    /// port completeness and symmetry, simplicity, connectivity.
    pub fn from_adjacency(adj: Vec<Vec<(usize, usize)>>) -> Result<Self, GraphError> {
        let g = PortGraph {
            adj: adj
                .into_iter()
                .map(|row| row.into_iter().map(|(v, q)| (NodeId(v), q)).collect())
                .collect(),
        };
        g.validate()?;
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adj[v.0].len()
    }

    /// The full port table of `v`, indexed by port number.
    pub fn ports(&self, v: NodeId) -> &[(NodeId, Port)] {
        &self.adj[v.0]
    }

    /// Takes port `p` at `v`; returns the neighbor and the arrival port.
    pub fn step(&self, v: NodeId, p: Port) -> Result<(NodeId, Port), GraphError> {
        self.adj[v.0].get(p).copied().ok_or(GraphError::NoSuchPort {
            node: v.0,
            port: p,
            degree: self.degree(v),
        })
    }

    /// Port at `u` whose edge leads to `v`, if the two nodes are adjacent.
    pub fn port_towards(&self, u: NodeId, v: NodeId) -> Option<Port> {
        self.adj[u.0].iter().position(|&(w, _)| w == v)
    }

    pub fn contains(&self, v: NodeId) -> bool {
        v.0 < self.node_count()
    }

    pub(crate) fn check_node(&self, v: NodeId) -> Result<(), GraphError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(GraphError::NodeOutOfRange(v.0, self.node_count()))
        }
    }

    /// Checks all structural invariants. Constructor outputs always pass;
    /// this is the gate for graphs read from untrusted JSON.
    pub fn validate(&self) -> Result<(), GraphError> {
        let n = self.node_count();
        if n == 0 {
            return Err(GraphError::InvalidSize { min: 1, got: 0 });
        }
        for (u, row) in self.adj.iter().enumerate() {
            let mut seen = vec![false; n];
            for (p, &(v, q)) in row.iter().enumerate() {
                if v.0 >= n {
                    return Err(GraphError::NodeOutOfRange(v.0, n));
                }
                if v.0 == u {
                    return Err(GraphError::SelfLoop(u));
                }
                if seen[v.0] {
                    return Err(GraphError::ParallelEdge(u, v.0));
                }
                seen[v.0] = true;
                let reverse = self.adj[v.0].get(q).copied();
                if reverse != Some((NodeId(u), p)) {
                    return Err(GraphError::AsymmetricPort {
                        node: u,
                        port: p,
                        to: v.0,
                        arrival: q,
                        reverse: reverse.map(|(w, r)| (w.0, r)),
                    });
                }
            }
        }
        // Connectivity by plain traversal from node 0.
        let mut reached = vec![false; n];
        reached[0] = true;
        let mut stack = vec![NodeId(0)];
        while let Some(u) = stack.pop() {
            for &(v, _) in &self.adj[u.0] {
                if !reached[v.0] {
                    reached[v.0] = true;
                    stack.push(v);
                }
            }
        }
        if let Some(v) = reached.iter().position(|&r| !r) {
            return Err(GraphError::Disconnected(v));
        }
        Ok(())
    }

    /// Serializes to the wire format `{"n": ..., "adj": ...}`.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("graph serialization cannot fail")
    }

    pub fn from_json_str(s: &str) -> Result<Self, GraphError> {
        serde_json::from_str(s).map_err(|e| GraphError::MalformedJson(e.to_string()))
    }

    /// Internal constructor for builders that assemble port tables directly.
    /// Callers must produce a graph that satisfies all invariants; this is
    /// debug-asserted rather than re-checked on every construction.
    pub(crate) fn from_parts(adj: Vec<Vec<(NodeId, Port)>>) -> Self {
        let g = PortGraph { adj };
        debug_assert_eq!(g.validate(), Ok(()));
        g
    }

    pub(crate) fn into_parts(self) -> Vec<Vec<(NodeId, Port)>> {
        self.adj
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_node_path() -> PortGraph {
        PortGraph::from_adjacency(vec![vec![(1, 0)], vec![(0, 0)]]).unwrap()
    }

    #[test]
    fn two_node_path_is_valid() {
        let g = two_node_path();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.degree(NodeId(0)), 1);
        assert_eq!(g.step(NodeId(0), 0), Ok((NodeId(1), 0)));
    }

    #[test]
    fn rejects_empty_graph() {
        assert_eq!(
            PortGraph::from_adjacency(vec![]),
            Err(GraphError::InvalidSize { min: 1, got: 0 })
        );
    }

    #[test]
    fn rejects_asymmetric_ports() {
        // Port 0 at node 0 claims arrival port 1, but node 1 has degree 1.
        let err = PortGraph::from_adjacency(vec![vec![(1, 1)], vec![(0, 0)]]).unwrap_err();
        assert!(matches!(
            err,
            GraphError::AsymmetricPort {
                node: 0,
                port: 0,
                ..
            }
        ));
    }

    #[test]
    fn rejects_self_loop() {
        let err = PortGraph::from_adjacency(vec![vec![(0, 0)]]).unwrap_err();
        assert_eq!(err, GraphError::SelfLoop(0));
    }

    #[test]
    fn rejects_parallel_edges() {
        let err = PortGraph::from_adjacency(vec![vec![(1, 0), (1, 1)], vec![(0, 0), (0, 1)]])
            .unwrap_err();
        assert_eq!(err, GraphError::ParallelEdge(0, 1));
    }

    #[test]
    fn rejects_disconnected() {
        let err =
            PortGraph::from_adjacency(vec![vec![(1, 0)], vec![(0, 0)], vec![(3, 0)], vec![(2, 0)]])
                .unwrap_err();
        assert_eq!(err, GraphError::Disconnected(2));
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let g = two_node_path();
        let s = g.to_json_string();
        assert_eq!(s, r#"{"n":2,"adj":[[[1,0]],[[0,0]]]}"#);
        let back = PortGraph::from_json_str(&s).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_json_string(), s);
    }

    #[test]
    fn json_rejects_mismatched_node_count() {
        let err = PortGraph::from_json_str(r#"{"n":3,"adj":[[[1,0]],[[0,0]]]}"#).unwrap_err();
        assert!(matches!(err, GraphError::MalformedJson(_)));
    }

    #[test]
    fn json_rejects_invalid_structure() {
        let err = PortGraph::from_json_str(r#"{"n":1,"adj":[[[0,0]]]}"#).unwrap_err();
        assert!(matches!(err, GraphError::MalformedJson(_)));
    }

    #[test]
    fn graphs_are_shareable_across_threads() {
        fn assert_shareable<T: Send + Sync>() {}
        assert_shareable::<PortGraph>();
        assert_shareable::<crate::SimResult>();
        assert_shareable::<crate::AdviceString>();
    }
}
