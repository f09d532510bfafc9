//! Shortest-path port-sequence extraction.
//!
//! The oracle needs, for a fixed shortest path between two nodes, the port
//! sequences in both directions. Path choice is made deterministic by
//! running the search from the destination and expanding neighbors in
//! ascending port order, freezing parent pointers at first discovery.

use super::{GraphError, NodeId, Port, PortGraph};

/// A fixed shortest path between two nodes, as port sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathPorts {
    pub distance: usize,
    /// Ports to take at consecutive nodes to walk from `u` to `v`.
    pub forward: Vec<Port>,
    /// Ports for the same path walked from `v` back to `u`.
    pub reverse: Vec<Port>,
}

struct Discovery {
    parent: NodeId,
    /// Port at this node leading to its parent.
    up: Port,
    /// Port at the parent leading back to this node.
    down: Port,
}

/// Breadth-first parent forest rooted at `root`, expanding ports in
/// ascending order.
fn bfs_parents(g: &PortGraph, root: NodeId) -> Vec<Option<Discovery>> {
    let mut found: Vec<Option<Discovery>> = (0..g.node_count()).map(|_| None).collect();
    let mut queue = std::collections::VecDeque::new();
    let mut seen = vec![false; g.node_count()];
    seen[root.0] = true;
    queue.push_back(root);
    while let Some(x) = queue.pop_front() {
        for (p, &(y, q)) in g.ports(x).iter().enumerate() {
            if !seen[y.0] {
                seen[y.0] = true;
                found[y.0] = Some(Discovery {
                    parent: x,
                    up: q,
                    down: p,
                });
                queue.push_back(y);
            }
        }
    }
    found
}

/// The node sequence of the chosen shortest path `u, ..., v`.
fn bfs_path(g: &PortGraph, u: NodeId, v: NodeId) -> Result<Vec<NodeId>, GraphError> {
    g.check_node(u)?;
    g.check_node(v)?;
    if u == v {
        return Err(GraphError::DegeneratePair(u.0));
    }
    let parents = bfs_parents(g, v);
    let mut path = vec![u];
    let mut at = u;
    while at != v {
        // Connectivity is a graph invariant, so a parent always exists.
        let d = parents[at.0]
            .as_ref()
            .ok_or(GraphError::Disconnected(at.0))?;
        at = d.parent;
        path.push(at);
    }
    Ok(path)
}

/// Distance and the two port sequences of a fixed shortest path between
/// distinct nodes `u` and `v`.
pub fn shortest_path_ports(g: &PortGraph, u: NodeId, v: NodeId) -> Result<PathPorts, GraphError> {
    g.check_node(u)?;
    g.check_node(v)?;
    if u == v {
        return Err(GraphError::DegeneratePair(u.0));
    }
    let parents = bfs_parents(g, v);
    let mut forward = Vec::new();
    let mut reverse = Vec::new();
    let mut at = u;
    while at != v {
        let d = parents[at.0]
            .as_ref()
            .ok_or(GraphError::Disconnected(at.0))?;
        forward.push(d.up);
        reverse.push(d.down);
        at = d.parent;
    }
    reverse.reverse();
    Ok(PathPorts {
        distance: forward.len(),
        forward,
        reverse,
    })
}

/// Sum of degrees over the nodes of the chosen shortest path after `u`,
/// through `v` inclusive. On any n-node graph this never exceeds `3n`.
pub fn path_degree_sum(g: &PortGraph, u: NodeId, v: NodeId) -> Result<usize, GraphError> {
    let path = bfs_path(g, u, v)?;
    Ok(path[1..].iter().map(|&x| g.degree(x)).sum())
}
