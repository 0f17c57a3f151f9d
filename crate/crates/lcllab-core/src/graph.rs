//! Anonymous simple connected undirected graphs.
//!
//! Nodes carry no identifiers visible to verifiers; the `NodeId` indices used
//! here are implementation handles for the harness only. All operations are
//! pure and the structures are immutable after construction, so they can be
//! shared freely across worker threads.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of a node in a [`Graph`], valid in `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("parallel edge ({0}, {1})")]
    ParallelEdge(usize, usize),
    #[error("node index {0} out of range (n = {1})")]
    NodeOutOfRange(usize, usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph must have at least one node")]
    Empty,
    #[error("malformed edge-list input: {0}")]
    Parse(String),
}

/// Simple connected undirected graph over nodes `0..n`.
///
/// Adjacency lists are kept sorted; constructors reject self-loops, parallel
/// edges and disconnected inputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    adj: Vec<Vec<NodeId>>,
}

impl Graph {
    /// Builds a graph from an edge list over nodes `0..n`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n {
                return Err(GraphError::NodeOutOfRange(u, n));
            }
            if v >= n {
                return Err(GraphError::NodeOutOfRange(v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if adj[u].contains(&NodeId(v)) {
                return Err(GraphError::ParallelEdge(u, v));
            }
            adj[u].push(NodeId(v));
            adj[v].push(NodeId(u));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let g = Graph { adj };
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    /// Builds a path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        Self::from_edges(n, &edges).expect("path is simple and connected")
    }

    /// Builds a cycle on `n >= 3` nodes.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 nodes");
        let mut edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        edges.push((n - 1, 0));
        Self::from_edges(n, &edges).expect("cycle is simple and connected")
    }

    /// Parses the edge-list text format: first line `n m`, then `m` lines `u v`
    /// with 0-based indices. Rejects inputs that are not simple and connected.
    pub fn parse_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| GraphError::Parse("missing header line".into()))?;
        let mut it = header.split_whitespace();
        let n: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| GraphError::Parse(format!("bad header: {header:?}")))?;
        let m: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| GraphError::Parse(format!("bad header: {header:?}")))?;
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let line = lines
                .next()
                .ok_or_else(|| GraphError::Parse("fewer edge lines than declared".into()))?;
            let mut it = line.split_whitespace();
            let u: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| GraphError::Parse(format!("bad edge line: {line:?}")))?;
            let v: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| GraphError::Parse(format!("bad edge line: {line:?}")))?;
            edges.push((u, v));
        }
        if lines.next().is_some() {
            return Err(GraphError::Parse("more edge lines than declared".into()));
        }
        Self::from_edges(n, &edges)
    }

    /// Serializes into the edge-list text format accepted by [`Graph::parse_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.node_count(), self.edge_count());
        for (u, nbrs) in self.adj.iter().enumerate() {
            for &NodeId(v) in nbrs {
                if u < v {
                    out.push_str(&format!("{u} {v}\n"));
                }
            }
        }
        out
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.node_count()).map(NodeId)
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adj[v.0]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adj[v.0].len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adj[u.0].binary_search(&v).is_ok()
    }

    fn is_connected(&self) -> bool {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        seen[0] = true;
        queue.push_back(NodeId(0));
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &w in self.neighbors(u) {
                if !seen[w.0] {
                    seen[w.0] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == n
    }

    /// BFS distances from `v` to every node.
    pub fn distances_from(&self, v: NodeId) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.node_count()];
        let mut queue = VecDeque::new();
        dist[v.0] = 0;
        queue.push_back(v);
        while let Some(u) = queue.pop_front() {
            for &w in self.neighbors(u) {
                if dist[w.0] == usize::MAX {
                    dist[w.0] = dist[u.0] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// The k-hop neighborhood `N_k(v)`, including `v` itself, in sorted order.
    pub fn neighborhood(&self, v: NodeId, k: usize) -> Vec<NodeId> {
        self.distances_from(v)
            .iter()
            .enumerate()
            .filter(|&(_, &d)| d <= k)
            .map(|(i, _)| NodeId(i))
            .collect()
    }

    /// Whether the graph contains a cycle. A connected graph has a cycle
    /// exactly when it has at least as many edges as nodes.
    pub fn has_cycle(&self) -> bool {
        self.edge_count() >= self.node_count()
    }

    /// The 2-core: iteratively delete degree-1 nodes until none remain.
    ///
    /// In a connected graph the surviving nodes are exactly the nodes lying on
    /// a cycle or on a path connecting two cycles; the result is empty iff the
    /// graph is a tree. Returned sorted.
    pub fn core_nodes(&self) -> Vec<NodeId> {
        let n = self.node_count();
        let mut deg: Vec<usize> = (0..n).map(|v| self.degree(NodeId(v))).collect();
        let mut removed = vec![false; n];
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
        while let Some(v) = queue.pop_front() {
            if removed[v] {
                continue;
            }
            removed[v] = true;
            for &NodeId(w) in self.neighbors(NodeId(v)) {
                if !removed[w] {
                    deg[w] -= 1;
                    if deg[w] <= 1 {
                        queue.push_back(w);
                    }
                }
            }
        }
        (0..n).filter(|&v| !removed[v]).map(NodeId).collect()
    }

    /// A proper 2-coloring with node 0 colored 0, or `None` if the graph
    /// contains an odd cycle.
    pub fn two_coloring(&self) -> Option<Vec<u32>> {
        let n = self.node_count();
        let mut color = vec![u32::MAX; n];
        let mut queue = VecDeque::new();
        color[0] = 0;
        queue.push_back(NodeId(0));
        while let Some(u) = queue.pop_front() {
            for &w in self.neighbors(u) {
                if color[w.0] == u32::MAX {
                    color[w.0] = 1 - color[u.0];
                    queue.push_back(w);
                } else if color[w.0] == color[u.0] {
                    return None;
                }
            }
        }
        Some(color)
    }

    pub fn is_bipartite(&self) -> bool {
        self.two_coloring().is_some()
    }

    /// All walks of length `len` starting at `v` that never immediately
    /// backtrack. Each walk is returned including the start node.
    fn arms(&self, v: NodeId, len: usize) -> Vec<Vec<NodeId>> {
        let mut out = Vec::new();
        let mut walk = vec![v];
        self.extend_arm(&mut walk, len, &mut out);
        out
    }

    fn extend_arm(&self, walk: &mut Vec<NodeId>, len: usize, out: &mut Vec<Vec<NodeId>>) {
        if walk.len() == len + 1 {
            out.push(walk.clone());
            return;
        }
        let last = *walk.last().unwrap();
        let forbidden = walk.len().checked_sub(2).map(|i| walk[i]);
        for &w in self.neighbors(last) {
            if Some(w) != forbidden {
                walk.push(w);
                self.extend_arm(walk, len, out);
                walk.pop();
            }
        }
    }

    /// All routes of length `2 * half_len` (node count `2 * half_len + 1`)
    /// with `v` as the middle node. Routes forbid immediate backtracking
    /// (`v_i != v_{i+2}`) but may wind repeatedly around a cycle; every node of
    /// such a route lies in `N_{half_len}(v)`. Both orientations of each
    /// physical route are returned.
    pub fn centered_routes(&self, v: NodeId, half_len: usize) -> Vec<Route> {
        assert!(half_len >= 1, "centered_routes requires half_len >= 1");
        let arms = self.arms(v, half_len);
        let mut out = Vec::new();
        for left in &arms {
            for right in &arms {
                // The two steps flanking the center must differ (v_i != v_{i+2}).
                if left[1] == right[1] {
                    continue;
                }
                let mut nodes: Vec<NodeId> = left[1..].iter().rev().copied().collect();
                nodes.push(v);
                nodes.extend_from_slice(&right[1..]);
                out.push(Route { nodes });
            }
        }
        out.sort_unstable_by(|a, b| a.nodes.cmp(&b.nodes));
        out
    }
}

/// A walk without immediate backtracking: consecutive nodes adjacent and
/// `v_i != v_{i+2}` for all `i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Route {
    nodes: Vec<NodeId>,
}

impl Route {
    /// Validates adjacency and the no-backtracking invariant against `g`.
    pub fn new(g: &Graph, nodes: Vec<NodeId>) -> Result<Self, GraphError> {
        for w in nodes.windows(2) {
            if !g.has_edge(w[0], w[1]) {
                return Err(GraphError::Parse(format!(
                    "route nodes {} and {} not adjacent",
                    w[0], w[1]
                )));
            }
        }
        for w in nodes.windows(3) {
            if w[0] == w[2] {
                return Err(GraphError::Parse(format!(
                    "route backtracks at {}",
                    w[1]
                )));
            }
        }
        Ok(Route { nodes })
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.len() <= 1
    }

    pub fn midpoint(&self) -> NodeId {
        self.nodes[self.nodes.len() / 2]
    }
}

/// Cycle detection by DFS back-edge, used in tests as an oracle independent of
/// the edge-count argument in [`Graph::has_cycle`].
pub fn has_cycle_dfs(g: &Graph) -> bool {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut stack = vec![(NodeId(0), None::<NodeId>)];
    seen[0] = true;
    while let Some((u, parent)) = stack.pop() {
        for &w in g.neighbors(u) {
            if Some(w) == parent {
                continue;
            }
            if seen[w.0] {
                return true;
            }
            seen[w.0] = true;
            stack.push((w, Some(u)));
        }
    }
    false
}
