//! Local views: the only input a verifier may read.
//!
//! A [`LocalView`] is the triple (induced subgraph on `N_k(v)`, restricted
//! labeling, center). Node identities inside a view are local re-indexings in
//! BFS order from the center; verifiers must not depend on them, which the
//! oracle module checks through view-isomorphism invariance tests.

use std::collections::VecDeque;

use crate::graph::{Graph, NodeId};
use crate::labelings::Labeling;

/// Induced subgraph on `N_k(center)` with the restricted labeling.
///
/// The center is always local index 0. Edges between two boundary nodes of
/// `N_k(v)` are included when both endpoints are in `N_k(v)` (induced-subgraph
/// semantics). `dist` holds the distance from the center, so the boundary is
/// exactly the set of nodes with `dist == radius`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalView {
    adj: Vec<Vec<usize>>,
    labels: Vec<u32>,
    dist: Vec<usize>,
    radius: usize,
}

impl LocalView {
    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn center(&self) -> usize {
        0
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn label(&self, local: usize) -> u32 {
        self.labels[local]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn neighbors(&self, local: usize) -> &[usize] {
        &self.adj[local]
    }

    pub fn degree(&self, local: usize) -> usize {
        self.adj[local].len()
    }

    /// Distance from the center.
    pub fn dist(&self, local: usize) -> usize {
        self.dist[local]
    }

    /// Nodes at exact distance `radius`, whose neighbor sets may be incomplete.
    pub fn boundary(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.node_count()).filter(move |&v| self.dist[v] == self.radius)
    }

    /// The view of radius `k` centered at `new_center`, carved out of this
    /// view, together with the map from sub-view locals to locals of `self`.
    ///
    /// The carved view is exact (equal to the view taken on the host graph)
    /// whenever `dist(new_center) + k <= radius`.
    pub fn subview(&self, new_center: usize, k: usize) -> (LocalView, Vec<usize>) {
        let (adj, dist, map) = bfs_restrict(&self.adj, new_center, k);
        let labels = map.iter().map(|&o| self.labels[o]).collect();
        (
            LocalView {
                adj,
                labels,
                dist,
                radius: k,
            },
            map,
        )
    }

    /// All routes of `2 * half_len + 1` local node indices centered at the
    /// view's center, mirroring [`Graph::centered_routes`].
    pub fn centered_routes(&self, half_len: usize) -> Vec<Vec<usize>> {
        assert!(half_len >= 1);
        let mut arms = Vec::new();
        let mut walk = vec![self.center()];
        self.extend_arm(&mut walk, half_len, &mut arms);
        let mut out = Vec::new();
        for left in &arms {
            for right in &arms {
                if left[1] == right[1] {
                    continue;
                }
                let mut nodes: Vec<usize> = left[1..].iter().rev().copied().collect();
                nodes.push(self.center());
                nodes.extend_from_slice(&right[1..]);
                out.push(nodes);
            }
        }
        out.sort_unstable();
        out
    }

    fn extend_arm(&self, walk: &mut Vec<usize>, len: usize, out: &mut Vec<Vec<usize>>) {
        if walk.len() == len + 1 {
            out.push(walk.clone());
            return;
        }
        let last = *walk.last().unwrap();
        let forbidden = walk.len().checked_sub(2).map(|i| walk[i]);
        for &w in &self.adj[last] {
            if Some(w) != forbidden {
                walk.push(w);
                self.extend_arm(walk, len, out);
                walk.pop();
            }
        }
    }
}

fn bfs_restrict(
    adj: &[Vec<usize>],
    center: usize,
    k: usize,
) -> (Vec<Vec<usize>>, Vec<usize>, Vec<usize>) {
    let n = adj.len();
    let mut dist = vec![usize::MAX; n];
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    dist[center] = 0;
    order.push(center);
    queue.push_back(center);
    while let Some(u) = queue.pop_front() {
        if dist[u] == k {
            continue;
        }
        for &w in &adj[u] {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                order.push(w);
                queue.push_back(w);
            }
        }
    }
    let mut local = vec![usize::MAX; n];
    for (i, &o) in order.iter().enumerate() {
        local[o] = i;
    }
    let sub_adj = order
        .iter()
        .map(|&o| {
            adj[o]
                .iter()
                .filter(|&&w| local[w] != usize::MAX)
                .map(|&w| local[w])
                .collect()
        })
        .collect();
    let sub_dist = order.iter().map(|&o| dist[o]).collect();
    (sub_adj, sub_dist, order)
}

/// The view `(G[N_k(v)], L[N_k(v)], v)`.
pub fn local_view(g: &Graph, l: &Labeling, v: NodeId, k: usize) -> LocalView {
    let (view, _) = local_view_with_map(g, l, v, k);
    view
}

/// Like [`local_view`] but also returns the map from local indices back to
/// graph node ids, for harness code that must relate view-level results to
/// graph nodes. Verifier logic itself never uses the map.
pub fn local_view_with_map(
    g: &Graph,
    l: &Labeling,
    v: NodeId,
    k: usize,
) -> (LocalView, Vec<NodeId>) {
    let frame = ViewFrame::new(g, v, k);
    let view = frame.instantiate(l);
    let map = frame.origin;
    (view, map)
}

/// Precomputed view structure for one (graph, center, radius); repeated
/// labelings can be instantiated without re-running the BFS. Used by the
/// exhaustive oracle loops.
#[derive(Debug, Clone)]
pub struct ViewFrame {
    adj: Vec<Vec<usize>>,
    dist: Vec<usize>,
    radius: usize,
    origin: Vec<NodeId>,
}

impl ViewFrame {
    pub fn new(g: &Graph, v: NodeId, k: usize) -> Self {
        let host: Vec<Vec<usize>> = g
            .nodes()
            .map(|u| g.neighbors(u).iter().map(|w| w.0).collect())
            .collect();
        let (adj, dist, order) = bfs_restrict(&host, v.0, k);
        ViewFrame {
            adj,
            dist,
            radius: k,
            origin: order.into_iter().map(NodeId).collect(),
        }
    }

    pub fn origin(&self) -> &[NodeId] {
        &self.origin
    }

    pub fn instantiate(&self, l: &Labeling) -> LocalView {
        LocalView {
            adj: self.adj.clone(),
            labels: self.origin.iter().map(|&o| l.get(o)).collect(),
            dist: self.dist.clone(),
            radius: self.radius,
        }
    }

    /// Overwrites `view`'s labels in place from `labels[node]`; the structure
    /// must have come from this frame.
    pub fn write_labels(&self, view: &mut LocalView, labels: &[u32]) {
        debug_assert_eq!(view.node_count(), self.origin.len());
        for (slot, &o) in view.labels.iter_mut().zip(&self.origin) {
            *slot = labels[o.0];
        }
    }
}
