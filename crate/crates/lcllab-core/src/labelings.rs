//! Labelings and the oracular labelers of the five schemes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, NodeId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabelingError {
    #[error("label {label} at node {node} exceeds alphabet size {alphabet}")]
    LabelOutOfRange { node: usize, label: u32, alphabet: u32 },
    #[error("labeling covers {got} nodes, graph has {want}")]
    WrongLength { got: usize, want: usize },
    #[error("graph does not satisfy the property required by this labeler")]
    NotInProperty,
    #[error("alphabet size must be at least 2")]
    AlphabetTooSmall,
    #[error("malformed labeling input: {0}")]
    Parse(String),
}

/// Total map node -> label over an alphabet `{0, .., alphabet_size - 1}`.
///
/// The size in bits of such a labeling is `ceil(log2(alphabet_size))`; it is
/// reported, never stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Labeling {
    labels: Vec<u32>,
    alphabet_size: u32,
}

impl Labeling {
    pub fn new(labels: Vec<u32>, alphabet_size: u32) -> Result<Self, LabelingError> {
        if alphabet_size < 2 {
            return Err(LabelingError::AlphabetTooSmall);
        }
        for (node, &label) in labels.iter().enumerate() {
            if label >= alphabet_size {
                return Err(LabelingError::LabelOutOfRange {
                    node,
                    label,
                    alphabet: alphabet_size,
                });
            }
        }
        Ok(Labeling {
            labels,
            alphabet_size,
        })
    }

    pub fn get(&self, v: NodeId) -> u32 {
        self.labels[v.0]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Bits needed per label: `ceil(log2(alphabet_size))`.
    pub fn bits(&self) -> u32 {
        32 - (self.alphabet_size - 1).leading_zeros()
    }

    /// Returns a copy with one node relabeled.
    pub fn with_label(&self, v: NodeId, label: u32) -> Result<Self, LabelingError> {
        let mut labels = self.labels.clone();
        labels[v.0] = label;
        Labeling::new(labels, self.alphabet_size)
    }

    /// Returns a copy with the alphabet widened to `alphabet_size`.
    pub fn widened(&self, alphabet_size: u32) -> Result<Self, LabelingError> {
        Labeling::new(self.labels.clone(), alphabet_size.max(self.alphabet_size))
    }

    /// Labeling file format: header `lambda=<size>`, then one `index label`
    /// line per node.
    pub fn parse_text(text: &str) -> Result<Self, LabelingError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| LabelingError::Parse("missing lambda header".into()))?;
        let alphabet: u32 = header
            .strip_prefix("lambda=")
            .and_then(|t| t.trim().parse().ok())
            .ok_or_else(|| LabelingError::Parse(format!("bad header: {header:?}")))?;
        let mut entries = Vec::new();
        for line in lines {
            let mut it = line.split_whitespace();
            let idx: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| LabelingError::Parse(format!("bad line: {line:?}")))?;
            let label: u32 = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| LabelingError::Parse(format!("bad line: {line:?}")))?;
            entries.push((idx, label));
        }
        let n = entries.len();
        let mut labels = vec![u32::MAX; n];
        for (idx, label) in entries {
            if idx >= n || labels[idx] != u32::MAX {
                return Err(LabelingError::Parse(format!(
                    "node indices must cover 0..{n} exactly (saw {idx} twice or out of range)"
                )));
            }
            labels[idx] = label;
        }
        Labeling::new(labels, alphabet)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("lambda={}\n", self.alphabet_size);
        for (i, l) in self.labels.iter().enumerate() {
            out.push_str(&format!("{i} {l}\n"));
        }
        out
    }
}

/// The graph property a scheme verifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GraphProperty {
    HasCycle,
    IsAcyclic,
    IsBipartite,
}

impl GraphProperty {
    pub fn holds_for(self, g: &Graph) -> bool {
        match self {
            GraphProperty::HasCycle => g.has_cycle(),
            GraphProperty::IsAcyclic => !g.has_cycle(),
            GraphProperty::IsBipartite => g.is_bipartite(),
        }
    }
}

/// Identifier of one of the five labeling schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SchemeId {
    /// Cycle detection, 3 labels, view distance 1.
    Cycle3,
    /// Cycle detection, exact distances (n+1 labels), view distance 1.
    CycleN,
    /// Cycle detection, 2 labels, view distance 3.
    Cycle2View3,
    /// Cycle absence, distances from a root (n+1 label alphabet), view distance 1.
    AcyclicN,
    /// Bipartiteness, 2 labels, view distance 1.
    Bipartite2,
}

impl SchemeId {
    pub const ALL: [SchemeId; 5] = [
        SchemeId::Cycle3,
        SchemeId::CycleN,
        SchemeId::Cycle2View3,
        SchemeId::AcyclicN,
        SchemeId::Bipartite2,
    ];

    pub fn property(self) -> GraphProperty {
        match self {
            SchemeId::Cycle3 | SchemeId::CycleN | SchemeId::Cycle2View3 => GraphProperty::HasCycle,
            SchemeId::AcyclicN => GraphProperty::IsAcyclic,
            SchemeId::Bipartite2 => GraphProperty::IsBipartite,
        }
    }

    pub fn view_distance(self) -> usize {
        match self {
            SchemeId::Cycle2View3 => 3,
            _ => 1,
        }
    }

    /// Alphabet size for graphs on `n` nodes. Graph-independent for the
    /// constant-size schemes, `n + 1` for the distance-based ones.
    pub fn lambda_for(self, n: usize) -> u32 {
        match self {
            SchemeId::Cycle3 => 3,
            SchemeId::Cycle2View3 | SchemeId::Bipartite2 => 2,
            SchemeId::CycleN | SchemeId::AcyclicN => n as u32 + 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SchemeId::Cycle3 => "cycle3",
            SchemeId::CycleN => "cycle-n",
            SchemeId::Cycle2View3 => "cycle2v3",
            SchemeId::AcyclicN => "acyclic-n",
            SchemeId::Bipartite2 => "bipartite2",
        }
    }

    /// The scheme's oracular labeler.
    pub fn label(self, g: &Graph) -> Result<Labeling, LabelingError> {
        match self {
            SchemeId::Cycle3 => label_cycle3(g),
            SchemeId::CycleN => label_cycle_n(g),
            SchemeId::Cycle2View3 => label_cycle2_view3(g),
            SchemeId::AcyclicN => label_acyclic(g),
            SchemeId::Bipartite2 => label_bipartite(g),
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cycle3" => Ok(SchemeId::Cycle3),
            "cycle-n" | "cycle_n" | "cyclen" => Ok(SchemeId::CycleN),
            "cycle2v3" | "cycle2view3" => Ok(SchemeId::Cycle2View3),
            "acyclic-n" | "acyclic_n" | "acyclicn" => Ok(SchemeId::AcyclicN),
            "bipartite2" => Ok(SchemeId::Bipartite2),
            other => Err(format!(
                "unknown scheme {other:?} (expected one of cycle3, cycle-n, cycle2v3, acyclic-n, bipartite2)"
            )),
        }
    }
}

/// Bundle identifying one labeling scheme instance: labeler, verifier,
/// alphabet size, view distance and the property checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeSpec {
    pub id: SchemeId,
    pub lambda: u32,
    pub d: usize,
    pub property: GraphProperty,
}

impl SchemeSpec {
    /// Spec for graphs on `n` nodes.
    pub fn for_n(id: SchemeId, n: usize) -> Self {
        SchemeSpec {
            id,
            lambda: id.lambda_for(n),
            d: id.view_distance(),
            property: id.property(),
        }
    }

    pub fn for_graph(id: SchemeId, g: &Graph) -> Self {
        Self::for_n(id, g.node_count())
    }
}

/// Distance from every node to the nearest core node (multi-source BFS).
/// Errors when the graph is acyclic, i.e. has no core.
fn core_distances(g: &Graph) -> Result<Vec<usize>, LabelingError> {
    let core = g.core_nodes();
    if core.is_empty() {
        return Err(LabelingError::NotInProperty);
    }
    let mut dist = vec![usize::MAX; g.node_count()];
    let mut queue = std::collections::VecDeque::new();
    for v in core {
        dist[v.0] = 0;
        queue.push_back(v);
    }
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if dist[w.0] == usize::MAX {
                dist[w.0] = dist[u.0] + 1;
                queue.push_back(w);
            }
        }
    }
    Ok(dist)
}

/// Cycle detection with 3 labels: core nodes get 0, every other node its
/// distance to the nearest core node taken modulo 3.
pub fn label_cycle3(g: &Graph) -> Result<Labeling, LabelingError> {
    let dist = core_distances(g)?;
    let labels = dist.iter().map(|&d| (d % 3) as u32).collect();
    Labeling::new(labels, 3)
}

/// Cycle detection with exact distances: core nodes 0, others the exact
/// distance to the nearest core node. Alphabet `{0, .., n}`.
pub fn label_cycle_n(g: &Graph) -> Result<Labeling, LabelingError> {
    let dist = core_distances(g)?;
    let labels = dist.iter().map(|&d| d as u32).collect();
    Labeling::new(labels, g.node_count() as u32 + 1)
}

/// Cycle detection with 2 labels and view distance 3: core nodes get 0; a
/// tree node at distance r from the core gets 1 when `r mod 6` is 1, 2 or 4,
/// and 0 otherwise.
pub fn label_cycle2_view3(g: &Graph) -> Result<Labeling, LabelingError> {
    let dist = core_distances(g)?;
    let labels = dist
        .iter()
        .map(|&d| {
            if d == 0 {
                0
            } else {
                match d % 6 {
                    1 | 2 | 4 => 1,
                    _ => 0,
                }
            }
        })
        .collect();
    Labeling::new(labels, 2)
}

/// Cycle absence: node 0 is the root with label 0, every other node its exact
/// distance to the root.
pub fn label_acyclic(g: &Graph) -> Result<Labeling, LabelingError> {
    if g.has_cycle() {
        return Err(LabelingError::NotInProperty);
    }
    let dist = g.distances_from(NodeId(0));
    let labels = dist.iter().map(|&d| d as u32).collect();
    Labeling::new(labels, (g.node_count() as u32).max(2))
}

/// Bipartiteness: a proper 2-coloring with node 0 colored 0.
pub fn label_bipartite(g: &Graph) -> Result<Labeling, LabelingError> {
    let coloring = g.two_coloring().ok_or(LabelingError::NotInProperty)?;
    Labeling::new(coloring, 2)
}
