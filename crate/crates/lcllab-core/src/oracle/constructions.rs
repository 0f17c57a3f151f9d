//! Executable impossibility constructions: each one maps an accepted labeled
//! graph to a counterexample graph whose every node has a local view already
//! present (and therefore accepted) in the source, which is exactly how the
//! impossibility proofs argue. Certificates are validated by explicit
//! center- and label-preserving view isomorphism.

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, NodeId};
use crate::labelings::Labeling;
use crate::view::{local_view, LocalView};

use super::OracleError;

/// Center-, label- and adjacency-preserving isomorphism test between two
/// views. Backtracking assignment in center-BFS order with (label, degree,
/// distance) pruning; views at desk scale have at most ~20 nodes.
pub fn view_isomorphic(a: &LocalView, b: &LocalView) -> bool {
    if a.radius() != b.radius() || a.node_count() != b.node_count() {
        return false;
    }
    let n = a.node_count();
    let sig = |view: &LocalView, v: usize| (view.label(v), view.degree(v), view.dist(v));
    let mut sig_a: Vec<_> = (0..n).map(|v| sig(a, v)).collect();
    let mut sig_b: Vec<_> = (0..n).map(|v| sig(b, v)).collect();
    sig_a.sort_unstable();
    sig_b.sort_unstable();
    if sig_a != sig_b {
        return false;
    }

    // map[v] = image of a's node v in b.
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn assign(
        a: &LocalView,
        b: &LocalView,
        v: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let n = a.node_count();
        if v == n {
            return true;
        }
        'cand: for w in 0..n {
            if used[w]
                || a.label(v) != b.label(w)
                || a.degree(v) != b.degree(w)
                || a.dist(v) != b.dist(w)
            {
                continue;
            }
            // Adjacency with already-mapped nodes must match both ways.
            for u in 0..v {
                let adj_a = a.neighbors(v).contains(&u);
                let adj_b = b.neighbors(w).contains(&map[u]);
                if adj_a != adj_b {
                    continue 'cand;
                }
            }
            map[v] = w;
            used[w] = true;
            if assign(a, b, v + 1, map, used) {
                return true;
            }
            used[w] = false;
            map[v] = usize::MAX;
        }
        false
    }

    // Node 0 is the center in both views; centers must map to each other,
    // which assign() enforces through dist(0) = 0 being unique per BFS level
    // only for the center itself.
    assign(a, b, 0, &mut map, &mut used)
}

/// A mapping from every node of a counterexample (target) graph to a node of
/// an accepted (source) graph with an isomorphic local view at `radius`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViewTransferCertificate {
    pub source_graph: Graph,
    pub source_labeling: Labeling,
    pub target_graph: Graph,
    pub target_labeling: Labeling,
    /// Indexed by target node.
    pub correspondence: Vec<NodeId>,
    pub radius: usize,
}

impl ViewTransferCertificate {
    /// Checks every target node's view against its mapped source node's view.
    pub fn validate(&self) -> Result<(), OracleError> {
        if self.correspondence.len() != self.target_graph.node_count() {
            return Err(OracleError::CertificateInvalid {
                target_node: self.correspondence.len(),
                detail: "correspondence must cover every target node".into(),
            });
        }
        for t in self.target_graph.nodes() {
            let target_view = local_view(&self.target_graph, &self.target_labeling, t, self.radius);
            let source_view = local_view(
                &self.source_graph,
                &self.source_labeling,
                self.correspondence[t.0],
                self.radius,
            );
            if !view_isomorphic(&target_view, &source_view) {
                return Err(OracleError::CertificateInvalid {
                    target_node: t.0,
                    detail: format!(
                        "view at target {} is not isomorphic to source {}",
                        t, self.correspondence[t.0]
                    ),
                });
            }
        }
        Ok(())
    }
}

/// The fixed 7-node graph of the 2-label view-1 impossibility: a path
/// v1..v7 with an extra edge (v5, v7) closing a triangle.
pub fn thm32_source_graph() -> Graph {
    Graph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 6)])
        .expect("fixed construction graph")
}

/// Maps a 2-labeling of the fixed cyclic 7-node graph to an acyclic path
/// whose every node sees a view already present in the source. The three
/// cases split on the labels of v2, v3, v4 and are exhaustive.
pub fn thm32_construction(l1: &Labeling) -> Result<ViewTransferCertificate, OracleError> {
    let source = thm32_source_graph();
    if l1.len() != source.node_count() {
        return Err(OracleError::BadInput(format!(
            "need a labeling of {} nodes, got {}",
            source.node_count(),
            l1.len()
        )));
    }
    if l1.alphabet_size() != 2 {
        return Err(OracleError::BadInput(format!(
            "need a 2-labeling, alphabet is {}",
            l1.alphabet_size()
        )));
    }
    let l = |i: usize| l1.get(NodeId(i));
    // v1 = node 0, v2 = node 1, ...
    let (labels, correspondence): (Vec<u32>, Vec<NodeId>) = if l(1) == l(2) {
        // Case i: a 4-node path mirroring v1, v2.
        (
            vec![l(0), l(1), l(1), l(0)],
            vec![0, 1, 1, 0].into_iter().map(NodeId).collect(),
        )
    } else if l(2) == l(3) {
        // Case ii: a 6-node path mirroring v1, v2, v3.
        (
            vec![l(0), l(1), l(2), l(2), l(1), l(0)],
            vec![0, 1, 2, 2, 1, 0].into_iter().map(NodeId).collect(),
        )
    } else {
        // Case iii: a 5-node path; two labels force l(v2) = l(v4).
        (
            vec![l(0), l(1), l(2), l(1), l(0)],
            vec![0, 1, 2, 1, 0].into_iter().map(NodeId).collect(),
        )
    };
    let target_graph = Graph::path(labels.len());
    let target_labeling = Labeling::new(labels, 2)?;
    Ok(ViewTransferCertificate {
        source_graph: source,
        source_labeling: l1.clone(),
        target_graph,
        target_labeling,
        correspondence,
        radius: 1,
    })
}

/// Pigeonhole bound: every labeling of a path with `n >= lambda^(2d+1) + 2d`
/// nodes over `lambda` labels repeats some window of `2d + 1` consecutive
/// labels.
pub fn pigeonhole_path_length(lambda: u32, d: usize) -> usize {
    (lambda as usize).pow(2 * d as u32 + 1) + 2 * d
}

/// Maps a labeling of a path that repeats a `(2d+1)`-label window onto a
/// cycle labeled periodically with the segment between the repeats; every
/// cycle node's radius-`d` view equals some path node's view.
///
/// The cycle length is the smallest multiple of the window distance that is
/// at least `2d + 2`, so that no cycle node sees the entire cycle and all
/// views stay paths.
pub fn thm36_construction(
    path_labeling: &Labeling,
    d: usize,
) -> Result<ViewTransferCertificate, OracleError> {
    let n = path_labeling.len();
    let w = 2 * d + 1;
    if n < w {
        return Err(OracleError::NoRepeat);
    }
    let labels = path_labeling.labels();

    // First repeated window pair (i, j), 0-based start indices, scanning by
    // earlier i then earlier j.
    let window = |s: usize| &labels[s..s + w];
    let mut found = None;
    'outer: for i in 0..=(n - w) {
        for j in (i + 1)..=(n - w) {
            if window(i) == window(j) {
                found = Some((i, j));
                break 'outer;
            }
        }
    }
    let Some((i, j)) = found else {
        return Err(OracleError::NoRepeat);
    };
    let period = j - i;
    let mut p = period;
    while p < 2 * d + 2 {
        p += period;
    }

    let target_graph = Graph::cycle(p);
    let target_labels: Vec<u32> = (0..p).map(|s| labels[i + s % period]).collect();
    let target_labeling = Labeling::new(target_labels, path_labeling.alphabet_size())?;

    // Offset o within the period (0-based): the first d offsets shift into
    // the second window copy, the rest read directly from the first.
    let correspondence: Vec<NodeId> = (0..p)
        .map(|s| {
            let o = s % period;
            if o < d {
                NodeId(j + o)
            } else {
                NodeId(i + o)
            }
        })
        .collect();

    let cert = ViewTransferCertificate {
        source_graph: Graph::path(n),
        source_labeling: path_labeling.clone(),
        target_graph,
        target_labeling,
        correspondence,
        radius: d,
    };
    Ok(cert)
}

/// Whether the window repeat found for this certificate was of the disjoint
/// kind (window distance at least the window length).
pub fn thm36_windows_disjoint(cert: &ViewTransferCertificate, d: usize) -> bool {
    // The cycle is labeled with period j - i; recover it from the labels.
    let p = cert.target_graph.node_count();
    let labels = cert.target_labeling.labels();
    let mut period = p;
    for cand in 1..p {
        if p % cand == 0 && (0..p).all(|s| labels[s] == labels[s % cand]) {
            period = cand;
            break;
        }
    }
    period >= 2 * d + 1
}

/// One node transfer for the error-budget impossibility: the target node's
/// view equals the source node's view under a source labeling changed in at
/// most `i` nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeTransfer {
    pub target: NodeId,
    pub source: NodeId,
    pub adversarial: Labeling,
}

/// Certificate for the i-errors / view-distance-i impossibility: the target
/// is a bare path of 3i+1 nodes, the source that path with a triangle hung
/// off its far end. Every target node's radius-i view must match an
/// accepting source node's view under some labeling within i total changes
/// of the accepted one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thm61Certificate {
    pub i: usize,
    pub source_graph: Graph,
    pub source_labeling: Labeling,
    pub target_graph: Graph,
    pub target_labeling: Labeling,
    pub transfers: Vec<NodeTransfer>,
}

impl Thm61Certificate {
    pub fn validate(&self) -> Result<(), OracleError> {
        if self.transfers.len() != self.target_graph.node_count() {
            return Err(OracleError::CertificateInvalid {
                target_node: self.transfers.len(),
                detail: "one transfer per target node required".into(),
            });
        }
        for tr in &self.transfers {
            let changed = self
                .source_labeling
                .labels()
                .iter()
                .zip(tr.adversarial.labels())
                .filter(|(a, b)| a != b)
                .count();
            if changed > self.i {
                return Err(OracleError::CertificateInvalid {
                    target_node: tr.target.0,
                    detail: format!(
                        "adversarial labeling changes {changed} nodes, budget is {}",
                        self.i
                    ),
                });
            }
            let target_view =
                local_view(&self.target_graph, &self.target_labeling, tr.target, self.i);
            let source_view = local_view(&self.source_graph, &tr.adversarial, tr.source, self.i);
            if !view_isomorphic(&target_view, &source_view) {
                return Err(OracleError::CertificateInvalid {
                    target_node: tr.target.0,
                    detail: format!(
                        "view at target {} not matched by source {}",
                        tr.target, tr.source
                    ),
                });
            }
        }
        Ok(())
    }
}

/// The source graph: a path v1..v_{3i+1} (nodes 0..3i) with a triangle
/// {x, y, z} attached through the edge (v_{3i+1}, x).
pub fn thm61_source_graph(i: usize) -> Graph {
    assert!(i >= 1);
    let path_len = 3 * i + 1;
    let mut edges: Vec<(usize, usize)> = (0..path_len - 1).map(|t| (t, t + 1)).collect();
    let (x, y, z) = (path_len, path_len + 1, path_len + 2);
    edges.push((path_len - 1, x));
    edges.extend([(x, y), (y, z), (z, x)]);
    Graph::from_edges(path_len + 3, &edges).expect("fixed construction graph")
}

/// Builds the bare-path labeling and per-node transfers from a labeling of
/// the source graph (hypothetically accepted by a candidate verifier with
/// view distance at most `i` tolerating `i` total errors).
///
/// Positions are 1-based in the description: target positions 1..=2i+1 copy
/// the source path labels directly, positions 2i+2..=3i+1 mirror the labels
/// of the leaf-side block x_1..x_i. A transfer's adversarial labeling
/// rewrites the part of the matched source view that the mirrored block
/// covers; each rewrite stays within i nodes.
pub fn thm61_construction(
    i: usize,
    accepted: &Labeling,
) -> Result<Thm61Certificate, OracleError> {
    if i == 0 {
        return Err(OracleError::BadInput("budget i must be at least 1".into()));
    }
    let source_graph = thm61_source_graph(i);
    if accepted.len() != source_graph.node_count() {
        return Err(OracleError::BadInput(format!(
            "need a labeling of {} nodes, got {}",
            source_graph.node_count(),
            accepted.len()
        )));
    }
    let path_len = 3 * i + 1;
    let src = |pos: usize| accepted.get(NodeId(pos - 1)); // 1-based path position

    // Target labels: positions 1..=2i+1 copy v_pos, positions above mirror
    // the first block from the far end.
    let target_labels: Vec<u32> = (1..=path_len)
        .map(|pos| {
            if pos <= 2 * i + 1 {
                src(pos)
            } else {
                src(3 * i + 2 - pos)
            }
        })
        .collect();
    let target_graph = Graph::path(path_len);
    let target_labeling = Labeling::new(target_labels.clone(), accepted.alphabet_size())?;

    let mut transfers = Vec::with_capacity(path_len);
    for pos in 1..=path_len {
        let (source_pos, lo, hi, mirrored) = if pos <= 2 * i + 1 {
            // Identity alignment over positions pos-i ..= min(pos+i, 3i+1).
            (pos, pos.saturating_sub(i).max(1), (pos + i).min(path_len), false)
        } else {
            // Mirror alignment: target position t matches source 3i+2-t.
            let q = 3 * i + 2 - pos;
            (q, 1, q + i, true)
        };
        let mut adv = accepted.labels().to_vec();
        for s in lo..=hi {
            let t = if mirrored { 3 * i + 2 - s } else { s };
            adv[s - 1] = target_labels[t - 1];
        }
        transfers.push(NodeTransfer {
            target: NodeId(pos - 1),
            source: NodeId(source_pos - 1),
            adversarial: Labeling::new(adv, accepted.alphabet_size())?,
        });
    }

    Ok(Thm61Certificate {
        i,
        source_graph,
        source_labeling: accepted.clone(),
        target_graph,
        target_labeling,
        transfers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labelings::label_acyclic;

    fn bits_to_labeling(bits: u32, n: usize) -> Labeling {
        Labeling::new((0..n).map(|k| bits >> k & 1).collect(), 2).unwrap()
    }

    #[test]
    fn view_iso_basics() {
        let g = Graph::path(5);
        let l = Labeling::new(vec![0, 1, 0, 1, 1], 2).unwrap();
        let v = local_view(&g, &l, NodeId(2), 1);
        assert!(view_isomorphic(&v, &v));

        // Same structure under relabeled node indices.
        let h = Graph::from_edges(5, &[(4, 3), (3, 0), (0, 2), (2, 1)]).unwrap();
        // h: 4-3-0-2-1 is a path; node 0 is the middle.
        let lh = Labeling::new(vec![0, 1, 1, 1, 0], 2).unwrap();
        let vh = local_view(&h, &lh, NodeId(0), 1);
        assert!(view_isomorphic(&v, &vh));

        // Label multiset differs: (0,1,0) center vs (0,1,1) center.
        let l2 = Labeling::new(vec![0, 0, 1, 1, 1], 2).unwrap();
        let v2 = local_view(&g, &l2, NodeId(2), 1);
        assert!(!view_isomorphic(&v, &v2));
    }

    #[test]
    fn view_iso_distinguishes_cycle_from_path() {
        let c3 = Graph::cycle(3);
        let p3 = Graph::path(3);
        let zero3 = Labeling::new(vec![0; 3], 2).unwrap();
        let a = local_view(&c3, &zero3, NodeId(0), 1);
        let b = local_view(&p3, &zero3, NodeId(1), 1);
        assert!(!view_isomorphic(&a, &b));
    }

    #[test]
    fn thm32_case_selection() {
        // Case i: L(v2) = L(v3).
        let l = bits_to_labeling(0b0000110, 7); // v2 = 1, v3 = 1
        let cert = thm32_construction(&l).unwrap();
        assert_eq!(cert.target_graph.node_count(), 4);
        assert_eq!(
            cert.target_labeling.labels(),
            &[l.get(NodeId(0)), 1, 1, l.get(NodeId(0))]
        );

        // Case ii: L(v2) != L(v3), L(v3) = L(v4).
        let l = bits_to_labeling(0b0001100, 7); // v2=0 v3=1 v4=1
        let cert = thm32_construction(&l).unwrap();
        assert_eq!(cert.target_graph.node_count(), 6);

        // Case iii: L(v2) != L(v3) != L(v4).
        let l = bits_to_labeling(0b0000100, 7); // v2=0 v3=1 v4=0
        let cert = thm32_construction(&l).unwrap();
        assert_eq!(cert.target_graph.node_count(), 5);
    }

    #[test]
    fn thm32_all_128_certificates_validate() {
        for bits in 0..128u32 {
            let l = bits_to_labeling(bits, 7);
            let cert = thm32_construction(&l).unwrap();
            cert.validate()
                .unwrap_or_else(|e| panic!("labeling {bits:07b}: {e}"));
        }
    }

    #[test]
    fn thm36_pigeonhole_bounds() {
        assert_eq!(pigeonhole_path_length(2, 1), 10);
        // 3 labels at d = 1 need 27 + 2 nodes; conversely a 29-node path
        // forces lambda >= cube root of 27.
        assert_eq!(pigeonhole_path_length(3, 1), 29);
    }

    #[test]
    fn thm36_overlap_and_disjoint_cases() {
        // All-zero: first repeat at distance 1 (overlapping windows).
        let l = Labeling::new(vec![0; 11], 2).unwrap();
        let cert = thm36_construction(&l, 1).unwrap();
        assert!(!thm36_windows_disjoint(&cert, 1));
        assert_eq!(cert.target_graph.node_count(), 4); // smallest multiple of 1 >= 4
        cert.validate().unwrap();

        // 00010001000: windows repeat at distance 4 (disjoint).
        let l = Labeling::new(vec![0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0], 2).unwrap();
        let cert = thm36_construction(&l, 1).unwrap();
        assert!(thm36_windows_disjoint(&cert, 1));
        cert.validate().unwrap();
    }

    #[test]
    fn thm36_no_repeat_reported() {
        // 0,1,2,3,4: all windows distinct.
        let l = Labeling::new(vec![0, 1, 2, 3, 4], 6).unwrap();
        assert!(matches!(
            thm36_construction(&l, 1),
            Err(OracleError::NoRepeat)
        ));
    }

    #[test]
    fn thm36_accepted_distance_labelings_have_no_repeats() {
        // Rooted distance labelings are exactly the accepted labelings of
        // verify_acyclic on a path, and none of them repeats a window: the
        // impossibility premise is vacuous for them, as the wider alphabet
        // evades the pigeonhole bound.
        for root in 0..11usize {
            let g = Graph::path(11);
            let labels: Vec<u32> = (0..11).map(|s| (s as i64 - root as i64).unsigned_abs() as u32).collect();
            let l = Labeling::new(labels, 12).unwrap();
            let spec = crate::labelings::SchemeSpec::for_graph(
                crate::labelings::SchemeId::AcyclicN,
                &g,
            );
            if root == 0 {
                assert_eq!(l, label_acyclic(&g).unwrap().widened(12).unwrap());
            }
            assert!(crate::verifiers::run_verifier(&g, &l, &spec)
                .unwrap()
                .all_accept());
            assert!(matches!(
                thm36_construction(&l, 1),
                Err(OracleError::NoRepeat)
            ));
        }
    }

    #[test]
    fn thm36_general_d_spot_check() {
        // d = 2: a 14-node 2-labeling with a repeated 5-window.
        let labels = vec![0, 1, 1, 0, 1, 0, 0, 1, 1, 0, 1, 0, 1, 1];
        let l = Labeling::new(labels, 2).unwrap();
        let cert = thm36_construction(&l, 2).unwrap();
        cert.validate().unwrap();
    }

    #[test]
    fn thm61_shapes() {
        let g = thm61_source_graph(1);
        assert_eq!(g.node_count(), 7); // 4-path + triangle
        assert_eq!(g.edge_count(), 7);
        let l = Labeling::new(vec![0, 1, 0, 1, 0, 1, 0], 2).unwrap();
        let cert = thm61_construction(1, &l).unwrap();
        assert_eq!(cert.target_graph.node_count(), 4);
        cert.validate().unwrap();
    }

    #[test]
    fn thm61_view_sizes_match_block_structure() {
        for i in [1usize, 2] {
            let g = thm61_source_graph(i);
            let l = Labeling::new(vec![0; g.node_count()], 2).unwrap();
            let cert = thm61_construction(i, &l).unwrap();
            for m in 0..cert.target_graph.node_count() {
                let view = local_view(&cert.target_graph, &cert.target_labeling, NodeId(m), i);
                let pos = m + 1;
                if (i + 1..=2 * i + 1).contains(&pos) {
                    // Middle block: sees 2i+1 path nodes.
                    assert_eq!(view.node_count(), 2 * i + 1);
                } else {
                    // Leaf blocks: sees between i+1 and 2i nodes.
                    assert!(view.node_count() >= i + 1 && view.node_count() < 2 * i + 1);
                }
            }
        }
    }

    #[test]
    fn thm61_exhaustive_binary_labelings() {
        for i in [1usize, 2] {
            let n = thm61_source_graph(i).node_count();
            for bits in 0..(1u32 << n) {
                let l = bits_to_labeling(bits, n);
                let cert = thm61_construction(i, &l).unwrap();
                cert.validate()
                    .unwrap_or_else(|e| panic!("i={i}, labeling {bits:b}: {e}"));
            }
        }
    }
}
