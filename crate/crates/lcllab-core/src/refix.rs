//! The error-resilient meta-verifier.
//!
//! Given a base verifier with view distance `d` and an error budget of `i`
//! corrupted labels per `N_{d+2i}` neighborhood, a node searches every
//! correction of at most `i` labels within `N_{d+2i}(v)` and accepts when some
//! correction makes every node within `N_{d+2i-1}(v)` accept under the base
//! verifier. The correction witnessing acceptance is the node's imagined
//! labeling.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, NodeId};
use crate::labelings::{Labeling, LabelingError, SchemeId, SchemeSpec};
use crate::verifiers::{self, Alg3Mode, Verdict, VerdictMap, VerifierError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RefixError {
    #[error(transparent)]
    Verifier(#[from] VerifierError),
    #[error(transparent)]
    Labeling(#[from] LabelingError),
    #[error("graph satisfies the property; agreement check expects a no-instance")]
    PropertyHolds,
    #[error("budget base distance {budget_d} does not match scheme view distance {spec_d}")]
    BudgetMismatch { budget_d: usize, spec_d: usize },
    #[error("path labeling uniqueness applies to the distance schemes, not {0}")]
    UnsupportedScheme(SchemeId),
    #[error("invalid path: {0}")]
    BadPath(String),
}

/// Error budget: at most `i` corrupted nodes within every `N_{d+2i}`
/// neighborhood, where `d` is the base verifier's view distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBudget {
    i: usize,
    base_d: usize,
    effective_radius: usize,
}

impl ErrorBudget {
    pub fn new(i: usize, base_d: usize) -> Self {
        ErrorBudget {
            i,
            base_d,
            effective_radius: base_d + 2 * i,
        }
    }

    pub fn errors(&self) -> usize {
        self.i
    }

    pub fn base_d(&self) -> usize {
        self.base_d
    }

    /// `d + 2i`, the view distance of the meta-verifier.
    pub fn effective_radius(&self) -> usize {
        self.effective_radius
    }
}

/// A correction witnessing one node's acceptance: only the nodes whose label
/// differs from the adversarial labeling are stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImaginedLabeling {
    owner: NodeId,
    patch: BTreeMap<NodeId, u32>,
}

impl ImaginedLabeling {
    pub fn owner(&self) -> NodeId {
        self.owner
    }

    pub fn patch(&self) -> &BTreeMap<NodeId, u32> {
        &self.patch
    }

    /// The imagined label of `v`: the patched value if present, the
    /// adversarial one otherwise.
    pub fn label_at(&self, l_adv: &Labeling, v: NodeId) -> u32 {
        self.patch.get(&v).copied().unwrap_or_else(|| l_adv.get(v))
    }

    pub fn apply(&self, l_adv: &Labeling) -> Result<Labeling, LabelingError> {
        let mut labels = l_adv.labels().to_vec();
        for (&v, &lab) in &self.patch {
            labels[v.0] = lab;
        }
        Labeling::new(labels, l_adv.alphabet_size())
    }
}

/// Walks all patches choosing at most `max_changes` nodes of `nodes` and
/// reassigning each a different label below `lambda`, in lexicographic order
/// by node set and then label tuple (the empty patch first). Returns `true`
/// when the callback stopped the walk.
fn walk_variants<F>(
    nodes: &[NodeId],
    orig: &[u32],
    lambda: u32,
    max_changes: usize,
    buf: &mut Vec<(NodeId, u32)>,
    start: usize,
    f: &mut F,
) -> bool
where
    F: FnMut(&[(NodeId, u32)]) -> bool,
{
    if f(buf) {
        return true;
    }
    if buf.len() == max_changes {
        return false;
    }
    for idx in start..nodes.len() {
        for label in 0..lambda {
            if label == orig[idx] {
                continue;
            }
            buf.push((nodes[idx], label));
            if walk_variants(nodes, orig, lambda, max_changes, buf, idx + 1, f) {
                return true;
            }
            buf.pop();
        }
    }
    false
}

/// All label patches a node may try: at most `budget.errors()` nodes of
/// `N_{d+2i}(v)`, each reassigned a different label from the labeling's
/// alphabet. Deterministic order; the count is
/// `sum_k C(|N_{d+2i}(v)|, k) * (lambda-1)^k`.
pub fn enumerate_variants(
    g: &Graph,
    l_adv: &Labeling,
    v: NodeId,
    budget: &ErrorBudget,
) -> Vec<Vec<(NodeId, u32)>> {
    let nodes = g.neighborhood(v, budget.effective_radius());
    let orig: Vec<u32> = nodes.iter().map(|&u| l_adv.get(u)).collect();
    let mut out = Vec::new();
    let mut buf = Vec::new();
    walk_variants(
        &nodes,
        &orig,
        l_adv.alphabet_size(),
        budget.errors(),
        &mut buf,
        0,
        &mut |patch| {
            out.push(patch.to_vec());
            false
        },
    );
    out
}

/// Base-verifier acceptance at `v` on a raw label slice.
fn base_accepts(
    g: &Graph,
    labels: &[u32],
    alphabet: u32,
    v: NodeId,
    spec: &SchemeSpec,
    mode: Alg3Mode,
) -> Result<bool, RefixError> {
    if spec.d == 1 {
        Ok(verifiers::base_accepts_fast(g, labels, v, spec.id))
    } else {
        let l = Labeling::new(labels.to_vec(), alphabet)?;
        Ok(verifiers::verify_at_with_mode(g, &l, v, spec, mode)?.is_accept())
    }
}

/// Core search shared by the public entry points. `patch_radius` bounds where
/// corrections may go, `check_radius` which nodes must accept; the public API
/// couples them as `d + 2i` and `d + 2i - 1`, tests may decouple them.
fn refix_search(
    g: &Graph,
    l_adv: &Labeling,
    v: NodeId,
    spec: &SchemeSpec,
    max_changes: usize,
    patch_radius: usize,
    check_radius: usize,
    mode: Alg3Mode,
    collect_all: bool,
) -> Result<Vec<BTreeMap<NodeId, u32>>, RefixError> {
    let patch_nodes = g.neighborhood(v, patch_radius);
    let orig: Vec<u32> = patch_nodes.iter().map(|&u| l_adv.get(u)).collect();
    let check_nodes = g.neighborhood(v, check_radius);

    let mut labels = l_adv.labels().to_vec();
    let alphabet = l_adv.alphabet_size();
    let mut found = Vec::new();
    let mut walk_err = None;
    let mut buf = Vec::new();
    walk_variants(
        &patch_nodes,
        &orig,
        alphabet,
        max_changes,
        &mut buf,
        0,
        &mut |patch| {
            for &(u, lab) in patch {
                labels[u.0] = lab;
            }
            let mut ok = true;
            for &u in &check_nodes {
                match base_accepts(g, &labels, alphabet, u, spec, mode) {
                    Ok(true) => {}
                    Ok(false) => {
                        ok = false;
                        break;
                    }
                    Err(e) => {
                        walk_err = Some(e);
                        ok = false;
                        break;
                    }
                }
            }
            for &(u, _) in patch {
                labels[u.0] = l_adv.get(u);
            }
            if walk_err.is_some() {
                return true;
            }
            if ok {
                found.push(patch.iter().copied().collect());
                !collect_all
            } else {
                false
            }
        },
    );
    if let Some(e) = walk_err {
        return Err(e);
    }
    Ok(found)
}

/// The meta-verifier at one node: accept iff some patch of at most `i` labels
/// within `N_{d+2i}(v)` makes every node of `N_{d+2i-1}(v)` accept under the
/// base verifier. On acceptance, the first such patch (in enumeration order)
/// is returned as the imagined labeling.
pub fn refix_verdict(
    g: &Graph,
    l_adv: &Labeling,
    v: NodeId,
    spec: &SchemeSpec,
    budget: &ErrorBudget,
) -> Result<(Verdict, Option<ImaginedLabeling>), RefixError> {
    refix_verdict_with_mode(g, l_adv, v, spec, budget, Alg3Mode::Pseudocode)
}

pub fn refix_verdict_with_mode(
    g: &Graph,
    l_adv: &Labeling,
    v: NodeId,
    spec: &SchemeSpec,
    budget: &ErrorBudget,
    mode: Alg3Mode,
) -> Result<(Verdict, Option<ImaginedLabeling>), RefixError> {
    if budget.base_d() != spec.d {
        return Err(RefixError::BudgetMismatch {
            budget_d: budget.base_d(),
            spec_d: spec.d,
        });
    }
    let found = refix_search(
        g,
        l_adv,
        v,
        spec,
        budget.errors(),
        budget.effective_radius(),
        budget.effective_radius().saturating_sub(1),
        mode,
        false,
    )?;
    Ok(match found.into_iter().next() {
        Some(patch) => (
            Verdict::Accept,
            Some(ImaginedLabeling { owner: v, patch }),
        ),
        None => (Verdict::Reject, None),
    })
}

/// Runs the meta-verifier at every node.
pub fn refix_run(
    g: &Graph,
    l_adv: &Labeling,
    spec: &SchemeSpec,
    budget: &ErrorBudget,
) -> Result<(VerdictMap, Vec<Option<ImaginedLabeling>>), RefixError> {
    let mut verdicts = Vec::with_capacity(g.node_count());
    let mut imagined = Vec::with_capacity(g.node_count());
    for v in g.nodes() {
        let (verdict, witness) = refix_verdict(g, l_adv, v, spec, budget)?;
        verdicts.push(verdict);
        imagined.push(witness);
    }
    Ok((VerdictMap::new(verdicts), imagined))
}

/// Decoupled-radius variant used by the fixed-radius monotonicity tests.
#[doc(hidden)]
pub fn refix_accepts_at_radius(
    g: &Graph,
    l_adv: &Labeling,
    v: NodeId,
    spec: &SchemeSpec,
    max_changes: usize,
    patch_radius: usize,
    check_radius: usize,
) -> Result<bool, RefixError> {
    let found = refix_search(
        g,
        l_adv,
        v,
        spec,
        max_changes,
        patch_radius,
        check_radius,
        Alg3Mode::Pseudocode,
        false,
    )?;
    Ok(!found.is_empty())
}

/// One disagreement between the imagined labelings of two adjacent accepting
/// nodes, at one of the two endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementViolation {
    pub edge: (NodeId, NodeId),
    pub at: NodeId,
    pub label_by_u: u32,
    pub label_by_v: u32,
}

/// Checks, on a graph violating the property, that any two adjacent accepting
/// nodes agree on each other's imagined labels: for every edge (u, v) and
/// every pair of imagined labelings l_u, l_v the values l_u(u) = l_v(u) and
/// l_u(v) = l_v(v) must coincide. All accepting corrections are compared, not
/// just the first found.
pub fn check_agreement(
    g: &Graph,
    l_adv: &Labeling,
    spec: &SchemeSpec,
    budget: &ErrorBudget,
) -> Result<Vec<AgreementViolation>, RefixError> {
    if spec.property.holds_for(g) {
        return Err(RefixError::PropertyHolds);
    }
    let all_witnesses: Vec<Vec<BTreeMap<NodeId, u32>>> = g
        .nodes()
        .map(|v| {
            refix_search(
                g,
                l_adv,
                v,
                spec,
                budget.errors(),
                budget.effective_radius(),
                budget.effective_radius().saturating_sub(1),
                Alg3Mode::Pseudocode,
                true,
            )
        })
        .collect::<Result<_, _>>()?;

    let label_of = |patch: &BTreeMap<NodeId, u32>, x: NodeId| {
        patch.get(&x).copied().unwrap_or_else(|| l_adv.get(x))
    };
    let mut violations = Vec::new();
    for u in g.nodes() {
        for &v in g.neighbors(u) {
            if u.0 >= v.0 {
                continue;
            }
            for pu in &all_witnesses[u.0] {
                for pv in &all_witnesses[v.0] {
                    for at in [u, v] {
                        let by_u = label_of(pu, at);
                        let by_v = label_of(pv, at);
                        if by_u != by_v {
                            violations.push(AgreementViolation {
                                edge: (u, v),
                                at,
                                label_by_u: by_u,
                                label_by_v: by_v,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(violations)
}

/// Whether a path-node's label is consistent with the scheme's base
/// acceptance, judging only neighbors on the path (off-path neighbors are
/// unconstrained, so the node-count conditions relax to what the path can
/// show).
fn path_consistent(scheme: SchemeId, label: u32, path_neighbors: &[u32]) -> bool {
    match scheme {
        SchemeId::CycleN => {
            if label == 0 {
                path_neighbors.iter().all(|&x| x <= 1)
            } else {
                let parents = path_neighbors.iter().filter(|&&x| x == label - 1).count();
                parents <= 1
                    && path_neighbors
                        .iter()
                        .all(|&x| x == label - 1 || x == label + 1)
            }
        }
        SchemeId::AcyclicN => {
            if label == 0 {
                path_neighbors.iter().all(|&x| x == 1)
            } else {
                let parents = path_neighbors.iter().filter(|&&x| x == label - 1).count();
                parents <= 1
                    && path_neighbors
                        .iter()
                        .all(|&x| x == label - 1 || x == label + 1)
            }
        }
        other => unreachable!("path uniqueness undefined for {other}"),
    }
}

/// Counts labelings of a path's interior nodes, with the endpoints pinned to
/// `a` and `b`, under which every path node is consistent with the scheme's
/// base acceptance restricted to path-internal neighbors. The count is at
/// most 1 for the distance schemes.
pub fn path_labeling_uniqueness(
    g: &Graph,
    path: &[NodeId],
    a: u32,
    b: u32,
    scheme: SchemeId,
) -> Result<usize, RefixError> {
    if !matches!(scheme, SchemeId::CycleN | SchemeId::AcyclicN) {
        return Err(RefixError::UnsupportedScheme(scheme));
    }
    if path.len() < 2 {
        return Err(RefixError::BadPath("need at least two nodes".into()));
    }
    let mut seen = std::collections::BTreeSet::new();
    for w in path.windows(2) {
        if !g.has_edge(w[0], w[1]) {
            return Err(RefixError::BadPath(format!(
                "{} and {} not adjacent",
                w[0], w[1]
            )));
        }
    }
    for &v in path {
        if !seen.insert(v) {
            return Err(RefixError::BadPath(format!("node {v} repeats")));
        }
    }

    // Interior labels never exceed the endpoint maximum in a consistent
    // labeling; the two extra symbols give headroom to confirm that.
    let hi = a.max(b).max(g.node_count() as u32) + 2;
    let k = path.len();
    let mut labels = vec![0u32; k];
    labels[0] = a;
    labels[k - 1] = b;

    let consistent = |labels: &[u32]| {
        (0..k).all(|t| {
            let mut nbrs = Vec::with_capacity(2);
            if t > 0 {
                nbrs.push(labels[t - 1]);
            }
            if t + 1 < k {
                nbrs.push(labels[t + 1]);
            }
            path_consistent(scheme, labels[t], &nbrs)
        })
    };

    if k == 2 {
        return Ok(consistent(&labels) as usize);
    }

    let interior = k - 2;
    let mut count = 0usize;
    let mut odo = vec![0u32; interior];
    loop {
        for (slot, &x) in odo.iter().enumerate() {
            labels[slot + 1] = x;
        }
        if consistent(&labels) {
            count += 1;
        }
        let mut pos = 0;
        loop {
            if pos == interior {
                return Ok(count);
            }
            odo[pos] += 1;
            if odo[pos] <= hi {
                break;
            }
            odo[pos] = 0;
            pos += 1;
        }
    }
}
