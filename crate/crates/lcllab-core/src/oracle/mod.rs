//! Exhaustive ground-truth checking: completeness and soundness of every
//! scheme over all small graphs, plus the executable impossibility
//! constructions.

mod constructions;
mod enumerate;

pub use constructions::{
    pigeonhole_path_length, thm32_construction, thm32_source_graph, thm36_construction,
    thm36_windows_disjoint, thm61_construction, thm61_source_graph, NodeTransfer,
    Thm61Certificate, ViewTransferCertificate,
};
pub use constructions::view_isomorphic;
pub use enumerate::{
    connected_graphs_canonical, enumerate_connected_graphs, graphs_isomorphic,
    labeled_connected_count, scan_connected_graphs,
};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::labelings::{LabelingError, SchemeId, SchemeSpec};
use crate::verifiers::{self, VerifierError};
use crate::view::ViewFrame;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph enumeration supports up to {max} nodes, requested {n}")]
    TooLarge { n: usize, max: usize },
    #[error("n_max {n} exceeds the {limit}-node limit for scheme {scheme}")]
    SweepTooLarge {
        scheme: SchemeId,
        n: usize,
        limit: usize,
    },
    #[error("no repeated label window exists; the path is too short or the alphabet too wide")]
    NoRepeat,
    #[error("certificate invalid at target node {target_node}: {detail}")]
    CertificateInvalid { target_node: usize, detail: String },
    #[error("{0}")]
    BadInput(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Labeling(#[from] LabelingError),
    #[error(transparent)]
    Verifier(#[from] VerifierError),
}

/// A property graph with a node rejecting its oracular labeling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletenessFailure {
    pub graph: String,
    pub node: usize,
}

/// A non-property graph together with a labeling accepted by every node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SoundnessFailure {
    pub graph: String,
    pub labeling: Vec<u32>,
}

/// Outcome of an exhaustive completeness/soundness sweep. The failure lists
/// are empty exactly when the report passes; witnesses carry the full graph
/// and labeling so reports are self-contained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeReport {
    pub scheme: SchemeId,
    pub n_range: (usize, usize),
    pub dedup: bool,
    pub graphs_checked: u64,
    pub labelings_checked: u64,
    pub completeness_failures: Vec<CompletenessFailure>,
    pub soundness_failures: Vec<SoundnessFailure>,
}

impl SchemeReport {
    pub fn passed(&self) -> bool {
        self.completeness_failures.is_empty() && self.soundness_failures.is_empty()
    }
}

/// Per-scheme cap on the sweep size; soundness enumerates lambda^n labelings
/// per non-property graph.
pub fn sweep_limit(scheme: SchemeId) -> usize {
    match scheme {
        SchemeId::Cycle3 => 7,
        SchemeId::Cycle2View3 | SchemeId::Bipartite2 => 8,
        SchemeId::CycleN | SchemeId::AcyclicN => 5,
    }
}

struct GraphOutcome {
    labelings: u64,
    completeness: Vec<usize>,
    soundness_witness: Option<Vec<u32>>,
}

fn check_graph(g: &Graph, scheme: SchemeId) -> Result<GraphOutcome, OracleError> {
    let spec = SchemeSpec::for_graph(scheme, g);
    let n = g.node_count();
    let mut outcome = GraphOutcome {
        labelings: 0,
        completeness: Vec::new(),
        soundness_witness: None,
    };
    if spec.property.holds_for(g) {
        let l = scheme.label(g)?;
        outcome.labelings = 1;
        let map = verifiers::run_verifier(g, &l, &spec)?;
        outcome.completeness = map.rejectors().iter().map(|v| v.0).collect();
        return Ok(outcome);
    }

    // Soundness: every labeling over the scheme alphabet must have a
    // rejecting node.
    let lambda = spec.lambda;
    let mut labels = vec![0u32; n];
    let frames: Option<Vec<ViewFrame>> = (spec.d > 1).then(|| {
        g.nodes()
            .map(|v| ViewFrame::new(g, v, spec.d))
            .collect()
    });
    'labelings: loop {
        outcome.labelings += 1;
        let mut any_reject = false;
        if let Some(frames) = &frames {
            let full = crate::labelings::Labeling::new(labels.clone(), lambda)?;
            for frame in frames {
                let view = frame.instantiate(&full);
                let verdict = match scheme {
                    SchemeId::Cycle2View3 => verifiers::verify_2labels_view3(&view)?,
                    _ => unreachable!("only the view-3 scheme uses frames"),
                };
                if !verdict.is_accept() {
                    any_reject = true;
                    break;
                }
            }
        } else {
            for v in g.nodes() {
                if !verifiers::base_accepts_fast(g, &labels, v, scheme) {
                    any_reject = true;
                    break;
                }
            }
        }
        if !any_reject {
            outcome.soundness_witness = Some(labels.clone());
            break 'labelings;
        }
        // Odometer to the next labeling.
        let mut pos = 0;
        loop {
            if pos == n {
                break 'labelings;
            }
            labels[pos] += 1;
            if labels[pos] < lambda {
                break;
            }
            labels[pos] = 0;
            pos += 1;
        }
    }
    Ok(outcome)
}

/// Exhaustive completeness and soundness check of one scheme over every
/// connected graph with up to `n_max` nodes: property graphs must accept
/// their oracular labeling at every node, non-property graphs must reject
/// every labeling over the scheme alphabet at some node.
///
/// With `dedup` the sweep runs once per isomorphism class; verifier
/// decisions are isomorphism-invariant, so the two modes agree.
pub fn check_scheme(scheme: SchemeId, n_max: usize, dedup: bool) -> Result<SchemeReport, OracleError> {
    let limit = sweep_limit(scheme);
    if n_max > limit {
        return Err(OracleError::SweepTooLarge {
            scheme,
            n: n_max,
            limit,
        });
    }
    let mut report = SchemeReport {
        scheme,
        n_range: (1, n_max),
        dedup,
        graphs_checked: 0,
        labelings_checked: 0,
        completeness_failures: Vec::new(),
        soundness_failures: Vec::new(),
    };
    enum Failure {
        Labelings(u64),
        Completeness(CompletenessFailure),
        Soundness(SoundnessFailure),
    }
    let digest = |g: &Graph| -> Result<Vec<Failure>, OracleError> {
        let outcome = check_graph(g, scheme)?;
        let mut items = vec![Failure::Labelings(outcome.labelings)];
        items.extend(outcome.completeness.into_iter().map(|node| {
            Failure::Completeness(CompletenessFailure {
                graph: g.to_edge_list(),
                node,
            })
        }));
        if let Some(labeling) = outcome.soundness_witness {
            items.push(Failure::Soundness(SoundnessFailure {
                graph: g.to_edge_list(),
                labeling,
            }));
        }
        Ok(items)
    };
    for n in 1..=n_max {
        let (graphs, items) = if dedup {
            let reps = connected_graphs_canonical(n)?;
            let count = reps.len() as u64;
            let items: Vec<Vec<Failure>> = reps
                .par_iter()
                .map(digest)
                .collect::<Result<_, _>>()?;
            (count, items.into_iter().flatten().collect())
        } else {
            scan_connected_graphs(n, digest)?
        };
        report.graphs_checked += graphs;
        for item in items {
            match item {
                Failure::Labelings(c) => report.labelings_checked += c,
                Failure::Completeness(f) => report.completeness_failures.push(f),
                Failure::Soundness(f) => report.soundness_failures.push(f),
            }
        }
    }
    Ok(report)
}
