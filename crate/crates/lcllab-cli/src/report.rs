//! Machine-readable run reports with a stable, versioned schema.

use std::collections::BTreeMap;

use serde::Serialize;

use lcllab_core::oracle::SchemeReport;
use lcllab_core::verifiers::Verdict;
use lcllab_core::NodeId;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub subject: String,
    /// Per-node verdicts, "accept"/"reject", in node order.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<String>,
    pub summary: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Imagined-labeling patches per accepting node under refix.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub imagined: Vec<ImaginedPatch>,
    /// Failure witnesses or certificates, self-contained.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<serde_json::Value>,
    pub wall_time_ms: u64,
}

#[derive(Serialize)]
pub struct ImaginedPatch {
    pub node: usize,
    pub changes: Vec<(usize, u32)>,
}

impl Report {
    pub fn new(command: &str, subject: &str) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            subject: subject.into(),
            verdicts: Vec::new(),
            summary: BTreeMap::new(),
            notes: Vec::new(),
            imagined: Vec::new(),
            witnesses: Vec::new(),
            wall_time_ms: 0,
        }
    }

    pub fn set_verdicts(&mut self, verdicts: &[Verdict]) {
        self.verdicts = verdicts
            .iter()
            .map(|v| if v.is_accept() { "accept" } else { "reject" }.to_string())
            .collect();
        let accepts = verdicts.iter().filter(|v| v.is_accept()).count() as u64;
        self.summary.insert("nodes".into(), verdicts.len() as u64);
        self.summary.insert("accepts".into(), accepts);
        self.summary
            .insert("rejects".into(), verdicts.len() as u64 - accepts);
    }

    pub fn set_sweep(&mut self, sweep: &SchemeReport) {
        self.summary
            .insert("graphs_checked".into(), sweep.graphs_checked);
        self.summary
            .insert("labelings_checked".into(), sweep.labelings_checked);
        self.summary.insert(
            "completeness_failures".into(),
            sweep.completeness_failures.len() as u64,
        );
        self.summary.insert(
            "soundness_failures".into(),
            sweep.soundness_failures.len() as u64,
        );
        self.notes.push(format!(
            "n range {}..={}, {}",
            sweep.n_range.0,
            sweep.n_range.1,
            if sweep.dedup {
                "one representative per isomorphism class"
            } else {
                "all labeled graphs"
            }
        ));
        for f in &sweep.completeness_failures {
            self.witnesses
                .push(serde_json::json!({"kind": "completeness", "graph": f.graph, "node": f.node}));
        }
        for f in &sweep.soundness_failures {
            self.witnesses.push(
                serde_json::json!({"kind": "soundness", "graph": f.graph, "labeling": f.labeling}),
            );
        }
    }

    pub fn push_imagined(&mut self, node: usize, patch: &BTreeMap<NodeId, u32>) {
        let changes: Vec<(usize, u32)> = patch.iter().map(|(v, l)| (v.0, *l)).collect();
        if !changes.is_empty() {
            self.imagined.push(ImaginedPatch { node, changes });
        }
    }

    pub fn note(&mut self, text: &str) {
        self.notes.push(text.to_string());
    }

    pub fn push_witness(&mut self, value: serde_json::Value) {
        self.witnesses.push(value);
    }

    /// Plain-text rendering: problem, verdict counts, notes, one verdict
    /// line per node.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}: {}\n", self.command, self.subject);
        for (k, v) in &self.summary {
            out.push_str(&format!("  {k}: {v}\n"));
        }
        for note in &self.notes {
            out.push_str(&format!("  {note}\n"));
        }
        for p in &self.imagined {
            out.push_str(&format!("  imagined[{}]: {:?}\n", p.node, p.changes));
        }
        if !self.verdicts.is_empty() {
            for (v, verdict) in self.verdicts.iter().enumerate() {
                out.push_str(&format!("  node {v}: {verdict}\n"));
            }
        }
        if !self.witnesses.is_empty() {
            out.push_str(&format!("  witnesses: {}\n", self.witnesses.len()));
        }
        out.push_str(&format!("  wall_time_ms: {}\n", self.wall_time_ms));
        out
    }
}
