//! Locally checkable labeling schemes for cycle detection, cycle absence and
//! bipartiteness on anonymous graphs, an error-resilient meta-verifier that
//! repairs budgeted label corruption, exhaustive completeness/soundness
//! oracles over all small graphs, executable impossibility constructions,
//! and a 2-round CONGEST bipartiteness protocol.

pub mod adversary;
pub mod congest;
pub mod graph;
pub mod labelings;
pub mod oracle;
pub mod refix;
pub mod strings;
pub mod verifiers;
pub mod view;

pub use graph::{Graph, GraphError, NodeId, Route};
pub use labelings::{GraphProperty, Labeling, LabelingError, SchemeId, SchemeSpec};
pub use refix::{ErrorBudget, ImaginedLabeling};
pub use verifiers::{Alg3Mode, ParentResult, Verdict, VerdictMap};
pub use view::{local_view, LocalView};
