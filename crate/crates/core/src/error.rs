//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {v} out of range for a graph on {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },

    #[error("self-loop at vertex {v}")]
    SelfLoop { v: usize },

    #[error("sets overlap")]
    OverlappingSets,

    #[error("set is empty where a nonempty set is required")]
    EmptySet,

    #[error("graph6: {0}")]
    Graph6(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("instance too large: |S| = {size} exceeds the exact-solve budget {budget}")]
    BudgetExceeded { size: usize, budget: usize },

    #[error("{op}: parameter {param} = {value} outside required range {range}")]
    RangeError {
        op: &'static str,
        param: &'static str,
        value: String,
        range: &'static str,
    },

    #[error("{op}: precondition `{clause}` violated{}", witness.as_ref().map(|w| format!(" (witness: {w})")).unwrap_or_default())]
    Precondition {
        op: &'static str,
        clause: String,
        witness: Option<String>,
    },

    #[error("input is not P5-free: induced P5 at {0:?}")]
    P5Found([usize; 5]),

    #[error("{op}: strict-mode magnitude gate unmet: {gate}")]
    StrictGate { op: &'static str, gate: String },

    #[error("{op}: structural hypothesis failed: {what} (witness: {witness})")]
    HypothesisFailed {
        op: &'static str,
        what: String,
        witness: String,
    },

    #[error("Erdos-Hajnal bound violated for exponent {a}: best witness has {got} vertices, need {need} on {n} vertices")]
    EhBoundViolated {
        a: String,
        got: usize,
        need: usize,
        n: usize,
    },

    #[error("{op}: inner blockade supply failed on subgraph {set:?}: {reason}")]
    InnerSupplyFailed {
        op: &'static str,
        set: Vec<usize>,
        reason: String,
    },

    #[error("{op}: no verifiable outcome found ({analysis})")]
    NoVerifiableOutcome { op: &'static str, analysis: String },

    #[error("certificate rejected: {0}")]
    CertificateRejected(String),

    #[error("unknown lemma id `{0}`")]
    UnknownLemma(String),

    #[error("unknown family `{0}`")]
    UnknownFamily(String),

    #[error("generator retry cap ({0}) exceeded")]
    RetryCapExceeded(usize),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
