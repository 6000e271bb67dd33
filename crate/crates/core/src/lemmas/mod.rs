//! Constructive procedures from the structure theory of P5-free graphs.
//!
//! Every operation follows its source proof step by step, evaluates each
//! claimed inequality in exact rational arithmetic before recording it, and
//! returns a [`Certificate`] the harness re-verifies independently. Strict
//! mode enforces the magnitude preconditions of the original statements
//! (usually infeasible on desk-scale instances); relaxed mode waives only
//! magnitude gates, never structural hypotheses, and stamps each waiver into
//! the trace.

pub mod anti;
pub mod bip;
pub mod chirdl;
pub mod grow;
pub mod gyarfas;
pub mod noanti;
pub mod phi;
pub mod search;

use crate::bitset::VertexSet;
use crate::cert::Certificate;
use crate::graph::PairKind;
use crate::rat::Rat;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Strict,
    Relaxed,
}

impl Mode {
    pub fn is_relaxed(self) -> bool {
        matches!(self, Mode::Relaxed)
    }
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "strict" => Ok(Mode::Strict),
            "relaxed" => Ok(Mode::Relaxed),
            other => Err(format!("unknown mode `{other}` (strict|relaxed)")),
        }
    }
}

/// Structured payload of a lemma outcome, for chaining procedures. The
/// certificate alone suffices for verification.
#[derive(Clone, Debug)]
pub enum Payload {
    Vertex {
        v: usize,
    },
    Pair {
        kind: PairKind,
        a: VertexSet,
        b: VertexSet,
    },
    /// An (eps,chi)-dense induced subgraph.
    Dense {
        f: VertexSet,
        eps: Rat,
    },
    /// Pure pair (complete or anticomplete, whichever was found).
    PurePair {
        kind: PairKind,
        a: VertexSet,
        b: VertexSet,
    },
    Blockade {
        blocks: Vec<VertexSet>,
        tag: BlockadeTag,
    },
    /// anticomplete_extract first bullet: per-index complete partners.
    CompletePartners {
        indices: Vec<usize>,
        partners: Vec<VertexSet>,
    },
    /// averaged_extract first bullet.
    AveragedPartners {
        block_index: usize,
        indices: Vec<usize>,
        partners: Vec<VertexSet>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockadeTag {
    Pure,
    Complete,
    Anticomplete,
    Dense(Rat),
    /// Every ordered pair is anticomplete or (eps,chi)-dense.
    AnticompleteOrDense(Rat),
}

#[derive(Clone, Debug)]
pub struct LemmaOutcome {
    pub cert: Certificate,
    pub payload: Payload,
}

impl LemmaOutcome {
    pub fn tag(&self) -> &str {
        &self.cert.kind
    }

    pub(crate) fn sets_vec(&self, name: &str) -> Vec<usize> {
        self.cert.sets.get(name).cloned().unwrap_or_default()
    }
}
