//! Verification and experimentation engine for the constructive structure
//! theory of P5-free graphs: exact chromatic/clique oracles, deterministic
//! P5-free generators, certified lemma procedures, independent certificate
//! verification, and property-test campaigns on desk-scale graphs.

pub mod bitset;
pub mod campaign;
pub mod cert;
pub mod error;
pub mod graph;
pub mod lemmas;
pub mod gen;
pub mod graph6;
pub mod increment;
pub mod oracle;
pub mod par;
pub mod verify;
pub mod rat;

pub use bitset::VertexSet;
pub use error::{Error, Result};
pub use graph::{Graph, PairKind};
pub use oracle::Oracle;
pub use rat::Rat;
