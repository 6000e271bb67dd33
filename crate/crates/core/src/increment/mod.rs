//! Chromatic density increment machinery: the round-one increment toward
//! pure or chi-dense blockades, the layout-based conversion theorem, the
//! anticomplete-or-dense midway lemma, the round-two increment toward
//! complete blockades, the main trichotomy, and the constant ledger.

pub mod avg;
pub mod convert;
pub mod dense1;
pub mod extract;
pub mod ledger;
pub mod midway;
pub mod round1;
pub mod round2;
pub mod trichotomy;

pub use ledger::{ledger, ConstantLedger};
