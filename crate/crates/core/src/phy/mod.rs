//! Radio abstraction: SINR of the active pair, threshold rate adaptation,
//! per-slot transport block sizing and HARQ.

mod harq;
mod link;
mod mcs;

pub use harq::{HarqCounters, HarqEntity, HarqProcess, HarqState, SlotOutcome};
pub use link::{compute_sinr, slot_capacity, LinkConfig, LinkState};
pub use mcs::{select_mcs, McsEntry, McsTable};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PhyError {
    #[error("invalid MCS table: {0}")]
    InvalidMcsTable(String),
    #[error("MCS table line {line}: {message}")]
    McsFile { line: u64, message: String },
    #[error("invalid link configuration: {0}")]
    InvalidConfig(String),
}
