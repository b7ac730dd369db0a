//! NR beam management: SS burst set timing, per-architecture measurement
//! acquisition, the measurement store, and the beam-pair update rule.

mod schedule;
mod store;
mod tracker;

pub use schedule::{
    analog_rx_direction, burst_set_times, burst_set_times_within, ss_block_schedule, SsBurstConfig,
};
pub use store::{select_beam_pair, select_beam_pair_with_margin, Measurement, MeasurementStore};
pub use tracker::{acquire_measurements, measure_block, BeamTracker, MeasurementNoise};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::CODEBOOK_SIZE;

/// A (gNB TX steering index, UE RX steering index) combination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BeamPair {
    tx: u8,
    rx: u8,
}

impl BeamPair {
    pub fn new(tx: usize, rx: usize) -> Option<Self> {
        (tx < CODEBOOK_SIZE && rx < CODEBOOK_SIZE).then_some(BeamPair {
            tx: tx as u8,
            rx: rx as u8,
        })
    }

    pub(crate) fn from_flat(i: usize) -> Self {
        BeamPair {
            tx: (i / CODEBOOK_SIZE) as u8,
            rx: (i % CODEBOOK_SIZE) as u8,
        }
    }

    pub fn tx(self) -> usize {
        self.tx as usize
    }

    pub fn rx(self) -> usize {
        self.rx as usize
    }

    /// All 144 pairs in lexicographic (tx, rx) order.
    pub fn all() -> impl Iterator<Item = BeamPair> {
        (0..CODEBOOK_SIZE * CODEBOOK_SIZE).map(BeamPair::from_flat)
    }
}

impl fmt::Display for BeamPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.tx, self.rx)
    }
}

/// UE front-end architecture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UeArchitecture {
    /// Observes all RX directions in every SS block.
    Digital,
    /// Observes one RX direction per burst set, round-robin.
    Analog,
    /// Keeps the initial-access pair for the whole run.
    #[serde(rename = "none")]
    NoTracking,
}

impl UeArchitecture {
    pub const ALL: [UeArchitecture; 3] = [
        UeArchitecture::Digital,
        UeArchitecture::Analog,
        UeArchitecture::NoTracking,
    ];

    pub fn name(self) -> &'static str {
        match self {
            UeArchitecture::Digital => "digital",
            UeArchitecture::Analog => "analog",
            UeArchitecture::NoTracking => "none",
        }
    }
}

impl fmt::Display for UeArchitecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for UeArchitecture {
    type Err = BeamError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "digital" => Ok(UeArchitecture::Digital),
            "analog" => Ok(UeArchitecture::Analog),
            "none" | "no-tracking" | "notracking" => Ok(UeArchitecture::NoTracking),
            other => Err(BeamError::UnknownArchitecture(other.to_string())),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum BeamError {
    #[error("measurement store has no measured entries")]
    EmptyStore,
    #[error("unknown UE architecture {0:?} (expected digital, analog or none)")]
    UnknownArchitecture(String),
    #[error("invalid SS burst configuration: {0}")]
    InvalidConfig(String),
}
