use serde::{Deserialize, Serialize};

use super::BeamError;
use crate::channel::CODEBOOK_SIZE;
use crate::engine::SimTime;

/// SS burst set timing. Blocks are spread evenly over the burst.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SsBurstConfig {
    pub set_period: SimTime,
    pub burst_duration: SimTime,
    pub n_tx_blocks: usize,
}

impl Default for SsBurstConfig {
    fn default() -> Self {
        SsBurstConfig {
            set_period: SimTime::from_millis(20),
            burst_duration: SimTime::from_millis(5),
            n_tx_blocks: CODEBOOK_SIZE,
        }
    }
}

impl SsBurstConfig {
    pub fn validate(&self) -> Result<(), BeamError> {
        if self.n_tx_blocks == 0 || self.n_tx_blocks > CODEBOOK_SIZE {
            return Err(BeamError::InvalidConfig(format!(
                "n_tx_blocks must be in 1..={CODEBOOK_SIZE}, got {}",
                self.n_tx_blocks
            )));
        }
        if self.burst_duration == SimTime::ZERO {
            return Err(BeamError::InvalidConfig(
                "burst duration must be positive".into(),
            ));
        }
        if self.set_period <= self.burst_duration {
            return Err(BeamError::InvalidConfig(format!(
                "set period {} must exceed burst duration {}",
                self.set_period, self.burst_duration
            )));
        }
        Ok(())
    }

    /// Nominal spacing between consecutive SS blocks.
    pub fn block_spacing(&self) -> SimTime {
        SimTime::from_nanos(self.burst_duration.as_nanos() / self.n_tx_blocks as u64)
    }

    /// Offset of block `k` from the burst start: `floor(k * duration / n)`.
    pub fn block_offset(&self, k: usize) -> SimTime {
        SimTime::from_nanos(self.burst_duration.as_nanos() * k as u64 / self.n_tx_blocks as u64)
    }

    /// Whether any SS block starts inside `[slot_start, slot_start + slot_len)`.
    pub fn slot_has_ss_block(&self, slot_start: SimTime, slot_len: SimTime) -> bool {
        let offset = slot_start.rem(self.set_period);
        if offset >= self.burst_duration {
            return false;
        }
        let end = offset + slot_len;
        (0..self.n_tx_blocks).any(|k| {
            let b = self.block_offset(k);
            b >= offset && b < end
        })
    }
}

/// Burst set start times `0, P, 2P, ...` up to and including `horizon`.
pub fn burst_set_times(cfg: &SsBurstConfig, horizon: SimTime) -> Vec<SimTime> {
    let n = horizon.div_floor(cfg.set_period) + 1;
    (0..n).map(|k| cfg.set_period.mul(k)).collect()
}

/// Burst set start times inside the half-open span `[0, span)`.
pub fn burst_set_times_within(cfg: &SsBurstConfig, span: SimTime) -> Vec<SimTime> {
    let n = span.as_nanos().div_ceil(cfg.set_period.as_nanos());
    (0..n).map(|k| cfg.set_period.mul(k)).collect()
}

/// `(time, tx_index)` for every SS block of the burst starting at `burst_start`.
pub fn ss_block_schedule(cfg: &SsBurstConfig, burst_start: SimTime) -> Vec<(SimTime, usize)> {
    (0..cfg.n_tx_blocks)
        .map(|k| (burst_start + cfg.block_offset(k), k))
        .collect()
}

/// RX direction an analog UE listens on during burst set `burst_set_index`.
pub fn analog_rx_direction(burst_set_index: u64) -> usize {
    (burst_set_index % CODEBOOK_SIZE as u64) as usize
}
