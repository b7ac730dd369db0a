use serde::{Deserialize, Serialize};

use super::{harq::HarqEntity, McsEntry, McsTable, PhyError};
use crate::beam::BeamPair;
use crate::channel::{ChannelError, ChannelTrace};
use crate::engine::SimTime;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkConfig {
    pub bandwidth_hz: f64,
    /// SINR of a PAC whose relative power is 0 dB.
    pub peak_sinr_db: f64,
    pub slot_duration: SimTime,
    pub overhead_fraction: f64,
    pub harq_processes: usize,
    pub harq_rtt_slots: u32,
    pub max_harq_tx: u32,
    /// OFDM symbols lost to SS blocks in a slot that carries one.
    pub ss_symbols: u32,
    pub symbols_per_slot: u32,
}

impl Default for LinkConfig {
    fn default() -> Self {
        LinkConfig {
            bandwidth_hz: 4.0e8,
            peak_sinr_db: 30.0,
            slot_duration: SimTime::from_micros(125),
            overhead_fraction: 0.14,
            harq_processes: 8,
            harq_rtt_slots: 4,
            max_harq_tx: 3,
            ss_symbols: 2,
            symbols_per_slot: 14,
        }
    }
}

impl LinkConfig {
    pub fn validate(&self) -> Result<(), PhyError> {
        let bad = |m: &str| Err(PhyError::InvalidConfig(m.to_string()));
        if !self.bandwidth_hz.is_finite() || self.bandwidth_hz <= 0.0 {
            return bad("bandwidth must be positive");
        }
        if !self.peak_sinr_db.is_finite() {
            return bad("peak SINR must be finite");
        }
        if self.slot_duration == SimTime::ZERO {
            return bad("slot duration must be positive");
        }
        if !(0.0..1.0).contains(&self.overhead_fraction) {
            return bad("overhead fraction must lie in [0, 1)");
        }
        if self.harq_rtt_slots == 0 {
            return bad("HARQ round trip must be at least one slot");
        }
        if self.harq_processes < self.harq_rtt_slots as usize {
            return bad("need at least as many HARQ processes as HARQ round-trip slots");
        }
        if self.max_harq_tx == 0 {
            return bad("max HARQ transmissions must be at least 1");
        }
        if self.symbols_per_slot == 0 || self.ss_symbols >= self.symbols_per_slot {
            return bad("SS symbols must be fewer than symbols per slot");
        }
        Ok(())
    }

    pub fn ss_penalty(&self) -> f64 {
        1.0 - self.ss_symbols as f64 / self.symbols_per_slot as f64
    }

    pub fn harq_rtt(&self) -> SimTime {
        self.slot_duration.mul(self.harq_rtt_slots as u64)
    }
}

/// Single-link SINR: peak SINR plus the pair's relative power. No interference term.
pub fn compute_sinr(
    trace: &ChannelTrace,
    t: SimTime,
    pair: BeamPair,
    cfg: &LinkConfig,
) -> Result<f64, ChannelError> {
    Ok(cfg.peak_sinr_db + trace.power_at(t, pair)?)
}

/// Transport block size in bytes for one slot at `mcs`; zero in outage.
pub fn slot_capacity(mcs: Option<&McsEntry>, cfg: &LinkConfig, slot_is_ss_overlap: bool) -> u64 {
    let Some(mcs) = mcs else { return 0 };
    let penalty = if slot_is_ss_overlap {
        cfg.ss_penalty()
    } else {
        1.0
    };
    let bits = cfg.bandwidth_hz
        * mcs.spectral_efficiency
        * cfg.slot_duration.as_secs_f64()
        * (1.0 - cfg.overhead_fraction)
        * penalty;
    // absorbs representation error so exact products do not floor one byte low
    (bits / 8.0 + 1e-6).floor() as u64
}

/// Radio state of the link: active pair, last SINR, the MCS it maps to, and HARQ.
#[derive(Debug)]
pub struct LinkState<P> {
    pub active_pair: BeamPair,
    pub sinr_db: f64,
    pub mcs: Option<McsEntry>,
    pub harq: HarqEntity<P>,
}

impl<P> LinkState<P> {
    pub fn new(active_pair: BeamPair, sinr_db: f64, table: &McsTable, cfg: &LinkConfig) -> Self {
        LinkState {
            active_pair,
            sinr_db,
            mcs: table.select(sinr_db).copied(),
            harq: HarqEntity::new(cfg),
        }
    }

    /// Records a new SINR observation and re-runs rate adaptation on it.
    pub fn observe_sinr(&mut self, sinr_db: f64, table: &McsTable) {
        self.sinr_db = sinr_db;
        self.mcs = table.select(sinr_db).copied();
    }
}
