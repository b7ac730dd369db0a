//! Synthetic blockage scenarios: a handful of propagation paths, each seen
//! by a small neighbourhood of steering combinations, attenuated by timed
//! blockage events with linear ramps.

use serde::{Deserialize, Serialize};

use super::{ChannelError, ChannelTrace, PowerMatrix, CODEBOOK_SIZE};
use crate::engine::{SimRng, SimTime, Stream};

/// A propagation path, identified by the PAC that captures it best.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSpec {
    pub tx_index: usize,
    pub rx_index: usize,
    /// Power at the centre PAC, dB relative to the unblocked maximum.
    pub peak_power_db: f64,
    /// Half-width, in steering indices, of the neighbourhood that sees this path.
    pub angular_spread: usize,
    /// Loss per index step away from the centre PAC (Manhattan distance).
    pub spread_rolloff_db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockageEventSpec {
    pub path_id: usize,
    pub start: SimTime,
    pub end: SimTime,
    pub depth_db: f64,
    /// Linear transition time at each edge.
    pub ramp: SimTime,
}

impl BlockageEventSpec {
    /// Attenuation (dB, >= 0) this event applies at `t`. Zero outside `[start, end)`.
    pub fn attenuation_at(&self, t: SimTime) -> f64 {
        if t < self.start || t >= self.end {
            return 0.0;
        }
        let ramp = self.ramp.as_nanos();
        if ramp == 0 {
            return self.depth_db;
        }
        let into = (t - self.start).as_nanos();
        let left = (self.end - t).as_nanos();
        if into < ramp {
            self.depth_db * into as f64 / ramp as f64
        } else if left < ramp {
            self.depth_db * left as f64 / ramp as f64
        } else {
            self.depth_db
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockageScenario {
    pub duration: SimTime,
    pub paths: Vec<PathSpec>,
    pub events: Vec<BlockageEventSpec>,
}

impl BlockageScenario {
    pub fn validate(&self) -> Result<(), ChannelError> {
        let bad = |msg: String| Err(ChannelError::InvalidScenario(msg));
        if self.duration == SimTime::ZERO {
            return bad("duration must be positive".into());
        }
        if self.paths.is_empty() {
            return bad("at least one path is required".into());
        }
        for (i, p) in self.paths.iter().enumerate() {
            if p.tx_index >= CODEBOOK_SIZE || p.rx_index >= CODEBOOK_SIZE {
                return bad(format!(
                    "path {i}: beam indices ({}, {}) outside 0..{CODEBOOK_SIZE}",
                    p.tx_index, p.rx_index
                ));
            }
            if !p.peak_power_db.is_finite() || p.peak_power_db > 0.0 {
                return bad(format!("path {i}: peak power must be finite and <= 0 dB"));
            }
            if !p.spread_rolloff_db.is_finite() || p.spread_rolloff_db < 0.0 {
                return bad(format!("path {i}: spread rolloff must be >= 0 dB"));
            }
        }
        for (i, e) in self.events.iter().enumerate() {
            if e.path_id >= self.paths.len() {
                return bad(format!("event {i}: path {} does not exist", e.path_id));
            }
            if e.start >= e.end {
                return bad(format!(
                    "event {i}: start {} must precede end {}",
                    e.start, e.end
                ));
            }
            if e.end > self.duration {
                return bad(format!(
                    "event {i}: window ends at {} beyond scenario duration {}",
                    e.end, self.duration
                ));
            }
            if !e.depth_db.is_finite() || e.depth_db < 0.0 {
                return bad(format!("event {i}: depth must be >= 0 dB"));
            }
            if e.ramp.mul(2) > e.end - e.start {
                return bad(format!(
                    "event {i}: ramp {} exceeds half the event length",
                    e.ramp
                ));
            }
        }
        Ok(())
    }

    /// Total attenuation on `path_id` at `t`. Overlapping events add in dB.
    pub fn attenuation_db(&self, path_id: usize, t: SimTime) -> f64 {
        self.events
            .iter()
            .filter(|e| e.path_id == path_id)
            .map(|e| e.attenuation_at(t))
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticOptions {
    /// Measurement noise floor, dB relative.
    pub noise_floor_db: f64,
    /// Per-entry Gaussian measurement noise; zero disables it.
    pub noise_std_db: f64,
    pub seed: u64,
}

impl Default for SyntheticOptions {
    fn default() -> Self {
        SyntheticOptions {
            noise_floor_db: -60.0,
            noise_std_db: 0.0,
            seed: 0,
        }
    }
}

pub fn generate_synthetic(
    scenario: &BlockageScenario,
    sample_interval: SimTime,
) -> Result<ChannelTrace, ChannelError> {
    generate_synthetic_with(scenario, sample_interval, &SyntheticOptions::default())
}

pub fn generate_synthetic_with(
    scenario: &BlockageScenario,
    sample_interval: SimTime,
    opts: &SyntheticOptions,
) -> Result<ChannelTrace, ChannelError> {
    scenario.validate()?;
    if sample_interval == SimTime::ZERO {
        return Err(ChannelError::ZeroInterval);
    }
    let n = scenario
        .duration
        .as_nanos()
        .div_ceil(sample_interval.as_nanos()) as usize;
    let mut rng = SimRng::new(opts.seed, Stream::Channel);
    let mut matrices = Vec::with_capacity(n);
    let mut atten = vec![0.0; scenario.paths.len()];
    for k in 0..n {
        let t = sample_interval.mul(k as u64);
        for (id, a) in atten.iter_mut().enumerate() {
            *a = scenario.attenuation_db(id, t);
        }
        let mut m = PowerMatrix::filled(opts.noise_floor_db);
        for (path, a) in scenario.paths.iter().zip(&atten) {
            let s = path.angular_spread;
            let tx_lo = path.tx_index.saturating_sub(s);
            let tx_hi = (path.tx_index + s).min(CODEBOOK_SIZE - 1);
            let rx_lo = path.rx_index.saturating_sub(s);
            let rx_hi = (path.rx_index + s).min(CODEBOOK_SIZE - 1);
            for tx in tx_lo..=tx_hi {
                for rx in rx_lo..=rx_hi {
                    let dist = tx.abs_diff(path.tx_index) + rx.abs_diff(path.rx_index);
                    let p = path.peak_power_db - path.spread_rolloff_db * dist as f64 - a;
                    if p > m.get(tx, rx) {
                        m.set(tx, rx, p);
                    }
                }
            }
        }
        if opts.noise_std_db > 0.0 {
            for tx in 0..CODEBOOK_SIZE {
                for rx in 0..CODEBOOK_SIZE {
                    let v = m.get(tx, rx) + rng.gaussian(opts.noise_std_db);
                    m.set(tx, rx, v.clamp(opts.noise_floor_db, 0.0));
                }
            }
        }
        matrices.push(m);
    }
    ChannelTrace::new(sample_interval, matrices)
}
