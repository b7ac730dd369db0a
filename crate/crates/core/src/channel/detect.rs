use serde::Serialize;

use super::{ChannelError, ChannelTrace};
use crate::beam::BeamPair;
use crate::engine::SimTime;

/// A maximal interval during which a series sat at least `threshold` below
/// its 95th-percentile level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectedBlockage {
    pub start: SimTime,
    pub end: SimTime,
    /// Reference level minus the lowest value inside the interval.
    pub max_depth_db: f64,
}

impl DetectedBlockage {
    pub fn duration(&self) -> SimTime {
        self.end - self.start
    }
}

/// Nearest-rank percentile (`p` in `(0, 100]`). Returns NaN for an empty slice.
pub fn percentile_nearest_rank(values: &[f64], p: f64) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rank = ((p / 100.0) * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

/// Finds blockage intervals in a uniformly sampled series. Sample `k` covers
/// `[origin + k*interval, origin + (k+1)*interval)`.
pub fn detect_drops(
    values: &[f64],
    origin: SimTime,
    interval: SimTime,
    threshold_db: f64,
    min_duration: SimTime,
) -> Vec<DetectedBlockage> {
    if values.is_empty() {
        return Vec::new();
    }
    let reference = percentile_nearest_rank(values, 95.0);
    let cutoff = reference - threshold_db;
    let mut out = Vec::new();
    let mut k = 0;
    while k < values.len() {
        if values[k] > cutoff {
            k += 1;
            continue;
        }
        let first = k;
        let mut lowest = values[k];
        while k < values.len() && values[k] <= cutoff {
            lowest = lowest.min(values[k]);
            k += 1;
        }
        let ev = DetectedBlockage {
            start: origin + interval.mul(first as u64),
            end: origin + interval.mul(k as u64),
            max_depth_db: reference - lowest,
        };
        if ev.duration() >= min_duration {
            out.push(ev);
        }
    }
    out
}

pub fn detect_blockage_events(
    trace: &ChannelTrace,
    pac: BeamPair,
    threshold_db: f64,
    min_duration: SimTime,
) -> Result<Vec<DetectedBlockage>, ChannelError> {
    if threshold_db.is_nan() || threshold_db <= 0.0 {
        return Err(ChannelError::InvalidThreshold(threshold_db));
    }
    let series: Vec<f64> = trace.matrices().iter().map(|m| m.at(pac)).collect();
    Ok(detect_drops(
        &series,
        SimTime::ZERO,
        trace.sample_interval(),
        threshold_db,
        min_duration,
    ))
}
