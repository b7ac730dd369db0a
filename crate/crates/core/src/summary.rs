//! Run summary, recomputable from the per-architecture CSV rows.

use serde::{Deserialize, Serialize};

use crate::beam::UeArchitecture;
use crate::channel::{detect_drops, percentile_nearest_rank};
use crate::engine::SimTime;
use crate::stack::CsvRecord;

/// SINR drop, dB below the series' 95th percentile, that counts as a blockage.
pub const SUMMARY_BLOCKAGE_THRESHOLD_DB: f64 = 6.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockageWindow {
    pub start_s: f64,
    pub end_s: f64,
    pub depth_db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchSummary {
    pub architecture: UeArchitecture,
    pub samples: usize,
    pub mean_sinr_db: f64,
    pub min_sinr_db: f64,
    pub mean_goodput_bps: f64,
    /// Over rows that carry an RTT sample; 0 when there are none.
    pub p50_rtt_ms: f64,
    pub p95_rtt_ms: f64,
    pub blockage_events: Vec<BlockageWindow>,
    pub max_rlc_bytes: u64,
    pub dropped_bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub seed: u64,
    pub window_ms: f64,
    pub duration_s: f64,
    pub runs: Vec<ArchSummary>,
}

fn mean(v: impl ExactSizeIterator<Item = f64>) -> f64 {
    let n = v.len();
    if n == 0 {
        return 0.0;
    }
    v.sum::<f64>() / n as f64
}

/// Summarises one architecture's rows. `dropped_bytes` is not part of the
/// time series and comes from the RLC counters.
pub fn summarize(
    architecture: UeArchitecture,
    rows: &[CsvRecord],
    window: SimTime,
    dropped_bytes: u64,
) -> ArchSummary {
    let sinr: Vec<f64> = rows.iter().map(|r| r.sinr_db).collect();
    let rtts: Vec<f64> = rows.iter().map(|r| r.rtt_ms).filter(|&v| v > 0.0).collect();
    let pct = |p| {
        if rtts.is_empty() {
            0.0
        } else {
            percentile_nearest_rank(&rtts, p)
        }
    };
    let origin = rows.first().map_or(SimTime::ZERO, |r| {
        SimTime::from_secs_f64(r.t_s).saturating_sub(window)
    });
    let blockage_events =
        detect_drops(&sinr, origin, window, SUMMARY_BLOCKAGE_THRESHOLD_DB, window)
            .into_iter()
            .map(|b| BlockageWindow {
                start_s: b.start.as_secs_f64(),
                end_s: b.end.as_secs_f64(),
                depth_db: b.max_depth_db,
            })
            .collect();
    ArchSummary {
        architecture,
        samples: rows.len(),
        mean_sinr_db: mean(sinr.iter().copied()),
        min_sinr_db: sinr.iter().copied().reduce(f64::min).unwrap_or(0.0),
        mean_goodput_bps: mean(rows.iter().map(|r| r.tcp_goodput_bps)),
        p50_rtt_ms: pct(50.0),
        p95_rtt_ms: pct(95.0),
        blockage_events,
        max_rlc_bytes: rows.iter().map(|r| r.rlc_bytes).max().unwrap_or(0),
        dropped_bytes,
    }
}
