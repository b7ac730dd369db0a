//! Per-window output rows and their CSV form.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::beam::BeamPair;
use crate::engine::SimTime;

pub const CSV_HEADER: [&str; 8] = [
    "t_s",
    "sinr_db",
    "phy_rate_bps",
    "tcp_goodput_bps",
    "rtt_ms",
    "tx_beam",
    "rx_beam",
    "rlc_bytes",
];

/// One sample row. `t` is the end of the window the rates cover.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeSeriesRecord {
    pub t: SimTime,
    pub sinr_db: f64,
    pub phy_rate_bps: f64,
    pub tcp_goodput_bps: f64,
    /// Latest RTT sample; `None` before the first one.
    pub rtt: Option<SimTime>,
    pub beam_pair: BeamPair,
    pub rlc_occupancy: u64,
}

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    t_s: f64,
    sinr_db: f64,
    phy_rate_bps: f64,
    tcp_goodput_bps: f64,
    rtt_ms: f64,
    tx_beam: u8,
    rx_beam: u8,
    rlc_bytes: u64,
}

/// Parsed form of an output row, in the units of the file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsvRecord {
    pub t_s: f64,
    pub sinr_db: f64,
    pub phy_rate_bps: f64,
    pub tcp_goodput_bps: f64,
    /// 0 when no RTT sample exists yet.
    pub rtt_ms: f64,
    pub tx_beam: u8,
    pub rx_beam: u8,
    pub rlc_bytes: u64,
}

impl From<CsvRow> for CsvRecord {
    fn from(r: CsvRow) -> Self {
        CsvRecord {
            t_s: r.t_s,
            sinr_db: r.sinr_db,
            phy_rate_bps: r.phy_rate_bps,
            tcp_goodput_bps: r.tcp_goodput_bps,
            rtt_ms: r.rtt_ms,
            tx_beam: r.tx_beam,
            rx_beam: r.rx_beam,
            rlc_bytes: r.rlc_bytes,
        }
    }
}

impl TimeSeriesRecord {
    pub fn to_csv_record(&self) -> CsvRecord {
        CsvRecord {
            t_s: self.t.as_secs_f64(),
            sinr_db: self.sinr_db,
            phy_rate_bps: self.phy_rate_bps,
            tcp_goodput_bps: self.tcp_goodput_bps,
            rtt_ms: self.rtt.map_or(0.0, SimTime::as_millis_f64),
            tx_beam: self.beam_pair.tx() as u8,
            rx_beam: self.beam_pair.rx() as u8,
            rlc_bytes: self.rlc_occupancy,
        }
    }
}

/// Accumulates byte counts between samples and turns them into rates.
#[derive(Debug, Clone)]
pub struct Recorder {
    window: SimTime,
    phy_bytes: u64,
    goodput_bytes: u64,
    rows: Vec<TimeSeriesRecord>,
}

impl Recorder {
    pub fn new(window: SimTime) -> Self {
        assert!(window > SimTime::ZERO, "sample window must be positive");
        Recorder {
            window,
            phy_bytes: 0,
            goodput_bytes: 0,
            rows: Vec::new(),
        }
    }

    pub fn window(&self) -> SimTime {
        self.window
    }

    pub fn add_phy_bytes(&mut self, bytes: u64) {
        self.phy_bytes += bytes;
    }

    pub fn add_goodput_bytes(&mut self, bytes: u64) {
        self.goodput_bytes += bytes;
    }

    /// Closes the window ending at `t` and appends a row.
    pub fn record_sample(
        &mut self,
        t: SimTime,
        sinr_db: f64,
        rtt: Option<SimTime>,
        beam_pair: BeamPair,
        rlc_occupancy: u64,
    ) -> &TimeSeriesRecord {
        let secs = self.window.as_secs_f64();
        self.rows.push(TimeSeriesRecord {
            t,
            sinr_db,
            phy_rate_bps: self.phy_bytes as f64 * 8.0 / secs,
            tcp_goodput_bps: self.goodput_bytes as f64 * 8.0 / secs,
            rtt,
            beam_pair,
            rlc_occupancy,
        });
        self.phy_bytes = 0;
        self.goodput_bytes = 0;
        self.rows.last().expect("just pushed")
    }

    pub fn rows(&self) -> &[TimeSeriesRecord] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<TimeSeriesRecord> {
        self.rows
    }
}

pub fn write_csv<W: Write>(rows: &[TimeSeriesRecord], out: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    for r in rows {
        let c = r.to_csv_record();
        w.serialize(CsvRow {
            t_s: c.t_s,
            sinr_db: c.sinr_db,
            phy_rate_bps: c.phy_rate_bps,
            tcp_goodput_bps: c.tcp_goodput_bps,
            rtt_ms: c.rtt_ms,
            tx_beam: c.tx_beam,
            rx_beam: c.rx_beam,
            rlc_bytes: c.rlc_bytes,
        })?;
    }
    if rows.is_empty() {
        w.write_record(CSV_HEADER)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> csv::Result<Vec<CsvRecord>> {
    let mut r = csv::Reader::from_reader(input);
    r.deserialize::<CsvRow>()
        .map(|row| row.map(CsvRecord::from))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair() -> BeamPair {
        BeamPair::new(4, 7).unwrap()
    }

    #[test]
    fn idle_link_rates_zero_keep_last_rtt() {
        let mut rec = Recorder::new(SimTime::from_millis(100));
        let rtt = Some(SimTime::from_micros(10_250));
        let r = *rec.record_sample(SimTime::from_millis(100), 30.0, rtt, pair(), 0);
        assert_eq!(r.phy_rate_bps, 0.0);
        assert_eq!(r.tcp_goodput_bps, 0.0);
        assert_eq!(r.rtt, rtt);
    }

    #[test]
    fn rates_are_window_deltas() {
        let mut rec = Recorder::new(SimTime::from_millis(100));
        rec.add_phy_bytes(1_000_000);
        rec.add_goodput_bytes(900_000);
        let r = *rec.record_sample(SimTime::from_millis(100), 30.0, None, pair(), 5);
        assert_eq!(r.phy_rate_bps, 80e6);
        assert_eq!(r.tcp_goodput_bps, 72e6);
        let r = *rec.record_sample(SimTime::from_millis(200), 30.0, None, pair(), 5);
        assert_eq!(r.phy_rate_bps, 0.0);
    }

    #[test]
    fn csv_round_trip() {
        let mut rec = Recorder::new(SimTime::from_millis(100));
        rec.add_phy_bytes(12345);
        rec.record_sample(
            SimTime::from_millis(100),
            21.25,
            Some(SimTime::from_micros(10_375)),
            pair(),
            42,
        );
        rec.record_sample(SimTime::from_millis(200), 16.0, None, pair(), 0);
        let mut buf = Vec::new();
        write_csv(rec.rows(), &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(&(CSV_HEADER.join(",") + "\n")));
        assert!(!text.contains('\r'));
        let back = read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[0], rec.rows()[0].to_csv_record());
        assert_eq!(back[0].rtt_ms, 10.375);
        assert_eq!(back[1].rtt_ms, 0.0);
    }

    #[test]
    fn empty_csv_still_has_header() {
        let mut buf = Vec::new();
        write_csv(&[], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap().trim_end(),
            CSV_HEADER.join(",")
        );
    }
}
