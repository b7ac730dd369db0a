//! Byte-sequenced TCP sender (NewReno, optionally CUBIC window growth) and a
//! cumulative-ACK receiver. Segments carry the send timestamp, which the
//! receiver echoes for RTT measurement.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::engine::SimTime;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TcpSegment {
    pub seq: u64,
    pub len: u32,
    /// Timestamp value: when the sender emitted it.
    pub sent_at: SimTime,
}

impl TcpSegment {
    pub fn end(&self) -> u64 {
        self.seq + self.len as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ack {
    pub ack: u64,
    /// Echoed timestamp of the segment that advanced the window, if any.
    pub ts_echo: Option<SimTime>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum CongestionControl {
    #[default]
    NewReno,
    Cubic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CcState {
    SlowStart,
    CongestionAvoidance,
    FastRecovery,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TcpConfig {
    pub mss: u32,
    /// TCP/IP header bytes added to each segment on the wire.
    pub header_bytes: u32,
    pub initial_cwnd_segments: u32,
    pub min_rto: SimTime,
    pub initial_rto: SimTime,
    pub max_rto: SimTime,
    /// Advertised receive window, bytes.
    pub receive_window: u64,
    pub congestion_control: CongestionControl,
}

impl Default for TcpConfig {
    fn default() -> Self {
        TcpConfig {
            mss: 1400,
            header_bytes: 40,
            initial_cwnd_segments: 10,
            min_rto: SimTime::from_millis(200),
            initial_rto: SimTime::from_secs(1),
            max_rto: SimTime::from_secs(60),
            receive_window: 4 << 20,
            congestion_control: CongestionControl::NewReno,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AckOutcome {
    /// Cumulative ACK advanced by this many bytes.
    NewData(u64),
    Duplicate,
    /// Behind the highest ACK already seen; ignored.
    Stale,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TcpCounters {
    pub segments_sent: u64,
    pub bytes_sent: u64,
    pub retransmitted_bytes: u64,
    pub fast_retransmits: u64,
    pub timeouts: u64,
}

const CUBIC_C: f64 = 0.4;
const CUBIC_BETA: f64 = 0.7;

#[derive(Debug, Clone, Default)]
struct CubicState {
    w_max: f64,
    epoch_start: Option<SimTime>,
    k_secs: f64,
    w_est: f64,
}

/// Sender-side connection state.
#[derive(Debug, Clone)]
pub struct TcpConnState {
    cfg: TcpConfig,
    pub cwnd: u64,
    pub ssthresh: u64,
    pub state: CcState,
    pub srtt: Option<SimTime>,
    pub rttvar: SimTime,
    pub rto: SimTime,
    pub next_seq: u64,
    pub high_ack: u64,
    pub dup_ack_count: u32,
    /// Highest sequence sent when recovery or the last timeout began.
    recover: Option<u64>,
    /// Highest sequence ever sent.
    snd_max: u64,
    /// Timeouts since the last ACK of new data.
    backoffs: u32,
    retransmit_next: Option<u64>,
    rto_deadline: Option<SimTime>,
    latest_rtt: Option<SimTime>,
    cubic: CubicState,
    counters: TcpCounters,
}

impl TcpConnState {
    pub fn new(cfg: TcpConfig) -> Self {
        let mss = cfg.mss as u64;
        TcpConnState {
            cwnd: mss * cfg.initial_cwnd_segments as u64,
            ssthresh: u64::MAX,
            state: CcState::SlowStart,
            srtt: None,
            rttvar: SimTime::ZERO,
            rto: cfg.initial_rto,
            next_seq: 0,
            high_ack: 0,
            dup_ack_count: 0,
            recover: None,
            snd_max: 0,
            backoffs: 0,
            retransmit_next: None,
            rto_deadline: None,
            latest_rtt: None,
            cubic: CubicState::default(),
            counters: TcpCounters::default(),
            cfg,
        }
    }

    pub fn config(&self) -> &TcpConfig {
        &self.cfg
    }

    pub fn mss(&self) -> u64 {
        self.cfg.mss as u64
    }

    pub fn bytes_in_flight(&self) -> u64 {
        self.next_seq - self.high_ack
    }

    pub fn counters(&self) -> TcpCounters {
        self.counters
    }

    pub fn rto_deadline(&self) -> Option<SimTime> {
        self.rto_deadline
    }

    pub fn latest_rtt(&self) -> Option<SimTime> {
        self.latest_rtt
    }

    fn send_window(&self) -> u64 {
        self.cwnd.min(self.cfg.receive_window)
    }

    /// Next segment the sender may emit at `now`, if the window allows one.
    /// Full-buffer source: new data is always available.
    pub fn poll_segment(&mut self, now: SimTime) -> Option<TcpSegment> {
        let mss = self.mss();
        let seg = if let Some(seq) = self.retransmit_next.take() {
            let len = mss.min(self.next_seq.max(seq + mss) - seq) as u32;
            self.counters.retransmitted_bytes += len as u64;
            TcpSegment {
                seq,
                len,
                sent_at: now,
            }
        } else if self.bytes_in_flight() + mss <= self.send_window() {
            let s = TcpSegment {
                seq: self.next_seq,
                len: mss as u32,
                sent_at: now,
            };
            self.next_seq += mss;
            self.snd_max = self.snd_max.max(self.next_seq);
            s
        } else {
            return None;
        };
        self.counters.segments_sent += 1;
        self.counters.bytes_sent += seg.len as u64;
        if self.rto_deadline.is_none() {
            self.rto_deadline = Some(now + self.rto);
        }
        Some(seg)
    }

    fn update_rtt(&mut self, sample: SimTime) {
        self.latest_rtt = Some(sample);
        match self.srtt {
            None => {
                self.srtt = Some(sample);
                self.rttvar = SimTime::from_nanos(sample.as_nanos() / 2);
            }
            Some(srtt) => {
                let (s, r) = (srtt.as_nanos(), sample.as_nanos());
                let var = (3 * self.rttvar.as_nanos() + s.abs_diff(r)) / 4;
                self.rttvar = SimTime::from_nanos(var);
                self.srtt = Some(SimTime::from_nanos((7 * s + r) / 8));
            }
        }
        let srtt = self.srtt.expect("set above");
        let rto = srtt + self.rttvar.mul(4);
        self.rto = rto.max(self.cfg.min_rto).min(self.cfg.max_rto);
    }

    fn congestion_event(&mut self, now: SimTime) -> u64 {
        let mss = self.mss();
        match self.cfg.congestion_control {
            CongestionControl::NewReno => (self.bytes_in_flight() / 2).max(2 * mss),
            CongestionControl::Cubic => {
                self.cubic.w_max = self.cwnd as f64;
                self.cubic.epoch_start = None;
                let _ = now;
                ((self.cwnd as f64 * CUBIC_BETA) as u64).max(2 * mss)
            }
        }
    }

    fn grow_window(&mut self, acked: u64, now: SimTime) {
        let mss = self.mss();
        if self.cwnd < self.ssthresh {
            // byte counting, at most doubling per ACK so a stretch ACK after
            // an outage cannot jump the window
            self.cwnd += acked.min(self.cwnd);
            if self.cwnd >= self.ssthresh {
                self.state = CcState::CongestionAvoidance;
            }
            return;
        }
        self.state = CcState::CongestionAvoidance;
        let reno_inc = ((mss * acked) / self.cwnd).max(1);
        match self.cfg.congestion_control {
            CongestionControl::NewReno => self.cwnd += reno_inc,
            CongestionControl::Cubic => {
                let c = &mut self.cubic;
                let mss_f = mss as f64;
                let cwnd_seg = self.cwnd as f64 / mss_f;
                if c.epoch_start.is_none() {
                    c.epoch_start = Some(now);
                    let w_max_seg = (c.w_max / mss_f).max(cwnd_seg);
                    c.w_max = w_max_seg * mss_f;
                    c.k_secs = (w_max_seg * (1.0 - CUBIC_BETA) / CUBIC_C).cbrt();
                    c.w_est = self.cwnd as f64;
                }
                let t = (now - c.epoch_start.expect("set above")).as_secs_f64()
                    + self.srtt.map_or(0.0, SimTime::as_secs_f64);
                let target = (CUBIC_C * (t - c.k_secs).powi(3) + c.w_max / mss_f) * mss_f;
                c.w_est += mss_f * (3.0 * (1.0 - CUBIC_BETA) / (1.0 + CUBIC_BETA)) * acked as f64
                    / self.cwnd as f64;
                let cubic_inc = if target > self.cwnd as f64 {
                    ((target - self.cwnd as f64) * acked as f64 / self.cwnd as f64) as u64
                } else {
                    0
                };
                let next = (self.cwnd + cubic_inc.max(1)).max(c.w_est as u64);
                self.cwnd = next;
            }
        }
    }

    /// Processes a cumulative ACK received at `now`.
    pub fn on_ack(&mut self, ack: Ack, now: SimTime) -> AckOutcome {
        let mss = self.mss();
        if ack.ack < self.high_ack {
            return AckOutcome::Stale;
        }
        if ack.ack == self.high_ack {
            if self.bytes_in_flight() == 0 {
                return AckOutcome::Stale;
            }
            self.dup_ack_count += 1;
            if self.state == CcState::FastRecovery {
                self.cwnd += mss;
            } else if self.dup_ack_count == 3 && self.recover.is_none_or(|r| ack.ack > r) {
                self.ssthresh = self.congestion_event(now);
                self.recover = Some(self.snd_max);
                self.retransmit_next = Some(self.high_ack);
                self.cwnd = self.ssthresh + 3 * mss;
                self.state = CcState::FastRecovery;
                self.counters.fast_retransmits += 1;
            }
            return AckOutcome::Duplicate;
        }

        let acked = ack.ack - self.high_ack;
        self.high_ack = ack.ack;
        // after a go-back-N timeout the receiver may be ahead of us
        self.next_seq = self.next_seq.max(ack.ack);
        self.dup_ack_count = 0;
        self.backoffs = 0;
        if let Some(ts) = ack.ts_echo {
            self.update_rtt(now - ts);
        }

        if self.state == CcState::FastRecovery {
            if self.recover.is_none_or(|r| ack.ack >= r) {
                self.cwnd = self.ssthresh.max(mss);
                self.state = CcState::CongestionAvoidance;
            } else {
                // partial ACK: retransmit the next hole, deflate by the amount acked
                self.retransmit_next = Some(self.high_ack);
                self.cwnd = self.cwnd.saturating_sub(acked).max(mss) + mss;
            }
        } else {
            self.grow_window(acked, now);
        }

        self.rto_deadline = (self.bytes_in_flight() > 0).then(|| now + self.rto);
        AckOutcome::NewData(acked)
    }

    /// Retransmission timer expiry. No-op when nothing is outstanding.
    pub fn on_timeout(&mut self, now: SimTime) {
        let mss = self.mss();
        if self.bytes_in_flight() == 0 {
            self.rto_deadline = None;
            return;
        }
        self.counters.timeouts += 1;
        // a segment already retransmitted by the timer leaves ssthresh alone
        if self.backoffs == 0 {
            self.ssthresh = match self.cfg.congestion_control {
                CongestionControl::NewReno => (self.bytes_in_flight() / 2).max(2 * mss),
                CongestionControl::Cubic => self.congestion_event(now),
            };
        }
        self.backoffs += 1;
        self.recover = Some(self.snd_max);
        self.cwnd = mss;
        self.state = CcState::SlowStart;
        self.dup_ack_count = 0;
        self.rto = self.rto.mul(2).min(self.cfg.max_rto);
        // go-back-N from the first unacknowledged byte
        self.next_seq = self.high_ack;
        self.retransmit_next = None;
        self.rto_deadline = Some(now + self.rto);
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReceiverStats {
    /// In-order payload bytes handed to the application.
    pub goodput_bytes: u64,
    pub duplicate_bytes: u64,
    pub segments: u64,
}

/// Cumulative-ACK receiver with an out-of-order buffer. ACKs are coalesced:
/// one is produced per `take_ack` call if anything arrived since the last.
#[derive(Debug, Default)]
pub struct TcpReceiver {
    rcv_nxt: u64,
    out_of_order: BTreeMap<u64, (u64, SimTime)>,
    pending: bool,
    echo: Option<SimTime>,
    stats: ReceiverStats,
}

impl TcpReceiver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rcv_nxt(&self) -> u64 {
        self.rcv_nxt
    }

    pub fn stats(&self) -> ReceiverStats {
        self.stats
    }

    /// Returns the number of new in-order bytes.
    pub fn on_segment(&mut self, seg: TcpSegment) -> u64 {
        self.stats.segments += 1;
        self.pending = true;
        let end = seg.end();
        if end <= self.rcv_nxt {
            self.stats.duplicate_bytes += seg.len as u64;
            return 0;
        }
        if seg.seq > self.rcv_nxt {
            let e = self
                .out_of_order
                .entry(seg.seq)
                .or_insert((end, seg.sent_at));
            e.0 = e.0.max(end);
            return 0;
        }
        let before = self.rcv_nxt;
        self.stats.duplicate_bytes += self.rcv_nxt - seg.seq;
        self.rcv_nxt = end;
        if self.echo.is_none() {
            self.echo = Some(seg.sent_at);
        }
        while let Some(e) = self.out_of_order.first_entry() {
            if *e.key() > self.rcv_nxt {
                break;
            }
            let (start, (stop, _)) = e.remove_entry();
            if stop > self.rcv_nxt {
                self.stats.duplicate_bytes += self.rcv_nxt - start;
                self.rcv_nxt = stop;
            } else {
                self.stats.duplicate_bytes += stop - start;
            }
        }
        let advanced = self.rcv_nxt - before;
        self.stats.goodput_bytes += advanced;
        advanced
    }

    pub fn take_ack(&mut self) -> Option<Ack> {
        if !self.pending {
            return None;
        }
        self.pending = false;
        Some(Ack {
            ack: self.rcv_nxt,
            ts_echo: self.echo.take(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MSS: u64 = 1400;

    fn ms(v: u64) -> SimTime {
        SimTime::from_millis(v)
    }

    fn big_window() -> TcpConfig {
        TcpConfig {
            receive_window: u64::MAX / 4,
            ..Default::default()
        }
    }

    fn fill(c: &mut TcpConnState, now: SimTime) -> Vec<TcpSegment> {
        std::iter::from_fn(|| c.poll_segment(now)).collect()
    }

    #[test]
    fn slow_start_one_mss_per_ack() {
        let mut c = TcpConnState::new(big_window());
        assert_eq!(c.cwnd, 10 * MSS);
        let segs = fill(&mut c, SimTime::ZERO);
        assert_eq!(segs.len(), 10);
        let out = c.on_ack(
            Ack {
                ack: MSS,
                ts_echo: Some(SimTime::ZERO),
            },
            ms(12),
        );
        assert_eq!(out, AckOutcome::NewData(MSS));
        assert_eq!(c.cwnd, 11 * MSS);
    }

    #[test]
    fn congestion_avoidance_increment() {
        let mut c = TcpConnState::new(big_window());
        c.ssthresh = 10 * MSS;
        c.state = CcState::CongestionAvoidance;
        fill(&mut c, SimTime::ZERO);
        c.on_ack(
            Ack {
                ack: MSS,
                ts_echo: None,
            },
            ms(1),
        );
        assert_eq!(c.cwnd, 10 * MSS + MSS * MSS / (10 * MSS));
    }

    #[test]
    fn three_dup_acks_trigger_fast_retransmit() {
        let mut c = TcpConnState::new(big_window());
        c.cwnd = 64 * MSS;
        let segs = fill(&mut c, SimTime::ZERO);
        assert_eq!(segs.len(), 64);
        assert_eq!(c.bytes_in_flight(), 64 * MSS);
        for i in 0..3 {
            assert_eq!(
                c.on_ack(
                    Ack {
                        ack: 0,
                        ts_echo: None
                    },
                    ms(10 + i)
                ),
                AckOutcome::Duplicate
            );
        }
        assert_eq!(c.ssthresh, 32 * MSS);
        assert_eq!(c.state, CcState::FastRecovery);
        assert_eq!(c.counters().fast_retransmits, 1);
        let rtx = c.poll_segment(ms(13)).unwrap();
        assert_eq!(rtx.seq, 0);
        // full ACK ends recovery
        c.on_ack(
            Ack {
                ack: 64 * MSS,
                ts_echo: None,
            },
            ms(30),
        );
        assert_eq!(c.state, CcState::CongestionAvoidance);
        assert_eq!(c.cwnd, 32 * MSS);
    }

    #[test]
    fn partial_ack_retransmits_next_hole() {
        let mut c = TcpConnState::new(big_window());
        c.cwnd = 20 * MSS;
        fill(&mut c, SimTime::ZERO);
        for _ in 0..3 {
            c.on_ack(
                Ack {
                    ack: 0,
                    ts_echo: None,
                },
                ms(10),
            );
        }
        c.poll_segment(ms(10)).unwrap();
        c.on_ack(
            Ack {
                ack: 5 * MSS,
                ts_echo: None,
            },
            ms(20),
        );
        assert_eq!(c.state, CcState::FastRecovery);
        assert_eq!(c.poll_segment(ms(20)).unwrap().seq, 5 * MSS);
    }

    #[test]
    fn stale_ack_ignored() {
        let mut c = TcpConnState::new(big_window());
        fill(&mut c, SimTime::ZERO);
        c.on_ack(
            Ack {
                ack: 3 * MSS,
                ts_echo: None,
            },
            ms(10),
        );
        let cwnd = c.cwnd;
        assert_eq!(
            c.on_ack(
                Ack {
                    ack: MSS,
                    ts_echo: None
                },
                ms(11)
            ),
            AckOutcome::Stale
        );
        assert_eq!(c.cwnd, cwnd);
    }

    #[test]
    fn timeout_collapses_window() {
        let mut c = TcpConnState::new(big_window());
        c.cwnd = 100 * MSS;
        fill(&mut c, SimTime::ZERO);
        c.on_timeout(ms(1000));
        assert_eq!(c.cwnd, MSS);
        assert_eq!(c.ssthresh, 50 * MSS);
        assert_eq!(c.state, CcState::SlowStart);
        assert_eq!(c.next_seq, c.high_ack);
        assert_eq!(c.poll_segment(ms(1000)).unwrap().seq, 0);
    }

    #[test]
    fn back_to_back_timeouts_back_off() {
        let mut c = TcpConnState::new(big_window());
        c.on_ack(
            Ack {
                ack: 0,
                ts_echo: None,
            },
            SimTime::ZERO,
        );
        fill(&mut c, SimTime::ZERO);
        let base = c.rto;
        c.on_timeout(base);
        assert_eq!(c.rto, base.mul(2));
        c.poll_segment(base);
        c.on_timeout(base.mul(3));
        assert_eq!(c.rto, base.mul(4));
        c.rto = SimTime::from_secs(50);
        c.poll_segment(base.mul(3));
        c.on_timeout(SimTime::from_secs(100));
        assert_eq!(c.rto, SimTime::from_secs(60));
    }

    #[test]
    fn repeated_timeout_keeps_ssthresh() {
        let mut c = TcpConnState::new(big_window());
        c.cwnd = 100 * MSS;
        fill(&mut c, SimTime::ZERO);
        c.on_timeout(ms(1000));
        assert_eq!(c.ssthresh, 50 * MSS);
        c.poll_segment(ms(1000)).unwrap();
        c.on_timeout(ms(3000));
        assert_eq!(c.ssthresh, 50 * MSS);
        assert_eq!(c.cwnd, MSS);
    }

    #[test]
    fn no_fast_retransmit_on_duplicates_after_timeout() {
        let mut c = TcpConnState::new(big_window());
        c.cwnd = 20 * MSS;
        fill(&mut c, SimTime::ZERO);
        c.on_timeout(ms(1000));
        c.poll_segment(ms(1000)).unwrap();
        // the original flight arrives late; go-back-N copies then produce duplicates
        c.on_ack(
            Ack {
                ack: 20 * MSS,
                ts_echo: None,
            },
            ms(1100),
        );
        for _ in 0..5 {
            c.on_ack(
                Ack {
                    ack: 20 * MSS,
                    ts_echo: None,
                },
                ms(1101),
            );
        }
        assert_ne!(c.state, CcState::FastRecovery);
        assert_eq!(c.counters().fast_retransmits, 0);
    }

    #[test]
    fn stretch_ack_at_most_doubles() {
        let mut c = TcpConnState::new(big_window());
        c.cwnd = 100 * MSS;
        fill(&mut c, SimTime::ZERO);
        c.on_timeout(ms(1000));
        c.on_ack(
            Ack {
                ack: 100 * MSS,
                ts_echo: None,
            },
            ms(1100),
        );
        assert_eq!(c.cwnd, 2 * MSS);
        assert_eq!(c.state, CcState::SlowStart);
        assert_eq!(c.next_seq, 100 * MSS);
    }

    #[test]
    fn rtt_estimator() {
        let mut c = TcpConnState::new(big_window());
        fill(&mut c, SimTime::ZERO);
        c.on_ack(
            Ack {
                ack: MSS,
                ts_echo: Some(SimTime::ZERO),
            },
            ms(100),
        );
        assert_eq!(c.srtt, Some(ms(100)));
        assert_eq!(c.rttvar, ms(50));
        assert_eq!(c.rto, ms(300));
        c.on_ack(
            Ack {
                ack: 2 * MSS,
                ts_echo: Some(ms(100)),
            },
            ms(120),
        );
        // srtt = 7/8*100 + 1/8*20 = 90; rttvar = 3/4*50 + 1/4*80 = 57.5
        assert_eq!(c.srtt, Some(ms(90)));
        assert_eq!(c.rttvar, SimTime::from_micros(57_500));
        assert_eq!(c.rto, ms(320));
        // minimum RTO applies
        for k in 0..100 {
            let t = ms(200 + k);
            c.on_ack(
                Ack {
                    ack: (3 + k) * MSS,
                    ts_echo: Some(t),
                },
                t + ms(1),
            );
            fill(&mut c, t + ms(1));
        }
        assert_eq!(c.rto, ms(200));
    }

    #[test]
    fn receive_window_caps_flight() {
        let cfg = TcpConfig {
            receive_window: 5 * MSS,
            ..Default::default()
        };
        let mut c = TcpConnState::new(cfg);
        assert_eq!(fill(&mut c, SimTime::ZERO).len(), 5);
        assert!(c.bytes_in_flight() <= c.cwnd);
    }

    #[test]
    fn cubic_grows_and_backs_off() {
        let cfg = TcpConfig {
            congestion_control: CongestionControl::Cubic,
            ..big_window()
        };
        let mut c = TcpConnState::new(cfg);
        c.cwnd = 100 * MSS;
        fill(&mut c, SimTime::ZERO);
        for _ in 0..3 {
            c.on_ack(
                Ack {
                    ack: 0,
                    ts_echo: None,
                },
                ms(10),
            );
        }
        assert_eq!(c.ssthresh, 70 * MSS);
        c.on_ack(
            Ack {
                ack: 100 * MSS,
                ts_echo: Some(SimTime::ZERO),
            },
            ms(20),
        );
        assert_eq!(c.cwnd, 70 * MSS);
        let mut t = ms(20);
        let mut acked = 100 * MSS;
        let start = c.cwnd;
        for _ in 0..2000 {
            fill(&mut c, t);
            t += ms(1);
            acked += MSS;
            c.on_ack(
                Ack {
                    ack: acked,
                    ts_echo: Some(t - ms(20)),
                },
                t,
            );
        }
        assert!(c.cwnd > start);
    }

    #[test]
    fn receiver_in_order_and_dups() {
        let mut r = TcpReceiver::new();
        let seg = |seq, t| TcpSegment {
            seq,
            len: MSS as u32,
            sent_at: ms(t),
        };
        assert_eq!(r.on_segment(seg(0, 1)), MSS);
        assert_eq!(r.on_segment(seg(2 * MSS, 3)), 0);
        let a = r.take_ack().unwrap();
        assert_eq!(a.ack, MSS);
        assert_eq!(a.ts_echo, Some(ms(1)));
        assert_eq!(r.on_segment(seg(MSS, 2)), 2 * MSS);
        assert_eq!(r.rcv_nxt(), 3 * MSS);
        assert_eq!(r.on_segment(seg(0, 1)), 0);
        assert_eq!(r.stats().duplicate_bytes, MSS);
        assert_eq!(r.stats().goodput_bytes, 3 * MSS);
        assert_eq!(r.take_ack().unwrap().ts_echo, Some(ms(2)));
        assert!(r.take_ack().is_none());
    }
}
