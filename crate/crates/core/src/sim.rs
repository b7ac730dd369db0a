//! Event-driven run of one UE architecture over a channel trace.
//!
//! Per slot, in order: the transport block decoded in the previous slot
//! reaches the UE RLC, which releases in-order SDUs to the TCP receiver;
//! one cumulative ACK is sent uplink; HARQ processes feedback and then
//! either retransmits or asks RLC for a new block.

use thiserror::Error;

use crate::beam::{BeamPair, BeamTracker, MeasurementNoise, SsBurstConfig, UeArchitecture};
use crate::channel::{ChannelError, ChannelTrace};
use crate::engine::{EventQueue, SimRng, SimTime, Stream};
use crate::phy::{compute_sinr, slot_capacity, HarqCounters, LinkConfig, LinkState, McsTable};
use crate::stack::{
    Ack, AckOutcome, CoreNetwork, Piece, ReceiverCounters, ReceiverStats, Recorder, RlcAmBuffer,
    RlcCounters, RlcReceiver, TcpConfig, TcpConnState, TcpCounters, TcpReceiver, TcpSegment,
    TimeSeriesRecord, DEFAULT_RLC_CAPACITY,
};

#[derive(Debug, Clone)]
pub struct SimParams {
    pub architecture: UeArchitecture,
    pub seed: u64,
    /// Run length; `None` means the whole trace.
    pub duration: Option<SimTime>,
    pub sample_window: SimTime,
    pub ss: SsBurstConfig,
    pub hysteresis_db: f64,
    /// Standard deviation of Gaussian SS measurement error, dB.
    pub measurement_noise_db: f64,
    pub link: LinkConfig,
    pub mcs_table: McsTable,
    pub rlc_capacity: u64,
    pub core: CoreNetwork,
    pub tcp: TcpConfig,
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            architecture: UeArchitecture::Digital,
            seed: 1,
            duration: None,
            sample_window: SimTime::from_millis(100),
            ss: SsBurstConfig::default(),
            hysteresis_db: 0.0,
            measurement_noise_db: 0.0,
            link: LinkConfig::default(),
            mcs_table: McsTable::default(),
            rlc_capacity: DEFAULT_RLC_CAPACITY,
            core: CoreNetwork::default(),
            tcp: TcpConfig::default(),
        }
    }
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error("run duration {run} exceeds trace duration {trace}")]
    DurationMismatch { run: SimTime, trace: SimTime },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

/// Everything a run produced: the sampled rows plus raw counters.
#[derive(Debug, Clone)]
pub struct SimOutcome {
    pub architecture: UeArchitecture,
    pub duration: SimTime,
    pub rows: Vec<TimeSeriesRecord>,
    /// `(time the ACK arrived, measured RTT)`.
    pub rtt_samples: Vec<(SimTime, SimTime)>,
    /// Initial pair at t=0 followed by every switch.
    pub beam_history: Vec<(SimTime, BeamPair)>,
    pub harq: HarqCounters,
    pub harq_in_flight_bytes: u64,
    pub rlc: RlcCounters,
    pub rlc_occupancy: u64,
    pub rlc_max_occupancy: u64,
    /// Decoded bytes not yet handed to the UE RLC when the run ended.
    pub decoded_in_transit_bytes: u64,
    pub ue_rlc: ReceiverCounters,
    pub ue_rlc_buffered_bytes: u64,
    /// TCP payload bytes the UE RLC released to the TCP receiver.
    pub ue_payload_bytes: u64,
    pub tcp: TcpCounters,
    pub tcp_acked_bytes: u64,
    pub tcp_receiver: ReceiverStats,
    pub events_dispatched: u64,
}

#[derive(Debug)]
enum Kind {
    BurstStart(u64),
    SsBlock {
        set: u64,
        tx: usize,
    },
    BurstEnd,
    Slot(u64),
    /// Segments reach the gNB after the core network.
    PacketArrival(Vec<TcpSegment>),
    AckArrival(Ack),
    RtoTimer,
    Sample,
}

type Block = Vec<Piece<TcpSegment>>;

struct World<'a> {
    trace: &'a ChannelTrace,
    p: &'a SimParams,
    end: SimTime,
    tracker: BeamTracker,
    link: LinkState<Block>,
    rlc: RlcAmBuffer<TcpSegment>,
    rlc_max: u64,
    ue_rlc: RlcReceiver<TcpSegment>,
    ue_payload: u64,
    pending_delivery: Option<Block>,
    sender: TcpConnState,
    receiver: TcpReceiver,
    timer_armed: Option<SimTime>,
    recorder: Recorder,
    rtt_samples: Vec<(SimTime, SimTime)>,
    beam_history: Vec<(SimTime, BeamPair)>,
    error: Option<ChannelError>,
}

impl World<'_> {
    fn handle(&mut self, q: &mut EventQueue<Kind>, kind: Kind) -> Result<(), ChannelError> {
        let now = q.now();
        match kind {
            Kind::BurstStart(set) => {
                for k in 0..self.p.ss.n_tx_blocks {
                    let t = now + self.p.ss.block_offset(k);
                    if t < self.end {
                        q.schedule(t, Kind::SsBlock { set, tx: k });
                    }
                }
                let burst_end = now + self.p.ss.burst_duration;
                if burst_end < self.end {
                    q.schedule(burst_end, Kind::BurstEnd);
                }
                let next = now + self.p.ss.set_period;
                if next < self.end {
                    q.schedule(next, Kind::BurstStart(set + 1));
                }
            }
            Kind::SsBlock { set, tx } => self.tracker.on_ss_block(self.trace, now, tx, set)?,
            Kind::BurstEnd => {
                if let Some(pair) = self.tracker.on_burst_end() {
                    self.link.active_pair = pair;
                    self.beam_history.push((now, pair));
                }
            }
            Kind::Slot(n) => {
                self.slot(q, now)?;
                let next = self.p.link.slot_duration.mul(n + 1);
                if next < self.end {
                    q.schedule(next, Kind::Slot(n + 1));
                }
            }
            Kind::PacketArrival(segs) => {
                let header = self.p.tcp.header_bytes as u64;
                for s in segs {
                    self.rlc.enqueue(s.len as u64 + header, s, now);
                }
                self.rlc_max = self.rlc_max.max(self.rlc.occupancy());
            }
            Kind::AckArrival(ack) => {
                let outcome = self.sender.on_ack(ack, now);
                if let (AckOutcome::NewData(_), Some(ts)) = (outcome, ack.ts_echo) {
                    self.rtt_samples.push((now, now - ts));
                }
                self.transmit(q, now);
            }
            Kind::RtoTimer => {
                if self.timer_armed == Some(now) {
                    self.timer_armed = None;
                }
                if self.sender.rto_deadline().is_some_and(|d| d <= now) {
                    self.sender.on_timeout(now);
                }
                self.transmit(q, now);
            }
            Kind::Sample => {
                self.recorder.record_sample(
                    now,
                    self.link.sinr_db,
                    self.sender.latest_rtt(),
                    self.link.active_pair,
                    self.rlc.occupancy(),
                );
                let next = now + self.recorder.window();
                if next <= self.end {
                    q.schedule(next, Kind::Sample);
                }
            }
        }
        Ok(())
    }

    fn slot(&mut self, q: &mut EventQueue<Kind>, now: SimTime) -> Result<(), ChannelError> {
        if let Some(block) = self.pending_delivery.take() {
            for piece in block {
                for (seg, _) in self.ue_rlc.receive(piece) {
                    self.ue_payload += seg.len as u64;
                    let fresh = self.receiver.on_segment(seg);
                    self.recorder.add_goodput_bytes(fresh);
                }
            }
        }
        if let Some(ack) = self.receiver.take_ack() {
            let at = now + self.p.link.slot_duration + self.p.core.one_way_delay;
            q.schedule(at, Kind::AckArrival(ack));
        }

        let sinr_now = compute_sinr(self.trace, now, self.link.active_pair, &self.p.link)?;
        let mcs = self.link.mcs;
        let ss_overlap = self.p.ss.slot_has_ss_block(now, self.p.link.slot_duration);
        let capacity = slot_capacity(mcs.as_ref(), &self.p.link, ss_overlap);
        let rlc = &mut self.rlc;
        let out = self.link.harq.step(now, sinr_now, || {
            let mcs = mcs?;
            if capacity == 0 || !rlc.has_ready_data(now) {
                return None;
            }
            let pieces = rlc.serve(capacity, now);
            let bytes: u64 = pieces.iter().map(|p| p.len).sum();
            (bytes > 0).then_some((pieces, bytes, mcs))
        });
        if let Some((block, bytes)) = out.delivered {
            self.recorder.add_phy_bytes(bytes);
            self.pending_delivery = Some(block);
        }
        let ready_at = now + self.p.link.harq_rtt();
        for (block, _) in out.surrendered {
            self.rlc.requeue(block, ready_at);
        }
        self.rlc_max = self.rlc_max.max(self.rlc.occupancy());
        self.link.observe_sinr(sinr_now, &self.p.mcs_table);
        Ok(())
    }

    /// Sends whatever the window allows as one burst and keeps the RTO timer armed.
    fn transmit(&mut self, q: &mut EventQueue<Kind>, now: SimTime) {
        let segs: Vec<TcpSegment> = std::iter::from_fn(|| self.sender.poll_segment(now)).collect();
        if !segs.is_empty() {
            q.schedule(self.p.core.arrival(now), Kind::PacketArrival(segs));
        }
        if let Some(deadline) = self.sender.rto_deadline() {
            if self.timer_armed.is_none_or(|armed| deadline < armed) {
                q.schedule(deadline.max(now), Kind::RtoTimer);
                self.timer_armed = Some(deadline.max(now));
            }
        }
    }
}

fn validate(trace: &ChannelTrace, p: &SimParams) -> Result<SimTime, SimError> {
    fn bad<T>(m: String) -> Result<T, SimError> {
        Err(SimError::InvalidParams(m))
    }
    p.ss.validate().or_else(|e| bad(e.to_string()))?;
    p.link.validate().or_else(|e| bad(e.to_string()))?;
    if p.sample_window == SimTime::ZERO {
        return bad("sample window must be positive".into());
    }
    if p.rlc_capacity == 0 {
        return bad("RLC capacity must be positive".into());
    }
    if p.core.one_way_delay == SimTime::ZERO {
        return bad("core network delay must be positive".into());
    }
    if p.tcp.mss == 0 || p.tcp.initial_cwnd_segments == 0 {
        return bad("TCP MSS and initial window must be positive".into());
    }
    if p.tcp.receive_window < p.tcp.mss as u64 {
        return bad("TCP receive window must hold at least one segment".into());
    }
    if p.hysteresis_db.is_nan()
        || p.hysteresis_db < 0.0
        || p.measurement_noise_db.is_nan()
        || p.measurement_noise_db < 0.0
    {
        return bad("hysteresis and measurement noise must be non-negative".into());
    }
    let trace_len = trace.duration();
    let run = p.duration.unwrap_or(trace_len);
    if run > trace_len {
        return Err(SimError::DurationMismatch {
            run,
            trace: trace_len,
        });
    }
    if run == SimTime::ZERO {
        return bad("run duration must be positive".into());
    }
    Ok(run)
}

/// Runs one architecture over `trace`.
pub fn simulate(trace: &ChannelTrace, p: &SimParams) -> Result<SimOutcome, SimError> {
    let end = validate(trace, p)?;
    let noise = (p.measurement_noise_db > 0.0).then(|| MeasurementNoise {
        rng: SimRng::new(p.seed, Stream::Beam),
        std_db: p.measurement_noise_db,
    });
    let tracker =
        BeamTracker::initial_access(p.architecture, trace, SimTime::ZERO, p.hysteresis_db, noise)?;
    let active = tracker.active();
    let sinr0 = compute_sinr(trace, SimTime::ZERO, active, &p.link)?;

    let mut w = World {
        trace,
        p,
        end,
        tracker,
        link: LinkState::new(active, sinr0, &p.mcs_table, &p.link),
        rlc: RlcAmBuffer::new(p.rlc_capacity),
        rlc_max: 0,
        ue_rlc: RlcReceiver::new(),
        ue_payload: 0,
        pending_delivery: None,
        sender: TcpConnState::new(p.tcp.clone()),
        receiver: TcpReceiver::new(),
        timer_armed: None,
        recorder: Recorder::new(p.sample_window),
        rtt_samples: Vec::new(),
        beam_history: vec![(SimTime::ZERO, active)],
        error: None,
    };

    let mut q = EventQueue::new();
    q.schedule(SimTime::ZERO, Kind::BurstStart(0));
    q.schedule(SimTime::ZERO, Kind::Slot(0));
    if p.sample_window <= end {
        q.schedule(p.sample_window, Kind::Sample);
    }
    w.transmit(&mut q, SimTime::ZERO);

    q.run_until(end, |q, ev| {
        if w.error.is_some() {
            return;
        }
        if let Err(e) = w.handle(q, ev.kind) {
            w.error = Some(e);
        }
    })
    .expect("clock starts at zero");
    if let Some(e) = w.error {
        return Err(e.into());
    }

    Ok(SimOutcome {
        architecture: p.architecture,
        duration: end,
        rtt_samples: w.rtt_samples,
        beam_history: w.beam_history,
        harq: w.link.harq.counters(),
        harq_in_flight_bytes: w.link.harq.in_flight_bytes(),
        rlc: w.rlc.counters(),
        rlc_occupancy: w.rlc.occupancy(),
        rlc_max_occupancy: w.rlc_max,
        decoded_in_transit_bytes: w
            .pending_delivery
            .as_ref()
            .map_or(0, |b| b.iter().map(|p| p.len).sum()),
        ue_rlc: w.ue_rlc.counters(),
        ue_rlc_buffered_bytes: w.ue_rlc.buffered_bytes(),
        ue_payload_bytes: w.ue_payload,
        tcp: w.sender.counters(),
        tcp_acked_bytes: w.sender.high_ack,
        tcp_receiver: w.receiver.stats(),
        events_dispatched: q.dispatched_total(),
        rows: w.recorder.into_rows(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{generate_synthetic, BlockageScenario, PathSpec};

    fn static_trace(ms: u64) -> ChannelTrace {
        let sc = BlockageScenario {
            duration: SimTime::from_millis(ms),
            paths: vec![PathSpec {
                tx_index: 2,
                rx_index: 3,
                peak_power_db: 0.0,
                angular_spread: 0,
                spread_rolloff_db: 0.0,
            }],
            events: vec![],
        };
        generate_synthetic(&sc, SimTime::from_millis(1)).unwrap()
    }

    #[test]
    fn static_link_samples_and_rtt_floor() {
        let trace = static_trace(500);
        let out = simulate(&trace, &SimParams::default()).unwrap();
        assert_eq!(out.rows.len(), 5);
        assert!(out
            .rows
            .iter()
            .all(|r| r.beam_pair == BeamPair::new(2, 3).unwrap()));
        assert!(out.rows.iter().all(|r| r.sinr_db == 30.0));
        let floor = SimTime::from_millis(10) + SimTime::from_micros(250);
        assert!(!out.rtt_samples.is_empty());
        assert!(out.rtt_samples.iter().all(|&(_, rtt)| rtt >= floor));
        assert_eq!(out.rlc.dropped_bytes, 0);
        assert_eq!(out.harq.surrendered_bytes, 0);
        assert!(out.rows[4].tcp_goodput_bps > 0.0);
        assert!(out.rows.iter().all(|r| r.tcp_goodput_bps <= r.phy_rate_bps));
    }

    #[test]
    fn first_rtt_matches_unloaded_path() {
        let trace = static_trace(100);
        let out = simulate(&trace, &SimParams::default()).unwrap();
        let (_, first) = out.rtt_samples[0];
        let slot = SimTime::from_micros(125);
        // 10 ms core + decode slot + uplink slot, within one slot of alignment
        let base = SimTime::from_millis(10) + slot.mul(2);
        assert!(first >= base && first <= base + slot, "{first}");
    }

    #[test]
    fn duration_longer_than_trace_rejected() {
        let trace = static_trace(100);
        let p = SimParams {
            duration: Some(SimTime::from_millis(200)),
            ..Default::default()
        };
        let err = simulate(&trace, &p).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("0.2s") && msg.contains("0.1s"), "{msg}");
    }

    #[test]
    fn conservation_on_static_link() {
        let trace = static_trace(300);
        let o = simulate(&trace, &SimParams::default()).unwrap();
        assert_eq!(
            o.harq.offered_bytes,
            o.harq.delivered_bytes + o.harq.surrendered_bytes + o.harq_in_flight_bytes
        );
        assert_eq!(
            o.rlc.accepted_bytes + o.rlc.requeued_bytes,
            o.rlc.served_new_bytes + o.rlc.served_retx_bytes + o.rlc_occupancy
        );
        assert_eq!(
            o.harq.delivered_bytes,
            o.ue_rlc.received_bytes + o.decoded_in_transit_bytes
        );
        assert!(o.tcp_acked_bytes <= o.ue_payload_bytes);
        assert!(o.ue_payload_bytes <= o.tcp.bytes_sent);
    }
}
