//! Stop-and-wait HARQ with a step-function decoder: a transport block
//! decodes iff the SINR during its slot reaches the threshold of the MCS it
//! was encoded with.

use super::{LinkConfig, McsEntry};
use crate::engine::SimTime;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HarqState {
    Idle,
    /// Transmitted; feedback reaches the gNB at the stored time.
    AwaitingFeedback {
        decoded: bool,
    },
    /// NACK received, waiting for a slot to retransmit.
    PendingRetransmission,
}

#[derive(Debug)]
pub struct HarqProcess<P> {
    pub id: usize,
    pub state: HarqState,
    pub tx_count: u32,
    pub payload_bytes: u64,
    pub mcs_at_tx: Option<McsEntry>,
    feedback_at: SimTime,
    payload: Option<P>,
}

impl<P> HarqProcess<P> {
    fn idle(id: usize) -> Self {
        HarqProcess {
            id,
            state: HarqState::Idle,
            tx_count: 0,
            payload_bytes: 0,
            mcs_at_tx: None,
            feedback_at: SimTime::ZERO,
            payload: None,
        }
    }

    /// Bytes that have been sent but not yet decoded.
    fn undelivered_bytes(&self) -> u64 {
        match self.state {
            HarqState::AwaitingFeedback { decoded: false } | HarqState::PendingRetransmission => {
                self.payload_bytes
            }
            _ => 0,
        }
    }

    fn reset(&mut self) {
        self.state = HarqState::Idle;
        self.tx_count = 0;
        self.payload_bytes = 0;
        self.mcs_at_tx = None;
        self.payload = None;
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HarqCounters {
    /// Bytes handed to HARQ as new transport blocks.
    pub offered_bytes: u64,
    pub delivered_bytes: u64,
    /// Bytes given up after `max_harq_tx` failed attempts.
    pub surrendered_bytes: u64,
    pub transmissions: u64,
    pub retransmissions: u64,
}

/// What happened on the air in one slot.
#[derive(Debug)]
pub struct SlotOutcome<P> {
    /// Payload decoded by the UE in this slot.
    pub delivered: Option<(P, u64)>,
    /// Payloads abandoned by HARQ at this slot's feedback point.
    pub surrendered: Vec<(P, u64)>,
    pub retransmission: bool,
    pub new_tx_bytes: u64,
}

#[derive(Debug)]
pub struct HarqEntity<P> {
    processes: Vec<HarqProcess<P>>,
    rtt: SimTime,
    max_tx: u32,
    counters: HarqCounters,
}

impl<P> HarqEntity<P> {
    pub fn new(cfg: &LinkConfig) -> Self {
        HarqEntity {
            processes: (0..cfg.harq_processes).map(HarqProcess::idle).collect(),
            rtt: cfg.harq_rtt(),
            max_tx: cfg.max_harq_tx,
            counters: HarqCounters::default(),
        }
    }

    pub fn processes(&self) -> &[HarqProcess<P>] {
        &self.processes
    }

    pub fn counters(&self) -> HarqCounters {
        self.counters
    }

    pub fn in_flight_bytes(&self) -> u64 {
        self.processes
            .iter()
            .map(HarqProcess::undelivered_bytes)
            .sum()
    }

    pub fn has_idle_process(&self) -> bool {
        self.processes.iter().any(|p| p.state == HarqState::Idle)
    }

    /// Runs one slot starting at `now` with `sinr_now` on the air.
    ///
    /// Feedback due by `now` is applied first. A pending retransmission takes
    /// the slot if there is one; otherwise `new_block` is asked for a fresh
    /// `(payload, bytes, mcs)` when an idle process exists.
    pub fn step<F>(&mut self, now: SimTime, sinr_now: f64, new_block: F) -> SlotOutcome<P>
    where
        F: FnOnce() -> Option<(P, u64, McsEntry)>,
    {
        let mut out = SlotOutcome {
            delivered: None,
            surrendered: Vec::new(),
            retransmission: false,
            new_tx_bytes: 0,
        };

        for p in &mut self.processes {
            let HarqState::AwaitingFeedback { decoded } = p.state else {
                continue;
            };
            if p.feedback_at > now {
                continue;
            }
            if decoded {
                p.reset();
            } else if p.tx_count < self.max_tx {
                p.state = HarqState::PendingRetransmission;
            } else {
                let bytes = p.payload_bytes;
                let payload = p.payload.take().expect("failed block keeps its payload");
                self.counters.surrendered_bytes += bytes;
                out.surrendered.push((payload, bytes));
                p.reset();
            }
        }

        let retx = self
            .processes
            .iter()
            .filter(|p| p.state == HarqState::PendingRetransmission)
            .min_by_key(|p| (p.feedback_at, p.id))
            .map(|p| p.id);

        let id = if let Some(id) = retx {
            out.retransmission = true;
            self.counters.retransmissions += 1;
            id
        } else {
            let Some(id) = self
                .processes
                .iter()
                .find(|p| p.state == HarqState::Idle)
                .map(|p| p.id)
            else {
                return out;
            };
            let Some((payload, bytes, mcs)) = new_block() else {
                return out;
            };
            debug_assert!(bytes > 0);
            let p = &mut self.processes[id];
            p.payload = Some(payload);
            p.payload_bytes = bytes;
            p.mcs_at_tx = Some(mcs);
            self.counters.offered_bytes += bytes;
            out.new_tx_bytes = bytes;
            id
        };

        let p = &mut self.processes[id];
        p.tx_count += 1;
        p.feedback_at = now + self.rtt;
        self.counters.transmissions += 1;
        let threshold = p.mcs_at_tx.expect("in-use process has an MCS").min_sinr_db;
        let decoded = sinr_now >= threshold;
        p.state = HarqState::AwaitingFeedback { decoded };
        if decoded {
            let payload = p.payload.take().expect("transmitted block has a payload");
            self.counters.delivered_bytes += p.payload_bytes;
            out.delivered = Some((payload, p.payload_bytes));
        }
        out
    }
}
