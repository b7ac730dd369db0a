//! RLC acknowledged-mode buffer with a priority retransmission queue, and the
//! UE-side reassembly that hands complete SDUs up in sequence order.

use std::collections::{BTreeMap, VecDeque};

use crate::engine::SimTime;

/// Default RLC buffer: 5 MiB.
pub const DEFAULT_RLC_CAPACITY: u64 = 5 * (1 << 20);

/// A slice of one SDU carried in a transport block.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece<M> {
    pub sdu_id: u64,
    pub offset: u64,
    pub len: u64,
    pub sdu_bytes: u64,
    pub enqueued_at: SimTime,
    pub meta: M,
}

#[derive(Debug)]
struct QueuedSdu<M> {
    id: u64,
    bytes: u64,
    sent: u64,
    enqueued_at: SimTime,
    meta: M,
}

#[derive(Debug)]
struct RetxEntry<M> {
    piece: Piece<M>,
    ready_at: SimTime,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RlcCounters {
    pub accepted_bytes: u64,
    pub accepted_sdus: u64,
    pub dropped_bytes: u64,
    pub dropped_sdus: u64,
    pub served_new_bytes: u64,
    pub served_retx_bytes: u64,
    pub requeued_bytes: u64,
}

/// Transmit side of the RLC entity at the gNB.
#[derive(Debug)]
pub struct RlcAmBuffer<M> {
    capacity: u64,
    new_data: VecDeque<QueuedSdu<M>>,
    retransmit: VecDeque<RetxEntry<M>>,
    occupancy: u64,
    next_id: u64,
    counters: RlcCounters,
}

impl<M: Clone> RlcAmBuffer<M> {
    pub fn new(capacity_bytes: u64) -> Self {
        RlcAmBuffer {
            capacity: capacity_bytes,
            new_data: VecDeque::new(),
            retransmit: VecDeque::new(),
            occupancy: 0,
            next_id: 0,
            counters: RlcCounters::default(),
        }
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    /// Bytes waiting for transmission, new and retransmit queues together.
    pub fn occupancy(&self) -> u64 {
        self.occupancy
    }

    pub fn counters(&self) -> RlcCounters {
        self.counters
    }

    pub fn is_empty(&self) -> bool {
        self.occupancy == 0
    }

    /// Tail-drop admission. Returns whether the SDU was accepted.
    pub fn enqueue(&mut self, bytes: u64, meta: M, t: SimTime) -> bool {
        assert!(bytes > 0, "SDUs carry at least one byte");
        if self.occupancy + bytes > self.capacity {
            self.counters.dropped_bytes += bytes;
            self.counters.dropped_sdus += 1;
            return false;
        }
        self.new_data.push_back(QueuedSdu {
            id: self.next_id,
            bytes,
            sent: 0,
            enqueued_at: t,
            meta,
        });
        self.next_id += 1;
        self.occupancy += bytes;
        self.counters.accepted_bytes += bytes;
        self.counters.accepted_sdus += 1;
        true
    }

    /// Whether anything could be sent at `now`.
    pub fn has_ready_data(&self, now: SimTime) -> bool {
        !self.new_data.is_empty() || self.retransmit.front().is_some_and(|e| e.ready_at <= now)
    }

    /// Fills a grant of `grant_bytes`, retransmissions first, splitting
    /// pieces at the grant boundary.
    pub fn serve(&mut self, grant_bytes: u64, now: SimTime) -> Vec<Piece<M>> {
        let mut left = grant_bytes;
        let mut out = Vec::new();
        while left > 0 {
            let Some(head) = self.retransmit.front_mut() else {
                break;
            };
            if head.ready_at > now {
                break;
            }
            if head.piece.len <= left {
                let e = self.retransmit.pop_front().expect("head exists");
                left -= e.piece.len;
                self.counters.served_retx_bytes += e.piece.len;
                out.push(e.piece);
            } else {
                let mut part = head.piece.clone();
                part.len = left;
                head.piece.offset += left;
                head.piece.len -= left;
                self.counters.served_retx_bytes += left;
                out.push(part);
                left = 0;
            }
        }
        while left > 0 {
            let Some(head) = self.new_data.front_mut() else {
                break;
            };
            let remaining = head.bytes - head.sent;
            let take = remaining.min(left);
            out.push(Piece {
                sdu_id: head.id,
                offset: head.sent,
                len: take,
                sdu_bytes: head.bytes,
                enqueued_at: head.enqueued_at,
                meta: head.meta.clone(),
            });
            head.sent += take;
            left -= take;
            self.counters.served_new_bytes += take;
            if head.sent == head.bytes {
                self.new_data.pop_front();
            }
        }
        let served = grant_bytes - left;
        self.occupancy -= served;
        out
    }

    /// Puts pieces abandoned by HARQ back, eligible again from `ready_at`.
    pub fn requeue(&mut self, pieces: Vec<Piece<M>>, ready_at: SimTime) {
        for piece in pieces {
            self.occupancy += piece.len;
            self.counters.requeued_bytes += piece.len;
            self.retransmit.push_back(RetxEntry { piece, ready_at });
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReceiverCounters {
    pub received_bytes: u64,
    pub delivered_bytes: u64,
    pub delivered_sdus: u64,
}

/// UE side: reassembles SDUs and releases them in sequence order.
#[derive(Debug)]
pub struct RlcReceiver<M> {
    next_id: u64,
    pending: BTreeMap<u64, (u64, u64, M)>,
    buffered: u64,
    counters: ReceiverCounters,
}

impl<M> Default for RlcReceiver<M> {
    fn default() -> Self {
        RlcReceiver {
            next_id: 0,
            pending: BTreeMap::new(),
            buffered: 0,
            counters: ReceiverCounters::default(),
        }
    }
}

impl<M> RlcReceiver<M> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn counters(&self) -> ReceiverCounters {
        self.counters
    }

    /// Received bytes not yet released upward.
    pub fn buffered_bytes(&self) -> u64 {
        self.buffered
    }

    /// Accepts a decoded piece and returns every SDU that is now deliverable in order.
    pub fn receive(&mut self, piece: Piece<M>) -> Vec<(M, u64)> {
        self.counters.received_bytes += piece.len;
        self.buffered += piece.len;
        let entry = self
            .pending
            .entry(piece.sdu_id)
            .or_insert((0, piece.sdu_bytes, piece.meta));
        entry.0 += piece.len;
        debug_assert!(entry.0 <= entry.1);

        let mut out = Vec::new();
        while let Some(e) = self.pending.first_entry() {
            let (got, total, _) = *e.get();
            if *e.key() != self.next_id || got < total {
                break;
            }
            let (_, (_, total, meta)) = e.remove_entry();
            self.next_id += 1;
            self.buffered -= total;
            self.counters.delivered_bytes += total;
            self.counters.delivered_sdus += 1;
            out.push((meta, total));
        }
        out
    }
}
