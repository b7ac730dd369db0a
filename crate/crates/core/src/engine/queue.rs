use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{EngineError, SimTime};

/// A scheduled occurrence. `sequence` is the global insertion index and
/// breaks ties between events that fire at the same instant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event<K> {
    pub fire_at: SimTime,
    pub sequence: u64,
    pub kind: K,
}

struct Entry<K>(Event<K>);

impl<K> PartialEq for Entry<K> {
    fn eq(&self, other: &Self) -> bool {
        self.0.fire_at == other.0.fire_at && self.0.sequence == other.0.sequence
    }
}

impl<K> Eq for Entry<K> {}

impl<K> PartialOrd for Entry<K> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<K> Ord for Entry<K> {
    // BinaryHeap is a max-heap; invert so the earliest (fire_at, sequence) pops first.
    fn cmp(&self, other: &Self) -> Ordering {
        (other.0.fire_at, other.0.sequence).cmp(&(self.0.fire_at, self.0.sequence))
    }
}

/// Virtual clock plus an ordered queue of pending events.
pub struct EventQueue<K> {
    heap: BinaryHeap<Entry<K>>,
    now: SimTime,
    next_sequence: u64,
    dispatched: u64,
}

impl<K> Default for EventQueue<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K> EventQueue<K> {
    pub fn new() -> Self {
        EventQueue {
            heap: BinaryHeap::new(),
            now: SimTime::ZERO,
            next_sequence: 0,
            dispatched: 0,
        }
    }

    pub fn now(&self) -> SimTime {
        self.now
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    /// Fire time of the next pending event.
    pub fn peek_time(&self) -> Option<SimTime> {
        self.heap.peek().map(|e| e.0.fire_at)
    }

    /// Total events ever scheduled on this queue.
    pub fn scheduled_total(&self) -> u64 {
        self.next_sequence
    }

    /// Total events popped for dispatch.
    pub fn dispatched_total(&self) -> u64 {
        self.dispatched
    }

    pub fn try_schedule(&mut self, fire_at: SimTime, kind: K) -> Result<u64, EngineError> {
        if fire_at < self.now {
            return Err(EngineError::ScheduledInPast {
                fire_at,
                now: self.now,
            });
        }
        let sequence = self.next_sequence;
        self.next_sequence += 1;
        self.heap.push(Entry(Event {
            fire_at,
            sequence,
            kind,
        }));
        Ok(sequence)
    }

    /// Schedules `kind` at `fire_at`.
    ///
    /// Panics when `fire_at` lies before the current clock: that is a logic
    /// error in the caller, not a recoverable condition.
    pub fn schedule(&mut self, fire_at: SimTime, kind: K) -> u64 {
        match self.try_schedule(fire_at, kind) {
            Ok(seq) => seq,
            Err(e) => panic!("{e}"),
        }
    }

    pub fn schedule_in(&mut self, delay: SimTime, kind: K) -> u64 {
        self.schedule(self.now + delay, kind)
    }

    /// Pops the next event if it fires no later than `t_end`, advancing the clock to it.
    pub fn pop_until(&mut self, t_end: SimTime) -> Option<Event<K>> {
        if self.heap.peek()?.0.fire_at > t_end {
            return None;
        }
        let Entry(ev) = self.heap.pop()?;
        debug_assert!(ev.fire_at >= self.now);
        self.now = ev.fire_at;
        self.dispatched += 1;
        Some(ev)
    }

    /// Dispatches every event with `fire_at <= t_end` in (time, sequence)
    /// order, then sets the clock to `t_end`. Returns the number of events
    /// dispatched by this call. The handler may schedule further events.
    pub fn run_until<F>(&mut self, t_end: SimTime, mut handler: F) -> Result<u64, EngineError>
    where
        F: FnMut(&mut Self, Event<K>),
    {
        if t_end < self.now {
            return Err(EngineError::RunBackwards {
                t_end,
                now: self.now,
            });
        }
        let mut count = 0;
        while let Some(ev) = self.pop_until(t_end) {
            count += 1;
            handler(self, ev);
        }
        self.now = t_end;
        Ok(count)
    }
}
