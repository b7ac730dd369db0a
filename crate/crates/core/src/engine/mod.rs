//! Deterministic discrete-event core: integer-nanosecond clock, ordered
//! event queue with FIFO tie-break, and per-component random streams.

mod queue;
mod rng;
mod time;

pub use queue::{Event, EventQueue};
pub use rng::{SimRng, Stream};
pub use time::SimTime;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("event scheduled at {fire_at}, before the current clock {now}")]
    ScheduledInPast { fire_at: SimTime, now: SimTime },
    #[error("run_until({t_end}) requested but the clock is already at {now}")]
    RunBackwards { t_end: SimTime, now: SimTime },
}
