use serde::{Deserialize, Serialize};

use crate::engine::SimTime;

/// Fixed one-way delay between the TCP endpoint and the gNB, applied in both directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreNetwork {
    pub one_way_delay: SimTime,
}

impl Default for CoreNetwork {
    fn default() -> Self {
        CoreNetwork {
            one_way_delay: SimTime::from_millis(5),
        }
    }
}

impl CoreNetwork {
    pub fn new(one_way_delay: SimTime) -> Option<Self> {
        (one_way_delay > SimTime::ZERO).then_some(CoreNetwork { one_way_delay })
    }

    pub fn round_trip(&self) -> SimTime {
        self.one_way_delay.mul(2)
    }

    pub fn arrival(&self, sent_at: SimTime) -> SimTime {
        sent_at + self.one_way_delay
    }
}
