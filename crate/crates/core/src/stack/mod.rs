//! Data path above PHY: RLC AM, the fixed-delay core network, TCP and output recording.

pub mod core_net;
pub mod record;
pub mod rlc;
pub mod tcp;

pub use core_net::CoreNetwork;
pub use record::{CsvRecord, Recorder, TimeSeriesRecord, CSV_HEADER};
pub use rlc::{
    Piece, ReceiverCounters, RlcAmBuffer, RlcCounters, RlcReceiver, DEFAULT_RLC_CAPACITY,
};
pub use tcp::{
    Ack, AckOutcome, CcState, CongestionControl, ReceiverStats, TcpConfig, TcpConnState,
    TcpCounters, TcpReceiver, TcpSegment,
};
