//! Trace-driven discrete-event simulator of a single mmWave gNB–UE link with
//! SS-burst beam tracking, HARQ, RLC AM and TCP.

pub mod beam;
pub mod channel;
pub mod cli;
pub mod config;
pub mod engine;
pub mod phy;
pub mod sim;
pub mod stack;
pub mod summary;
