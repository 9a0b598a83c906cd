//! Footprint accounting, input loading, round-based geo-distributed job
//! scheduling and trace-driven simulation.

pub mod footprint;
pub mod ingest;
pub mod sched;
pub mod sim;
pub mod synth;
