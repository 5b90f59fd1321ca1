//! Fuzzy group decision-making.
//!
//! Explicit feature votes and chat sentiment are fused by a Mamdani fuzzy
//! inference system into a total preference per alternative; after the
//! decision, participants' agreement and confidence are mapped by a second
//! fuzzy system to feedback scores whose interquartile range classifies the
//! group's consensus.

pub mod affect;
pub mod calibrate;
pub mod consensus;
pub mod decision;
pub mod exec;
pub mod fuzzy;
pub mod pipeline;
pub mod preference;
pub mod session;

pub use exec::Execution;
