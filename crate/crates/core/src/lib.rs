//! Non-stationary multi-armed bandits: successive elimination with a
//! randomized round-robin (SER3) and with random resets (SER4), the usual
//! baselines, synthetic non-stationary environments, post-hoc analysis and a
//! reproducible experiment harness.
//!
//! Time steps are 1-based (`t = 1..=T`), arms are 0-based.

pub mod agents;
pub mod analysis;
pub mod env;
pub mod error;
pub mod harness;
pub mod rng;
pub mod stats;

pub use agents::{Agent, AgentConfig, PullRecord};
pub use env::{Environment, EnvironmentSpec, RewardLaw, Segment};
pub use error::{Error, Result};
pub use rng::RngStream;
