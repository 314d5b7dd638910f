//! Bandit policies behind one act/observe contract.
//!
//! A run drives an [`Agent`] as
//!
//! ```text
//! for t in 1..=T:
//!     reset = agent.begin_step(rng)      // SER4 only
//!     action = agent.act(t, rng)
//!     y = env.sample(action.arm, t)
//!     agent.observe(t, action.arm, y, rng)
//! ```
//!
//! Elimination agents (SE, SER3, SER4) report `sampling = true` while more
//! than one arm is active; all other agents never enter a sampling phase
//! and always report `false`.

mod elimination;
mod exp3;
mod ucb;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::stats::check_delta;

pub use elimination::{default_tau_min, ser3_eliminate, EliminationAgent};
pub use exp3::{exp3_probabilities, Exp3Agent};
pub use ucb::{swucb_index, ucb1_index, SlidingWindow, SwUcbAgent, Ucb1Agent};

use elimination::RoundOrder;

fn default_xi() -> f64 {
    0.6
}

/// Policy selection and parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AgentConfig {
    /// Successive elimination with a reshuffled round-robin.
    Ser3 {
        delta: f64,
        #[serde(default)]
        epsilon: f64,
        #[serde(default)]
        tau_min: Option<u64>,
    },
    /// SER3 restarted from scratch with probability `phi` at every step.
    Ser4 {
        delta: f64,
        #[serde(default)]
        epsilon: f64,
        #[serde(default)]
        tau_min: Option<u64>,
        phi: f64,
    },
    /// Successive elimination with the fixed order `0, 1, .., K-1`.
    Se {
        delta: f64,
        #[serde(default)]
        epsilon: f64,
        #[serde(default)]
        tau_min: Option<u64>,
    },
    Ucb1 {},
    Exp3 {
        gamma: f64,
    },
    Exp3s {
        gamma: f64,
        alpha: f64,
    },
    SwUcb {
        window: usize,
        #[serde(default = "default_xi")]
        xi: f64,
    },
}

impl AgentConfig {
    /// Label used in reports and CSV files.
    pub fn name(&self) -> &'static str {
        match self {
            AgentConfig::Ser3 { .. } => "SER3",
            AgentConfig::Ser4 { .. } => "SER4",
            AgentConfig::Se { .. } => "SE",
            AgentConfig::Ucb1 {} => "UCB1",
            AgentConfig::Exp3 { .. } => "EXP3",
            AgentConfig::Exp3s { .. } => "EXP3.S",
            AgentConfig::SwUcb { .. } => "SW-UCB",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            AgentConfig::Ser3 {
                delta,
                epsilon,
                tau_min,
            }
            | AgentConfig::Se {
                delta,
                epsilon,
                tau_min,
            } => check_elimination(delta, epsilon, tau_min),
            AgentConfig::Ser4 {
                delta,
                epsilon,
                tau_min,
                phi,
            } => {
                check_elimination(delta, epsilon, tau_min)?;
                if !(0.0..=1.0).contains(&phi) {
                    return Err(Error::param("phi", format!("{phi} not in [0, 1]")));
                }
                Ok(())
            }
            AgentConfig::Ucb1 {} => Ok(()),
            AgentConfig::Exp3 { gamma } => check_gamma(gamma),
            AgentConfig::Exp3s { gamma, alpha } => {
                check_gamma(gamma)?;
                if !(alpha.is_finite() && alpha >= 0.0) {
                    return Err(Error::param("alpha", format!("{alpha} must be >= 0")));
                }
                Ok(())
            }
            AgentConfig::SwUcb { window, xi } => {
                if window == 0 {
                    return Err(Error::param("window", "must be at least 1"));
                }
                if !(xi.is_finite() && xi > 0.0) {
                    return Err(Error::param("xi", format!("{xi} must be > 0")));
                }
                Ok(())
            }
        }
    }
}

fn check_elimination(delta: f64, epsilon: f64, tau_min: Option<u64>) -> Result<()> {
    check_delta(delta)?;
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::param("epsilon", format!("{epsilon} not in [0, 1)")));
    }
    if tau_min == Some(0) {
        return Err(Error::param("tau_min", "must be at least 1"));
    }
    Ok(())
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma <= 1.0 {
        Ok(())
    } else {
        Err(Error::param("gamma", format!("{gamma} not in (0, 1]")))
    }
}

/// Arm to pull and whether the pull belongs to a sampling phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Action {
    pub arm: usize,
    pub sampling: bool,
}

impl Action {
    pub(crate) fn exploit(arm: usize) -> Self {
        Self {
            arm,
            sampling: false,
        }
    }
}

/// One time step of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PullRecord {
    pub t: u64,
    pub arm: usize,
    pub reward: f64,
    /// `s(t)`.
    pub sampling: bool,
    pub reset: bool,
    /// `k_t`, the arm the agent currently believes optimal.
    pub recommended: usize,
}

/// A live policy.
#[derive(Debug, Clone)]
pub enum Agent {
    Elimination(EliminationAgent),
    Ucb1(Ucb1Agent),
    Exp3(Exp3Agent),
    SwUcb(SwUcbAgent),
}

impl Agent {
    pub fn new(config: &AgentConfig, arms: usize, rng: &mut RngStream) -> Result<Self> {
        if arms == 0 {
            return Err(Error::param("arms", "need at least one arm"));
        }
        config.validate()?;
        let tau = |delta: f64, tau_min: Option<u64>| {
            tau_min.unwrap_or_else(|| default_tau_min(arms, delta))
        };
        Ok(match *config {
            AgentConfig::Ser3 {
                delta,
                epsilon,
                tau_min,
            } => Agent::Elimination(EliminationAgent::new(
                RoundOrder::Shuffled,
                arms,
                delta,
                epsilon,
                tau(delta, tau_min),
                None,
                rng,
            )),
            AgentConfig::Ser4 {
                delta,
                epsilon,
                tau_min,
                phi,
            } => Agent::Elimination(EliminationAgent::new(
                RoundOrder::Shuffled,
                arms,
                delta,
                epsilon,
                tau(delta, tau_min),
                Some(phi),
                rng,
            )),
            AgentConfig::Se {
                delta,
                epsilon,
                tau_min,
            } => Agent::Elimination(EliminationAgent::new(
                RoundOrder::Fixed,
                arms,
                delta,
                epsilon,
                tau(delta, tau_min),
                None,
                rng,
            )),
            AgentConfig::Ucb1 {} => Agent::Ucb1(Ucb1Agent::new(arms)),
            AgentConfig::Exp3 { gamma } => Agent::Exp3(Exp3Agent::new(arms, gamma, 0.0)),
            AgentConfig::Exp3s { gamma, alpha } => Agent::Exp3(Exp3Agent::new(arms, gamma, alpha)),
            AgentConfig::SwUcb { window, xi } => Agent::SwUcb(SwUcbAgent::new(arms, window, xi)),
        })
    }

    /// Start-of-step hook; returns true when SER4 restarted its task.
    #[inline]
    pub fn begin_step(&mut self, rng: &mut RngStream) -> bool {
        match self {
            Agent::Elimination(a) => a.maybe_reset(rng),
            _ => false,
        }
    }

    #[inline]
    pub fn act(&mut self, t: u64, rng: &mut RngStream) -> Action {
        match self {
            Agent::Elimination(a) => a.act(),
            Agent::Ucb1(a) => a.act(t),
            Agent::Exp3(a) => a.act(rng),
            Agent::SwUcb(a) => a.act(t),
        }
    }

    #[inline]
    pub fn observe(&mut self, t: u64, arm: usize, y: f64, rng: &mut RngStream) -> Result<()> {
        match self {
            Agent::Elimination(a) => a.observe(arm, y, rng),
            Agent::Ucb1(a) => a.observe(arm, y),
            Agent::Exp3(a) => a.observe(arm, y),
            Agent::SwUcb(a) => a.observe(t, arm, y),
        }
    }

    /// `k_t`: the survivor or empirical leader for elimination agents, the
    /// arm with the best empirical mean for UCB-style agents, the heaviest
    /// arm for the EXP3 family.
    #[inline]
    pub fn recommendation(&self) -> usize {
        match self {
            Agent::Elimination(a) => a.recommendation(),
            Agent::Ucb1(a) => a.recommendation(),
            Agent::Exp3(a) => a.recommendation(),
            Agent::SwUcb(a) => a.recommendation(),
        }
    }

    pub fn as_elimination(&self) -> Option<&EliminationAgent> {
        match self {
            Agent::Elimination(a) => Some(a),
            _ => None,
        }
    }
}

/// Free-function form of [`Agent::new`].
pub fn agent_init(config: &AgentConfig, arms: usize, rng: &mut RngStream) -> Result<Agent> {
    Agent::new(config, arms, rng)
}
