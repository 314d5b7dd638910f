use serde::{Deserialize, Serialize};

use crate::agents::{Agent, AgentConfig, PullRecord};
use crate::env::Environment;
use crate::error::{Error, Result};
use crate::rng::{derive_stream, RngStream, StreamPurpose};

/// Per-run summary of an agent's internal events.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentEvents {
    pub resets: u64,
    /// Rounds at which identification tasks ended (elimination agents only).
    pub stopping_rounds: Vec<u64>,
    /// The arm left when exactly one remains active at the end of the run.
    pub survivor: Option<usize>,
    pub final_recommendation: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub records: Vec<PullRecord>,
    pub events: AgentEvents,
}

/// Plays `horizon` steps of `config` on `env`, handing every step to `sink`.
/// `reward_rng` feeds the environment and `agent_rng` the agent, so the two
/// never share draws.
pub fn play(
    env: &Environment,
    config: &AgentConfig,
    horizon: u64,
    reward_rng: &mut RngStream,
    agent_rng: &mut RngStream,
    mut sink: impl FnMut(&PullRecord),
) -> Result<AgentEvents> {
    if horizon > env.horizon() {
        return Err(Error::TimeOutOfRange {
            t: horizon,
            horizon: env.horizon(),
        });
    }
    let mut agent = Agent::new(config, env.arms(), agent_rng)?;
    for t in 1..=horizon {
        let reset = agent.begin_step(agent_rng);
        let recommended = agent.recommendation();
        let action = agent.act(t, agent_rng);
        let reward = env.sample(action.arm, t, reward_rng);
        agent.observe(t, action.arm, reward, agent_rng)?;
        sink(&PullRecord {
            t,
            arm: action.arm,
            reward,
            sampling: action.sampling,
            reset,
            recommended,
        });
    }
    let (resets, stopping_rounds, survivor) = match agent.as_elimination() {
        Some(e) => (
            e.resets(),
            e.stopping_rounds().to_vec(),
            (e.active().len() == 1).then(|| e.active().arms()[0]),
        ),
        None => (0, Vec::new(), None),
    };
    Ok(AgentEvents {
        resets,
        stopping_rounds,
        survivor,
        final_recommendation: agent.recommendation(),
    })
}

/// One run with the reward and agent streams of `seed`.
pub fn run_single(
    env: &Environment,
    config: &AgentConfig,
    horizon: u64,
    seed: u64,
) -> Result<RunTrace> {
    let mut reward_rng = RngStream::new(seed, derive_stream(0, 0, StreamPurpose::Reward));
    let mut agent_rng = RngStream::new(seed, derive_stream(0, 0, StreamPurpose::Agent));
    let mut records = Vec::with_capacity(horizon.min(1 << 24) as usize);
    let events = play(env, config, horizon, &mut reward_rng, &mut agent_rng, |r| {
        records.push(*r)
    })?;
    Ok(RunTrace { records, events })
}
