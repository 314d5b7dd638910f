//! Successive elimination in three flavours: a fixed round-robin order (SE),
//! a reshuffled order every round (SER3), and the reshuffled order with
//! random restarts of the whole identification task (SER4).

use crate::error::{Error, Result};
use crate::rng::{shuffle_in_place, RngStream};
use crate::stats::{radius_unchecked, ActiveSet, EmpiricalStats};

use super::Action;

/// `max(1, ceil(ln(K / delta)))`.
pub fn default_tau_min(arms: usize, delta: f64) -> u64 {
    ((arms as f64 / delta).ln().ceil() as u64).max(1)
}

/// One elimination step over a completed round.
///
/// Every active arm must have been observed the same number of times `tau`.
/// Nothing happens while `tau < tau_min`; afterwards each arm whose empirical
/// mean trails the leader by `mu_max - mu_k + epsilon >= radius(tau, K, delta)`
/// is dropped. `arms` is the original number of arms `K`. The empirical
/// leader (lowest id on ties) always survives.
pub fn ser3_eliminate(
    mut active: ActiveSet,
    stats: &EmpiricalStats,
    arms: usize,
    delta: f64,
    epsilon: f64,
    tau_min: u64,
) -> Result<ActiveSet> {
    let tau = stats.count(active.arms()[0]);
    if active.arms().iter().any(|&k| stats.count(k) != tau) {
        return Err(Error::Contract(
            "elimination requires equal observation counts over the active set".into(),
        ));
    }
    if tau == 0 || tau < tau_min {
        return Ok(active);
    }
    let radius = radius_unchecked(tau, arms, delta);
    let leader = active.leader(stats);
    let best = stats.mean(leader);
    active.retain(|&k| k == leader || best - stats.mean(k) + epsilon < radius);
    Ok(active)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum RoundOrder {
    Fixed,
    Shuffled,
}

/// Shared state of SE, SER3 and SER4.
#[derive(Debug, Clone)]
pub struct EliminationAgent {
    order_kind: RoundOrder,
    arms: usize,
    delta: f64,
    epsilon: f64,
    tau_min: u64,
    reset_prob: Option<f64>,
    active: ActiveSet,
    stats: EmpiricalStats,
    order: Vec<usize>,
    cursor: usize,
    stopping_rounds: Vec<u64>,
    resets: u64,
}

impl EliminationAgent {
    pub(crate) fn new(
        order_kind: RoundOrder,
        arms: usize,
        delta: f64,
        epsilon: f64,
        tau_min: u64,
        reset_prob: Option<f64>,
        rng: &mut RngStream,
    ) -> Self {
        let mut agent = Self {
            order_kind,
            arms,
            delta,
            epsilon,
            tau_min,
            reset_prob,
            active: ActiveSet::full(arms),
            stats: EmpiricalStats::new(arms),
            order: Vec::new(),
            cursor: 0,
            stopping_rounds: Vec::new(),
            resets: 0,
        };
        agent.start_round(rng);
        agent
    }

    fn start_round(&mut self, rng: &mut RngStream) {
        self.order.clear();
        self.order.extend_from_slice(self.active.arms());
        if self.order_kind == RoundOrder::Shuffled && self.order.len() > 1 {
            shuffle_in_place(&mut self.order, rng);
        }
        self.cursor = 0;
    }

    pub fn is_sampling(&self) -> bool {
        self.active.len() > 1
    }

    pub fn active(&self) -> &ActiveSet {
        &self.active
    }

    pub fn stats(&self) -> &EmpiricalStats {
        &self.stats
    }

    pub fn tau_min(&self) -> u64 {
        self.tau_min
    }

    /// Order of the round in progress.
    pub fn round_order(&self) -> &[usize] {
        &self.order
    }

    /// Round index `tau` at which each identification task ended.
    pub fn stopping_rounds(&self) -> &[u64] {
        &self.stopping_rounds
    }

    pub fn resets(&self) -> u64 {
        self.resets
    }

    /// SER4's per-step restart. Does nothing (and draws nothing) for SE/SER3
    /// or when the reset probability is 0.
    pub fn maybe_reset(&mut self, rng: &mut RngStream) -> bool {
        let Some(phi) = self.reset_prob else {
            return false;
        };
        let fire = if phi <= 0.0 {
            false
        } else if phi >= 1.0 {
            true
        } else {
            rng.uniform() < phi
        };
        if fire {
            self.active = ActiveSet::full(self.arms);
            self.stats.reset();
            self.start_round(rng);
            self.resets += 1;
        }
        fire
    }

    #[inline]
    pub fn act(&self) -> Action {
        if self.is_sampling() {
            Action {
                arm: self.order[self.cursor],
                sampling: true,
            }
        } else {
            Action {
                arm: self.active.arms()[0],
                sampling: false,
            }
        }
    }

    pub fn observe(&mut self, arm: usize, y: f64, rng: &mut RngStream) -> Result<()> {
        if !(0.0..=1.0).contains(&y) {
            return Err(Error::RewardOutOfRange(y));
        }
        if !self.is_sampling() {
            // the survivor is played without further updates
            return Ok(());
        }
        if arm != self.order[self.cursor] {
            return Err(Error::Contract(format!(
                "observed arm {arm} but the round expected {}",
                self.order[self.cursor]
            )));
        }
        self.stats.update(arm, y)?;
        self.cursor += 1;
        if self.cursor == self.order.len() {
            let tau = self.active.round();
            let active = std::mem::replace(&mut self.active, ActiveSet::full(1));
            self.active = ser3_eliminate(
                active,
                &self.stats,
                self.arms,
                self.delta,
                self.epsilon,
                self.tau_min,
            )?;
            if self.active.len() == 1 {
                self.stopping_rounds.push(tau);
            }
            self.active.advance_round();
            self.start_round(rng);
        }
        Ok(())
    }

    /// Current best guess: the survivor, or the empirical leader while
    /// sampling.
    pub fn recommendation(&self) -> usize {
        self.active.leader(&self.stats)
    }
}
