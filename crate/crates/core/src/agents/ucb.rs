//! UCB1 and sliding-window UCB.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::stats::EmpiricalStats;

use super::Action;

/// `mu_k + sqrt(2 ln t / n_k)`.
pub fn ucb1_index(stats: &EmpiricalStats, arm: usize, t: u64) -> Result<f64> {
    let n = stats.count(arm);
    if n == 0 {
        return Err(Error::Contract(format!("UCB1 index of unplayed arm {arm}")));
    }
    Ok(stats.mean(arm) + (2.0 * (t as f64).ln() / n as f64).sqrt())
}

fn argmax(values: impl Iterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_v = f64::NEG_INFINITY;
    for (k, v) in values.enumerate() {
        if v > best_v {
            best = k;
            best_v = v;
        }
    }
    best
}

#[derive(Debug, Clone)]
pub struct Ucb1Agent {
    stats: EmpiricalStats,
}

impl Ucb1Agent {
    pub fn new(arms: usize) -> Self {
        Self {
            stats: EmpiricalStats::new(arms),
        }
    }

    pub fn stats(&self) -> &EmpiricalStats {
        &self.stats
    }

    pub fn act(&self, t: u64) -> Action {
        let arms = self.stats.arms();
        if let Some(k) = (0..arms).find(|&k| self.stats.count(k) == 0) {
            return Action::exploit(k);
        }
        let two_log_t = 2.0 * (t as f64).ln();
        let arm = argmax(
            (0..arms).map(|k| self.stats.mean(k) + (two_log_t / self.stats.count(k) as f64).sqrt()),
        );
        Action::exploit(arm)
    }

    pub fn observe(&mut self, arm: usize, y: f64) -> Result<()> {
        self.stats.update(arm, y)
    }

    pub fn recommendation(&self) -> usize {
        argmax((0..self.stats.arms()).map(|k| self.stats.mean(k)))
    }
}

/// The last `capacity` pulls, with per-arm sums and counts over them.
#[derive(Debug, Clone)]
pub struct SlidingWindow {
    capacity: usize,
    entries: VecDeque<(u64, usize, f64)>,
    sums: Vec<f64>,
    counts: Vec<u64>,
    evictions: usize,
}

impl SlidingWindow {
    pub fn new(arms: usize, capacity: usize) -> Self {
        Self {
            capacity,
            entries: VecDeque::with_capacity(capacity.min(1 << 20) + 1),
            sums: vec![0.0; arms],
            counts: vec![0; arms],
            evictions: 0,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn push(&mut self, t: u64, arm: usize, y: f64) {
        self.entries.push_back((t, arm, y));
        self.sums[arm] += y;
        self.counts[arm] += 1;
        if self.entries.len() > self.capacity {
            let (_, old, v) = self.entries.pop_front().unwrap();
            self.sums[old] -= v;
            self.counts[old] -= 1;
            self.evictions += 1;
            if self.evictions >= self.capacity {
                self.resum();
            }
        }
    }

    // clears the rounding left by repeated add/subtract
    fn resum(&mut self) {
        self.evictions = 0;
        self.sums.iter_mut().for_each(|s| *s = 0.0);
        for &(_, k, y) in &self.entries {
            self.sums[k] += y;
        }
    }

    pub fn count(&self, arm: usize) -> u64 {
        self.counts[arm]
    }

    pub fn mean(&self, arm: usize) -> f64 {
        match self.counts[arm] {
            0 => 0.0,
            n => self.sums[arm] / n as f64,
        }
    }

    /// `(t, arm, reward)` from oldest to newest.
    pub fn entries(&self) -> impl Iterator<Item = &(u64, usize, f64)> {
        self.entries.iter()
    }
}

/// Windowed mean of `arm` plus `sqrt(xi ln(min(t, window)) / N_k)`.
pub fn swucb_index(window: &SlidingWindow, arm: usize, t: u64, xi: f64) -> Result<f64> {
    let n = window.count(arm);
    if n == 0 {
        return Err(Error::Contract(format!(
            "SW-UCB index of arm {arm} absent from window"
        )));
    }
    let horizon = t.min(window.capacity() as u64) as f64;
    Ok(window.mean(arm) + (xi * horizon.ln() / n as f64).sqrt())
}

#[derive(Debug, Clone)]
pub struct SwUcbAgent {
    window: SlidingWindow,
    xi: f64,
}

impl SwUcbAgent {
    pub fn new(arms: usize, window: usize, xi: f64) -> Self {
        Self {
            window: SlidingWindow::new(arms, window),
            xi,
        }
    }

    pub fn window(&self) -> &SlidingWindow {
        &self.window
    }

    pub fn act(&self, t: u64) -> Action {
        let arms = self.window.counts.len();
        if let Some(k) = (0..arms).find(|&k| self.window.count(k) == 0) {
            return Action::exploit(k);
        }
        let pad = self.xi * (t.min(self.window.capacity as u64) as f64).ln();
        let arm = argmax(
            (0..arms).map(|k| self.window.mean(k) + (pad / self.window.count(k) as f64).sqrt()),
        );
        Action::exploit(arm)
    }

    pub fn observe(&mut self, t: u64, arm: usize, y: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&y) {
            return Err(Error::RewardOutOfRange(y));
        }
        if arm >= self.window.counts.len() {
            return Err(Error::ArmOutOfRange {
                arm,
                arms: self.window.counts.len(),
            });
        }
        self.window.push(t, arm, y);
        Ok(())
    }

    pub fn recommendation(&self) -> usize {
        argmax((0..self.window.counts.len()).map(|k| self.window.mean(k)))
    }
}
