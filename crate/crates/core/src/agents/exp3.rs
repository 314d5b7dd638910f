//! EXP3 and EXP3.S with log-space weights.

use crate::error::{Error, Result};
use crate::rng::RngStream;

use super::Action;

fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

#[inline]
fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        hi
    } else {
        hi + (lo - hi).exp().ln_1p()
    }
}

/// `p_k = (1 - gamma) * softmax(log_weights)_k + gamma / K`.
pub fn exp3_probabilities(log_weights: &[f64], gamma: f64) -> Vec<f64> {
    let mut out = vec![0.0; log_weights.len()];
    fill_probabilities(log_weights, gamma, &mut out);
    out
}

fn fill_probabilities(log_weights: &[f64], gamma: f64, out: &mut [f64]) {
    let arms = log_weights.len() as f64;
    let m = log_weights
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let mut total = 0.0;
    for (p, &lw) in out.iter_mut().zip(log_weights) {
        *p = (lw - m).exp();
        total += *p;
    }
    let floor = gamma / arms;
    for p in out.iter_mut() {
        *p = (1.0 - gamma) * (*p / total) + floor;
    }
}

// log-weights are shifted back towards 0 once they drift this far
const RENORMALIZE_AT: f64 = 512.0;

/// EXP3 (`alpha = 0`) and EXP3.S (`alpha > 0`).
#[derive(Debug, Clone)]
pub struct Exp3Agent {
    gamma: f64,
    alpha: f64,
    log_weights: Vec<f64>,
    probs: Vec<f64>,
    scratch: Vec<f64>,
}

impl Exp3Agent {
    pub fn new(arms: usize, gamma: f64, alpha: f64) -> Self {
        let mut agent = Self {
            gamma,
            alpha,
            log_weights: vec![0.0; arms],
            probs: vec![0.0; arms],
            scratch: vec![0.0; arms],
        };
        agent.refresh();
        agent
    }

    fn refresh(&mut self) {
        fill_probabilities(&self.log_weights, self.gamma, &mut self.probs);
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    /// Sampling distribution for the next pull.
    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn act(&self, rng: &mut RngStream) -> Action {
        let u = rng.uniform();
        let mut acc = 0.0;
        let mut last = 0;
        for (k, &p) in self.probs.iter().enumerate() {
            if p > 0.0 {
                last = k;
            }
            acc += p;
            if u < acc {
                return Action::exploit(k);
            }
        }
        Action::exploit(last)
    }

    pub fn observe(&mut self, arm: usize, y: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&y) {
            return Err(Error::RewardOutOfRange(y));
        }
        let arms = self.log_weights.len();
        if arm >= arms {
            return Err(Error::ArmOutOfRange { arm, arms });
        }
        let k = arms as f64;
        let gain = self.gamma * (y / self.probs[arm]) / k;
        if self.alpha > 0.0 {
            // w_i <- w_i exp(gamma xhat_i / K) + (e alpha / K) sum_j w_j
            let share =
                (std::f64::consts::E * self.alpha / k).ln() + log_sum_exp(&self.log_weights);
            self.scratch.copy_from_slice(&self.log_weights);
            self.scratch[arm] += gain;
            for (lw, &raised) in self.log_weights.iter_mut().zip(&self.scratch) {
                *lw = log_add_exp(raised, share);
            }
        } else {
            self.log_weights[arm] += gain;
        }
        let m = self
            .log_weights
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        if m.abs() > RENORMALIZE_AT {
            self.log_weights.iter_mut().for_each(|lw| *lw -= m);
        }
        self.refresh();
        Ok(())
    }

    pub fn recommendation(&self) -> usize {
        let mut best = 0;
        for k in 1..self.log_weights.len() {
            if self.log_weights[k] > self.log_weights[best] {
                best = k;
            }
        }
        best
    }
}
