//! Round-robin realizations and the mean gap they induce.

use serde::{Deserialize, Serialize};

use crate::env::Environment;
use crate::error::{Error, Result};

pub const MAX_BRUTE_FORCE_ARMS: usize = 6;
pub const MAX_BRUTE_FORCE_TAU: u64 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Round {
    pub start: u64,
    pub size: usize,
}

/// `{(t_1, |S_1|), ..., (t_tau, |S_tau|)}` with `t_1 = 1`,
/// `t_{i+1} = t_i + |S_i|` and non-increasing sizes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Round>", into = "Vec<Round>")]
pub struct RoundRobinRealization {
    rounds: Vec<Round>,
}

impl RoundRobinRealization {
    pub fn from_sizes(sizes: &[usize]) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::param("realization", "needs at least one round"));
        }
        let mut rounds = Vec::with_capacity(sizes.len());
        let mut start = 1u64;
        let mut prev = usize::MAX;
        for &size in sizes {
            if size == 0 || size > prev {
                return Err(Error::param(
                    "realization",
                    format!("sizes {sizes:?} must be >= 1 and non-increasing"),
                ));
            }
            rounds.push(Round { start, size });
            start += size as u64;
            prev = size;
        }
        Ok(Self { rounds })
    }

    pub fn rounds(&self) -> &[Round] {
        &self.rounds
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.rounds.iter().map(|r| r.size).collect()
    }

    pub fn tau(&self) -> u64 {
        self.rounds.len() as u64
    }

    /// Last step covered.
    pub fn end(&self) -> u64 {
        let last = self.rounds.last().expect("non-empty");
        last.start + last.size as u64 - 1
    }
}

impl TryFrom<Vec<Round>> for RoundRobinRealization {
    type Error = Error;

    fn try_from(rounds: Vec<Round>) -> Result<Self> {
        let sizes: Vec<usize> = rounds.iter().map(|r| r.size).collect();
        let built = Self::from_sizes(&sizes)?;
        if built.rounds != rounds {
            return Err(Error::param(
                "realization",
                "start steps must chain from t = 1",
            ));
        }
        Ok(built)
    }
}

impl From<RoundRobinRealization> for Vec<Round> {
    fn from(r: RoundRobinRealization) -> Self {
        r.rounds
    }
}

/// Prefix sums `P[t] = sum_{j <= t} (mu_ref(j) - mu_k(j))` for `t` in `0..=len`.
fn gap_prefix(env: &Environment, k: usize, k_ref: usize, len: u64) -> Vec<f64> {
    let mut prefix = Vec::with_capacity(len as usize + 1);
    prefix.push(0.0);
    let mut acc = 0.0;
    for t in 1..=len {
        acc += env.mean(k_ref, t) - env.mean(k, t);
        prefix.push(acc);
    }
    prefix
}

fn check_arm(env: &Environment, arm: usize) -> Result<()> {
    if arm >= env.arms() {
        return Err(Error::ArmOutOfRange {
            arm,
            arms: env.arms(),
        });
    }
    Ok(())
}

/// `(1/tau) sum_i sum_{j=t_i}^{t_i+|S_i|-1} (mu_ref(j) - mu_k(j)) / |S_i|`.
pub fn realization_gap(
    env: &Environment,
    realization: &RoundRobinRealization,
    k: usize,
    k_ref: usize,
) -> Result<f64> {
    check_arm(env, k)?;
    check_arm(env, k_ref)?;
    let end = realization.end();
    if end > env.horizon() {
        return Err(Error::TimeOutOfRange {
            t: end,
            horizon: env.horizon(),
        });
    }
    let prefix = gap_prefix(env, k, k_ref, end);
    let total: f64 = realization
        .rounds
        .iter()
        .map(|r| {
            let a = r.start as usize;
            (prefix[a + r.size - 1] - prefix[a - 1]) / r.size as f64
        })
        .sum();
    Ok(total / realization.tau() as f64)
}

/// `argmax_k sum_{t=1}^{T} mu_k(t)` over the declared horizon, ties to the
/// lowest id.
pub fn horizon_optimal_arm(env: &Environment) -> Result<usize> {
    let mut best = 0;
    let mut best_v = f64::NEG_INFINITY;
    for k in 0..env.arms() {
        let v = env.cumulative_mean(k)?;
        if v > best_v {
            best = k;
            best_v = v;
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapWitness {
    pub arm: usize,
    pub gap: f64,
    pub realization: RoundRobinRealization,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub optimal_arm: usize,
    /// Minimum over realizations per arm; `None` at the optimal arm.
    pub per_arm: Vec<Option<f64>>,
    pub min_gap: f64,
    pub gap_positive: bool,
    /// Minimizing realization, present only when the minimum is `<= 0`.
    pub witness: Option<GapWitness>,
    pub realizations_checked: u64,
}

struct Search<'a> {
    arms: usize,
    optimal: usize,
    tau_lo: u64,
    tau_hi: u64,
    /// Per-arm prefix sums; empty for the optimal arm.
    prefix: &'a [Vec<f64>],
    sizes: Vec<usize>,
    /// Running `sum_i round_gap_i` per arm along `sizes`.
    partial: Vec<Vec<f64>>,
    best: Vec<Option<(f64, Vec<usize>)>>,
    checked: u64,
}

impl Search<'_> {
    fn record(&mut self) {
        let depth = self.sizes.len();
        self.checked += 1;
        for k in (0..self.arms).filter(|&k| k != self.optimal) {
            let gap = self.partial[depth][k] / depth as f64;
            if self.best[k].as_ref().is_none_or(|(v, _)| gap < *v) {
                self.best[k] = Some((gap, self.sizes.clone()));
            }
        }
    }

    fn push_round(&mut self, start: u64, size: usize) {
        let depth = self.sizes.len();
        let a = start as usize;
        let row: Vec<f64> = (0..self.arms)
            .map(|k| {
                if k == self.optimal {
                    return 0.0;
                }
                let p = &self.prefix[k];
                self.partial[depth][k] + (p[a + size - 1] - p[a - 1]) / size as f64
            })
            .collect();
        self.partial.truncate(depth + 1);
        self.partial.push(row);
        self.sizes.push(size);
    }

    fn descend(&mut self, start: u64, max_size: usize) {
        let depth = self.sizes.len() as u64;
        if depth >= self.tau_lo {
            self.record();
        }
        if depth == self.tau_hi {
            return;
        }
        let smallest = if depth == 0 { self.arms } else { 2 };
        for size in (smallest..=max_size).rev() {
            self.push_round(start, size);
            self.descend(start + size as u64, size);
            self.sizes.pop();
        }
    }
}

/// Enumerates every size sequence `K = |S_1| >= ... >= |S_tau| >= 2` for each
/// `tau` in `tau_lo..=tau_hi` and reports the minimum realization gap against
/// the horizon-optimal arm.
pub fn min_gap_bruteforce(env: &Environment, tau_lo: u64, tau_hi: u64) -> Result<GapReport> {
    let arms = env.arms();
    if arms > MAX_BRUTE_FORCE_ARMS || tau_hi > MAX_BRUTE_FORCE_TAU {
        return Err(Error::TooLarge(format!(
            "brute force needs K <= {MAX_BRUTE_FORCE_ARMS} and tau <= {MAX_BRUTE_FORCE_TAU}, got K = {arms}, tau = {tau_hi}"
        )));
    }
    search(env, tau_lo, tau_hi, true)
}

/// Gap along the realizations where no arm is ever eliminated, for
/// `tau` in `tau_lo..=tau_hi`. No size limit.
pub fn full_set_gap(env: &Environment, tau_lo: u64, tau_hi: u64) -> Result<GapReport> {
    search(env, tau_lo, tau_hi, false)
}

fn search(env: &Environment, tau_lo: u64, tau_hi: u64, enumerate: bool) -> Result<GapReport> {
    let arms = env.arms();
    if arms < 2 {
        return Err(Error::param("arms", "gap analysis needs K >= 2"));
    }
    if tau_lo == 0 || tau_lo > tau_hi {
        return Err(Error::param(
            "tau_range",
            format!("{tau_lo}..={tau_hi} must be a non-empty range starting at >= 1"),
        ));
    }
    let end = tau_hi
        .checked_mul(arms as u64)
        .filter(|&e| e <= env.horizon())
        .ok_or(Error::TimeOutOfRange {
            t: tau_hi.saturating_mul(arms as u64),
            horizon: env.horizon(),
        })?;
    let optimal = horizon_optimal_arm(env)?;
    let prefix: Vec<Vec<f64>> = (0..arms)
        .map(|k| {
            if k == optimal {
                Vec::new()
            } else {
                gap_prefix(env, k, optimal, end)
            }
        })
        .collect();
    let mut s = Search {
        arms,
        optimal,
        tau_lo,
        tau_hi,
        prefix: &prefix,
        sizes: Vec::new(),
        partial: vec![vec![0.0; arms]],
        best: vec![None; arms],
        checked: 0,
    };
    if enumerate {
        s.descend(1, arms);
    } else {
        for tau in 1..=tau_hi {
            s.push_round((tau - 1) * arms as u64 + 1, arms);
            if tau >= tau_lo {
                s.record();
            }
        }
    }

    let per_arm: Vec<Option<f64>> = s.best.iter().map(|b| b.as_ref().map(|(v, _)| *v)).collect();
    let (arm, (min_gap, sizes)) = s
        .best
        .iter()
        .enumerate()
        .filter_map(|(k, b)| b.as_ref().map(|b| (k, b)))
        .fold(
            None::<(usize, &(f64, Vec<usize>))>,
            |acc, (k, b)| match acc {
                Some((_, a)) if a.0 <= b.0 => acc,
                _ => Some((k, b)),
            },
        )
        .map(|(k, b)| (k, b.clone()))
        .expect("K >= 2 leaves a suboptimal arm");
    let satisfied = min_gap > 0.0;
    let witness = if satisfied {
        None
    } else {
        Some(GapWitness {
            arm,
            gap: min_gap,
            realization: RoundRobinRealization::from_sizes(&sizes)?,
        })
    };
    Ok(GapReport {
        optimal_arm: optimal,
        per_arm,
        min_gap,
        gap_positive: satisfied,
        witness,
        realizations_checked: s.checked,
    })
}
