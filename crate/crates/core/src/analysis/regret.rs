use crate::agents::PullRecord;
use crate::env::Environment;
use crate::error::{Error, Result};

/// Running pseudo-regret `sum_t mu_{k*(t)}(t) - mu_{k_t}(t)` against the
/// environment's optimal policy.
#[derive(Debug, Clone)]
pub struct RegretMeter<'a> {
    env: &'a Environment,
    segment: usize,
    total: f64,
}

impl<'a> RegretMeter<'a> {
    pub fn new(env: &'a Environment) -> Self {
        Self {
            env,
            segment: 0,
            total: 0.0,
        }
    }

    /// Adds step `t` (steps must arrive in increasing order) and returns the
    /// cumulative regret so far.
    #[inline]
    pub fn push(&mut self, t: u64, arm: usize) -> f64 {
        let schedule = self.env.optimal_policy();
        while self.segment + 1 < schedule.len() && schedule[self.segment + 1].start <= t {
            self.segment += 1;
        }
        let best = schedule[self.segment].arm;
        if best != arm {
            self.total += self.env.mean(best, t) - self.env.mean(arm, t);
        }
        self.total
    }

    pub fn total(&self) -> f64 {
        self.total
    }
}

/// Cumulative pseudo-regret after each record.
pub fn pseudo_regret(trace: &[PullRecord], env: &Environment) -> Result<Vec<f64>> {
    let mut meter = RegretMeter::new(env);
    let mut prev = 0;
    trace
        .iter()
        .map(|r| {
            if r.arm >= env.arms() {
                return Err(Error::ArmOutOfRange {
                    arm: r.arm,
                    arms: env.arms(),
                });
            }
            if r.t <= prev || r.t > env.horizon() {
                return Err(Error::TimeOutOfRange {
                    t: r.t,
                    horizon: env.horizon(),
                });
            }
            prev = r.t;
            Ok(meter.push(r.t, r.arm))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{EnvironmentSpec, RewardLaw};

    fn rec(t: u64, arm: usize) -> PullRecord {
        PullRecord {
            t,
            arm,
            reward: 0.0,
            sampling: false,
            reset: false,
            recommended: arm,
        }
    }

    fn stationary() -> Environment {
        Environment::build(
            EnvironmentSpec::Stationary {
                means: vec![0.9, 0.7],
            },
            RewardLaw::Bernoulli,
            10,
            0,
        )
        .unwrap()
    }

    #[test]
    fn optimal_play_has_no_regret() {
        let env = stationary();
        let trace: Vec<_> = (1..=10).map(|t| rec(t, 0)).collect();
        assert!(pseudo_regret(&trace, &env)
            .unwrap()
            .iter()
            .all(|&r| r == 0.0));
    }

    #[test]
    fn arithmetic_example() {
        let env = stationary();
        let trace: Vec<_> = [1, 1, 1, 0, 0]
            .iter()
            .enumerate()
            .map(|(i, &a)| rec(i as u64 + 1, a))
            .collect();
        let curve = pseudo_regret(&trace, &env).unwrap();
        let expected = [0.2, 0.4, 0.6, 0.6, 0.6];
        for (c, e) in curve.iter().zip(expected) {
            assert!((c - e).abs() < 1e-12);
        }
    }

    #[test]
    fn figure_one_constant_gap() {
        let horizon = 1000;
        let env = Environment::build(EnvironmentSpec::figure1(), RewardLaw::Bernoulli, horizon, 0)
            .unwrap();
        let trace: Vec<_> = (1..=horizon).map(|t| rec(t, 1)).collect();
        let curve = pseudo_regret(&trace, &env).unwrap();
        // brute force: mean difference summed column by column
        let table = [[0.6, 1.0], [0.4, 0.8]];
        let brute: f64 = (1..=horizon)
            .map(|t| {
                let col = ((t - 1) % 2) as usize;
                table[0][col] - table[1][col]
            })
            .sum();
        assert!((curve.last().unwrap() - brute).abs() < 1e-9);
        assert!((brute - 0.2 * horizon as f64).abs() < 1e-9);
    }

    #[test]
    fn rejects_mismatched_trace() {
        let env = stationary();
        assert!(pseudo_regret(&[rec(1, 5)], &env).is_err());
        assert!(pseudo_regret(&[rec(11, 0)], &env).is_err());
    }
}
