//! Non-stationary reward processes.
//!
//! An [`EnvironmentSpec`] is a declarative description of the mean sequences
//! `mu_k(t)`; [`Environment::build`] validates it over a horizon, resolves any
//! randomness (the optimal arm of the synthetic problems, switch times) from a
//! seed and materializes the optimal-policy schedule. After construction an
//! environment is immutable and `mean` is a pure function of `(arm, t)`.
//!
//! Time starts at `t = 1`. Arms are numbered from 0.

pub mod table;

use std::f64::consts::PI;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;

pub use table::{format_mean_table, parse_mean_table, read_mean_table, write_mean_table};

fn default_base() -> f64 {
    0.95
}

fn default_cap() -> f64 {
    0.45
}

/// Declarative environment description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EnvironmentSpec {
    /// Constant means.
    Stationary { means: Vec<f64> },
    /// `table[k][(t - 1) mod P]`.
    PeriodicTable { table: Vec<Vec<f64>> },
    /// Suboptimal arms follow `cos(2 pi t / K) / 5 + 0.5`; the optimal arm adds
    /// `gap`. The optimal arm is drawn from the seed when not given.
    Sinusoidal {
        arms: usize,
        gap: f64,
        #[serde(default)]
        optimal_arm: Option<usize>,
    },
    /// Suboptimal arms follow `base - min(cap, rate * t)`.
    DriftCap {
        arms: usize,
        gap: f64,
        #[serde(default = "default_base")]
        base: f64,
        #[serde(default = "default_cap")]
        cap: f64,
        rate: f64,
        #[serde(default)]
        optimal_arm: Option<usize>,
    },
    /// Suboptimal arms follow `base - min(cap, rate * (t mod period))`; the
    /// optimal arm changes at each step with probability `switch_prob`, to an
    /// arm drawn uniformly among the other `K - 1`.
    SwitchingDrift {
        arms: usize,
        gap: f64,
        switch_prob: f64,
        rate: f64,
        period: u64,
        #[serde(default = "default_base")]
        base: f64,
        #[serde(default = "default_cap")]
        cap: f64,
        /// Fixes the schedule independently of the run seed when present.
        #[serde(default)]
        switch_seed: Option<u64>,
    },
    /// A mean table read from disk (see [`table`]).
    FileBacked { path: PathBuf },
}

impl EnvironmentSpec {
    /// The two-arm period-2 table that defeats a fixed round-robin order.
    pub fn figure1() -> Self {
        EnvironmentSpec::PeriodicTable {
            table: vec![vec![0.6, 1.0], vec![0.4, 0.8]],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EnvironmentSpec::Stationary { .. } => "stationary",
            EnvironmentSpec::PeriodicTable { .. } => "periodic_table",
            EnvironmentSpec::Sinusoidal { .. } => "sinusoidal",
            EnvironmentSpec::DriftCap { .. } => "drift_cap",
            EnvironmentSpec::SwitchingDrift { .. } => "switching_drift",
            EnvironmentSpec::FileBacked { .. } => "file_backed",
        }
    }
}

/// How a reward is drawn given its mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RewardLaw {
    #[default]
    Bernoulli,
    Deterministic,
}

/// One entry `(k*_n, T_n)` of the optimal policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub arm: usize,
    pub start: u64,
}

#[derive(Debug, Clone)]
enum Baseline {
    Sinusoid {
        arms: usize,
    },
    Drift {
        base: f64,
        cap: f64,
        rate: f64,
        /// `None` for a global clock, `Some(P)` for `t mod P`.
        period: Option<u64>,
    },
}

impl Baseline {
    #[inline]
    fn at(&self, t: u64) -> f64 {
        match *self {
            Baseline::Sinusoid { arms } => (2.0 * PI * t as f64 / arms as f64).cos() / 5.0 + 0.5,
            Baseline::Drift {
                base,
                cap,
                rate,
                period,
            } => {
                let x = match period {
                    Some(p) => t % p,
                    None => t,
                };
                base - cap.min(rate * x as f64)
            }
        }
    }

    /// Number of leading steps after which the baseline repeats or freezes,
    /// so scanning them covers every value taken on the horizon.
    fn scan_len(&self, horizon: u64) -> u64 {
        match *self {
            Baseline::Sinusoid { arms } => horizon.min(arms as u64),
            Baseline::Drift {
                cap, rate, period, ..
            } => match period {
                Some(p) => horizon.min(p),
                None if rate > 0.0 => horizon.min((cap / rate).ceil() as u64 + 1),
                None => 1,
            },
        }
    }
}

#[derive(Debug, Clone)]
enum MeanModel {
    Table { rows: Vec<Vec<f64>>, period: usize },
    Shared { baseline: Baseline, gap: f64 },
}

/// A validated environment over `[1, horizon]`.
#[derive(Debug, Clone)]
pub struct Environment {
    spec: EnvironmentSpec,
    law: RewardLaw,
    horizon: u64,
    arms: usize,
    model: MeanModel,
    schedule: Vec<Segment>,
}

// Rounding slack allowed when `base + gap` lands a hair above 1.
const MEAN_SLACK: f64 = 1e-12;

fn check_mean(arm: usize, t: u64, value: f64) -> Result<()> {
    if (-MEAN_SLACK..=1.0 + MEAN_SLACK).contains(&value) {
        Ok(())
    } else {
        Err(Error::MeanOutOfRange { arm, t, value })
    }
}

fn check_gap(gap: f64) -> Result<()> {
    if gap.is_finite() && gap >= 0.0 {
        Ok(())
    } else {
        Err(Error::param(
            "gap",
            format!("{gap} must be finite and >= 0"),
        ))
    }
}

fn check_arms(arms: usize) -> Result<()> {
    if arms == 0 {
        Err(Error::param("arms", "need at least one arm"))
    } else {
        Ok(())
    }
}

fn pick_optimal(arms: usize, fixed: Option<usize>, rng: &mut RngStream) -> Result<usize> {
    match fixed {
        Some(k) if k < arms => Ok(k),
        Some(k) => Err(Error::ArmOutOfRange { arm: k, arms }),
        None => Ok(rng.below(arms as u64) as usize),
    }
}

/// Switch times of a per-step Bernoulli(`p`) process on `t = 2..=horizon`,
/// sampled through geometric waiting times.
fn draw_switches(
    arms: usize,
    p: f64,
    horizon: u64,
    first: usize,
    rng: &mut RngStream,
) -> Vec<Segment> {
    let mut schedule = vec![Segment {
        arm: first,
        start: 1,
    }];
    if p <= 0.0 || arms < 2 {
        return schedule;
    }
    let log_q = (-p).ln_1p();
    let mut t = 1u64;
    loop {
        let u = 1.0 - rng.uniform(); // (0, 1]
        let wait = if p >= 1.0 {
            1.0
        } else {
            (u.ln() / log_q).floor() + 1.0
        };
        if !wait.is_finite() || wait >= (horizon - t + 1) as f64 {
            break;
        }
        t += wait as u64;
        let current = schedule.last().unwrap().arm;
        let mut next = rng.below(arms as u64 - 1) as usize;
        if next >= current {
            next += 1;
        }
        schedule.push(Segment {
            arm: next,
            start: t,
        });
    }
    schedule
}

fn table_schedule(rows: &[Vec<f64>], period: usize, horizon: u64) -> Vec<Segment> {
    let column_best: Vec<usize> = (0..period)
        .map(|j| {
            let mut best = 0;
            for k in 1..rows.len() {
                if rows[k][j] > rows[best][j] {
                    best = k;
                }
            }
            best
        })
        .collect();
    let mut schedule = vec![Segment {
        arm: column_best[0],
        start: 1,
    }];
    if column_best.iter().all(|&k| k == column_best[0]) {
        return schedule;
    }
    for t in 2..=horizon {
        let k = column_best[((t - 1) % period as u64) as usize];
        if k != schedule.last().unwrap().arm {
            schedule.push(Segment { arm: k, start: t });
        }
    }
    schedule
}

impl Environment {
    /// Validates `spec` over `[1, horizon]` and materializes its schedule.
    /// `seed` drives every random choice of the environment (stream 0 of the
    /// seed unless the spec carries its own switch seed).
    pub fn build(spec: EnvironmentSpec, law: RewardLaw, horizon: u64, seed: u64) -> Result<Self> {
        Self::build_with_rng(spec, law, horizon, &mut RngStream::new(seed, 0))
    }

    pub fn build_with_rng(
        spec: EnvironmentSpec,
        law: RewardLaw,
        horizon: u64,
        rng: &mut RngStream,
    ) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::param("horizon", "must be at least 1"));
        }
        let (arms, model, schedule) = match &spec {
            EnvironmentSpec::Stationary { means } => {
                check_arms(means.len())?;
                let rows: Vec<Vec<f64>> = means.iter().map(|&m| vec![m]).collect();
                Self::table_parts(rows, horizon)?
            }
            EnvironmentSpec::PeriodicTable { table } => Self::table_parts(table.clone(), horizon)?,
            EnvironmentSpec::FileBacked { path } => {
                Self::table_parts(read_mean_table(path)?, horizon)?
            }
            &EnvironmentSpec::Sinusoidal {
                arms,
                gap,
                optimal_arm,
            } => {
                check_arms(arms)?;
                check_gap(gap)?;
                let first = pick_optimal(arms, optimal_arm, rng)?;
                let schedule = vec![Segment {
                    arm: first,
                    start: 1,
                }];
                (
                    arms,
                    Self::shared(Baseline::Sinusoid { arms }, gap),
                    schedule,
                )
            }
            &EnvironmentSpec::DriftCap {
                arms,
                gap,
                base,
                cap,
                rate,
                optimal_arm,
            } => {
                check_arms(arms)?;
                check_gap(gap)?;
                check_drift(cap, rate)?;
                let first = pick_optimal(arms, optimal_arm, rng)?;
                let baseline = Baseline::Drift {
                    base,
                    cap,
                    rate,
                    period: None,
                };
                let schedule = vec![Segment {
                    arm: first,
                    start: 1,
                }];
                (arms, Self::shared(baseline, gap), schedule)
            }
            &EnvironmentSpec::SwitchingDrift {
                arms,
                gap,
                switch_prob,
                rate,
                period,
                base,
                cap,
                switch_seed,
            } => {
                check_arms(arms)?;
                check_gap(gap)?;
                check_drift(cap, rate)?;
                if !(0.0..=1.0).contains(&switch_prob) {
                    return Err(Error::param(
                        "switch_prob",
                        format!("{switch_prob} not in [0, 1]"),
                    ));
                }
                if switch_prob > 0.0 && arms < 2 {
                    return Err(Error::param("arms", "switching needs at least two arms"));
                }
                if period == 0 {
                    return Err(Error::param("period", "must be at least 1"));
                }
                let mut own;
                let rng = match switch_seed {
                    Some(s) => {
                        own = RngStream::new(s, 0);
                        &mut own
                    }
                    None => rng,
                };
                let first = rng.below(arms as u64) as usize;
                let schedule = draw_switches(arms, switch_prob, horizon, first, rng);
                let baseline = Baseline::Drift {
                    base,
                    cap,
                    rate,
                    period: Some(period),
                };
                (arms, Self::shared(baseline, gap), schedule)
            }
        };
        let env = Environment {
            spec,
            law,
            horizon,
            arms,
            model,
            schedule,
        };
        env.validate_shared()?;
        Ok(env)
    }

    fn shared(baseline: Baseline, gap: f64) -> MeanModel {
        MeanModel::Shared { baseline, gap }
    }

    fn table_parts(rows: Vec<Vec<f64>>, horizon: u64) -> Result<(usize, MeanModel, Vec<Segment>)> {
        check_arms(rows.len())?;
        let period = rows[0].len();
        if period == 0 || rows.iter().any(|r| r.len() != period) {
            return Err(Error::param(
                "table",
                "rows must be non-empty and of equal length",
            ));
        }
        let scan = horizon.min(period as u64);
        for t in 1..=scan {
            for (k, row) in rows.iter().enumerate() {
                let v = row[(t - 1) as usize];
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::MeanOutOfRange {
                        arm: k,
                        t,
                        value: v,
                    });
                }
            }
        }
        let schedule = table_schedule(&rows, period, horizon);
        Ok((rows.len(), MeanModel::Table { rows, period }, schedule))
    }

    fn validate_shared(&self) -> Result<()> {
        let MeanModel::Shared { baseline, gap } = &self.model else {
            return Ok(());
        };
        // The baseline repeats (or freezes) after `scan_len` steps, so its
        // range over the horizon is known from that prefix.
        let (lo, hi) = (1..=baseline.scan_len(self.horizon))
            .map(|t| baseline.at(t))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), b| {
                (lo.min(b), hi.max(b))
            });
        if lo >= -MEAN_SLACK && hi + gap <= 1.0 + MEAN_SLACK {
            return Ok(());
        }
        for t in 1..=self.horizon {
            let b = baseline.at(t);
            let best = self.optimal_arm_at(t);
            if self.arms > 1 {
                check_mean(if best == 0 { 1 } else { 0 }, t, b)?;
            }
            check_mean(best, t, b + gap)?;
        }
        Ok(())
    }

    pub fn spec(&self) -> &EnvironmentSpec {
        &self.spec
    }

    pub fn law(&self) -> RewardLaw {
        self.law
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn arms(&self) -> usize {
        self.arms
    }

    /// Mean of `arm` at `t` without range checks.
    #[inline]
    pub fn mean(&self, arm: usize, t: u64) -> f64 {
        debug_assert!(arm < self.arms && t >= 1 && t <= self.horizon);
        match &self.model {
            MeanModel::Table { rows, period } => rows[arm][((t - 1) % *period as u64) as usize],
            MeanModel::Shared { baseline, gap } => {
                let b = baseline.at(t);
                if arm == self.optimal_arm_at(t) {
                    (b + gap).min(1.0)
                } else {
                    b.max(0.0)
                }
            }
        }
    }

    /// Mean of `arm` at `t`.
    pub fn mean_at(&self, arm: usize, t: u64) -> Result<f64> {
        self.check(arm, t)?;
        Ok(self.mean(arm, t))
    }

    fn check(&self, arm: usize, t: u64) -> Result<()> {
        if arm >= self.arms {
            return Err(Error::ArmOutOfRange {
                arm,
                arms: self.arms,
            });
        }
        if t == 0 || t > self.horizon {
            return Err(Error::TimeOutOfRange {
                t,
                horizon: self.horizon,
            });
        }
        Ok(())
    }

    /// Draws the reward of `arm` at `t`. Deterministic environments do not
    /// touch `rng`.
    #[inline]
    pub fn sample(&self, arm: usize, t: u64, rng: &mut RngStream) -> f64 {
        let mu = self.mean(arm, t);
        match self.law {
            RewardLaw::Deterministic => mu,
            RewardLaw::Bernoulli => {
                if rng.bernoulli(mu) {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    pub fn sample_reward(&self, arm: usize, t: u64, rng: &mut RngStream) -> Result<f64> {
        self.check(arm, t)?;
        Ok(self.sample(arm, t, rng))
    }

    /// The optimal policy `{(k*_1, 1), .., (k*_N, T_N)}`.
    pub fn optimal_policy(&self) -> &[Segment] {
        &self.schedule
    }

    /// Number of segments `N`.
    pub fn segments(&self) -> usize {
        self.schedule.len()
    }

    /// `k*(t)`.
    #[inline]
    pub fn optimal_arm_at(&self, t: u64) -> usize {
        if self.schedule.len() == 1 {
            return self.schedule[0].arm;
        }
        let idx = self.schedule.partition_point(|s| s.start <= t);
        self.schedule[idx - 1].arm
    }

    /// `sum_{t=1}^{T} mu_k(t)`, summed per distinct value where the model
    /// allows it.
    pub fn cumulative_mean(&self, arm: usize) -> Result<f64> {
        self.check(arm, 1)?;
        Ok(match &self.model {
            MeanModel::Table { rows, period } => {
                let p = *period as u64;
                let full = self.horizon / p;
                let rest = self.horizon % p;
                rows[arm]
                    .iter()
                    .enumerate()
                    .map(|(j, v)| v * (full + u64::from((j as u64) < rest)) as f64)
                    .sum()
            }
            MeanModel::Shared { .. } => {
                let mut sum = 0.0;
                let mut comp = 0.0;
                for t in 1..=self.horizon {
                    // Neumaier summation
                    let v = self.mean(arm, t);
                    let s = sum + v;
                    comp += if sum.abs() >= v.abs() {
                        (sum - s) + v
                    } else {
                        (v - s) + sum
                    };
                    sum = s;
                }
                sum + comp
            }
        })
    }

    /// `mu_k(t) - mu_k'(t)`.
    pub fn instantaneous_gap(&self, k: usize, k_prime: usize, t: u64) -> Result<f64> {
        Ok(self.mean_at(k, t)? - self.mean_at(k_prime, t)?)
    }
}

fn check_drift(cap: f64, rate: f64) -> Result<()> {
    if !(cap.is_finite() && cap >= 0.0) {
        return Err(Error::param("cap", format!("{cap} must be >= 0")));
    }
    if !(rate.is_finite() && rate >= 0.0) {
        return Err(Error::param("rate", format!("{rate} must be >= 0")));
    }
    Ok(())
}

/// Free-function form of [`Environment::build`].
pub fn build_environment(
    spec: EnvironmentSpec,
    law: RewardLaw,
    horizon: u64,
    seed: u64,
) -> Result<Environment> {
    Environment::build(spec, law, horizon, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::make_rng;

    fn fig1(law: RewardLaw) -> Environment {
        Environment::build(EnvironmentSpec::figure1(), law, 1000, 0).unwrap()
    }

    #[test]
    fn stationary_has_one_segment() {
        let env = Environment::build(
            EnvironmentSpec::Stationary {
                means: vec![0.9, 0.7],
            },
            RewardLaw::Bernoulli,
            100,
            1,
        )
        .unwrap();
        assert_eq!(env.optimal_policy(), &[Segment { arm: 0, start: 1 }]);
    }

    #[test]
    fn figure_one_means_and_schedule() {
        let env = fig1(RewardLaw::Deterministic);
        assert_eq!(env.optimal_policy(), &[Segment { arm: 0, start: 1 }]);
        assert_eq!(env.mean_at(0, 3).unwrap(), 0.6);
        let mut rng = make_rng(0, 0);
        assert_eq!(env.sample_reward(1, 2, &mut rng).unwrap(), 0.8);
        assert!((env.instantaneous_gap(0, 1, 4).unwrap() - 0.2).abs() < 1e-15);
        for t in 1..=1000 {
            assert!((env.instantaneous_gap(0, 1, t).unwrap() - 0.2).abs() < 1e-12);
        }
    }

    #[test]
    fn self_gap_is_zero() {
        let env = fig1(RewardLaw::Bernoulli);
        assert_eq!(env.instantaneous_gap(1, 1, 7).unwrap(), 0.0);
    }

    #[test]
    fn sinusoid_values() {
        let env = Environment::build(
            EnvironmentSpec::Sinusoidal {
                arms: 20,
                gap: 0.05,
                optimal_arm: Some(3),
            },
            RewardLaw::Bernoulli,
            1000,
            0,
        )
        .unwrap();
        assert!((env.mean_at(0, 20).unwrap() - 0.7).abs() < 1e-12);
        for t in [1, 5, 13, 999] {
            assert!((env.instantaneous_gap(3, 7, t).unwrap() - 0.05).abs() < 1e-12);
        }
    }

    #[test]
    fn drift_cap_saturates() {
        let env = Environment::build(
            EnvironmentSpec::DriftCap {
                arms: 20,
                gap: 0.05,
                base: 0.95,
                cap: 0.45,
                rate: 1e-7,
                optimal_arm: Some(0),
            },
            RewardLaw::Bernoulli,
            10_000_000,
            0,
        )
        .unwrap();
        assert!((env.mean_at(1, 4_500_000).unwrap() - 0.5).abs() < 1e-12);
        assert!((env.mean_at(1, 9_000_000).unwrap() - 0.5).abs() < 1e-12);
        assert!((env.mean_at(0, 1).unwrap() - (1.0 - 1e-7)).abs() < 1e-12);
    }

    #[test]
    fn sawtooth_uses_global_clock() {
        let env = Environment::build(
            EnvironmentSpec::SwitchingDrift {
                arms: 4,
                gap: 0.05,
                switch_prob: 0.0,
                rate: 1e-3,
                period: 100,
                base: 0.95,
                cap: 0.45,
                switch_seed: None,
            },
            RewardLaw::Bernoulli,
            1000,
            0,
        )
        .unwrap();
        let k = env.optimal_arm_at(1);
        let other = (k + 1) % 4;
        assert!((env.mean_at(other, 150).unwrap() - 0.9).abs() < 1e-12);
        assert!((env.mean_at(other, 200).unwrap() - 0.95).abs() < 1e-12);
        assert!((env.mean_at(k, 200).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn out_of_range_mean_names_first_offender() {
        let err = Environment::build(
            EnvironmentSpec::PeriodicTable {
                table: vec![vec![0.5, 0.5, 0.5], vec![0.2, 0.3, 1.3]],
            },
            RewardLaw::Bernoulli,
            10,
            0,
        )
        .unwrap_err();
        assert!(
            matches!(err, Error::MeanOutOfRange { arm: 1, t: 3, .. }),
            "{err}"
        );

        let err = Environment::build(
            EnvironmentSpec::Sinusoidal {
                arms: 4,
                gap: 0.5,
                optimal_arm: Some(2),
            },
            RewardLaw::Bernoulli,
            10,
            0,
        )
        .unwrap_err();
        // base peaks at t = 4 (cos(2 pi) = 1): 0.7 + 0.5 > 1
        assert!(
            matches!(err, Error::MeanOutOfRange { arm: 2, t: 4, .. }),
            "{err}"
        );
    }

    #[test]
    fn rejects_out_of_range_queries() {
        let env = fig1(RewardLaw::Bernoulli);
        assert!(matches!(
            env.mean_at(2, 1),
            Err(Error::ArmOutOfRange { .. })
        ));
        assert!(matches!(
            env.mean_at(0, 0),
            Err(Error::TimeOutOfRange { .. })
        ));
        assert!(matches!(
            env.mean_at(0, 1001),
            Err(Error::TimeOutOfRange { .. })
        ));
    }

    #[test]
    fn degenerate_bernoulli() {
        let env = Environment::build(
            EnvironmentSpec::Stationary {
                means: vec![0.0, 1.0],
            },
            RewardLaw::Bernoulli,
            10,
            0,
        )
        .unwrap();
        let mut rng = make_rng(9, 9);
        for _ in 0..1000 {
            assert_eq!(env.sample(0, 1, &mut rng), 0.0);
            assert_eq!(env.sample(1, 1, &mut rng), 1.0);
        }
    }

    #[test]
    fn bernoulli_mean_matches() {
        let env = Environment::build(
            EnvironmentSpec::Stationary { means: vec![0.75] },
            RewardLaw::Bernoulli,
            10,
            0,
        )
        .unwrap();
        let mut rng = make_rng(11, 0);
        let n = 100_000;
        let total: f64 = (0..n).map(|_| env.sample(0, 1, &mut rng)).sum();
        // 3 sigma = 3 * sqrt(0.75 * 0.25 / 1e5) ~ 0.0041
        assert!((total / n as f64 - 0.75).abs() < 0.005);
    }

    fn switching(seed: Option<u64>) -> EnvironmentSpec {
        EnvironmentSpec::SwitchingDrift {
            arms: 20,
            gap: 0.05,
            switch_prob: 1e-6,
            rate: 1e-7,
            period: 1_000_000,
            base: 0.95,
            cap: 0.45,
            switch_seed: seed,
        }
    }

    #[test]
    fn switching_schedule_is_deterministic_and_valid() {
        let a = Environment::build(switching(None), RewardLaw::Bernoulli, 10_000_000, 5).unwrap();
        let b = Environment::build(switching(None), RewardLaw::Bernoulli, 10_000_000, 5).unwrap();
        assert_eq!(a.optimal_policy(), b.optimal_policy());
        let s = a.optimal_policy();
        assert_eq!(s[0].start, 1);
        for w in s.windows(2) {
            assert!(w[0].start < w[1].start);
            assert_ne!(w[0].arm, w[1].arm);
        }
        let c =
            Environment::build(switching(Some(77)), RewardLaw::Bernoulli, 10_000_000, 1).unwrap();
        let d =
            Environment::build(switching(Some(77)), RewardLaw::Bernoulli, 10_000_000, 2).unwrap();
        assert_eq!(c.optimal_policy(), d.optimal_policy());
    }

    #[test]
    fn switching_expected_segment_count() {
        // 50 seeds, each schedule has Binomial(1e7 - 1, 1e-6) switches.
        let runs = 50;
        let total: usize = (0..runs)
            .map(|s| {
                Environment::build(switching(None), RewardLaw::Bernoulli, 10_000_000, s)
                    .unwrap()
                    .segments()
            })
            .sum();
        let mean = total as f64 / runs as f64;
        let lambda = (1e7 - 1.0) * 1e-6;
        let sigma = (lambda * (1.0 - 1e-6) / runs as f64).sqrt();
        assert!(
            (mean - (1.0 + lambda)).abs() < 3.0 * sigma,
            "mean segments {mean}"
        );
    }

    #[test]
    fn every_step_switch() {
        let spec = EnvironmentSpec::SwitchingDrift {
            arms: 3,
            gap: 0.05,
            switch_prob: 1.0,
            rate: 0.0,
            period: 10,
            base: 0.5,
            cap: 0.45,
            switch_seed: None,
        };
        let env = Environment::build(spec, RewardLaw::Bernoulli, 50, 3).unwrap();
        assert_eq!(env.segments(), 50);
        for (i, s) in env.optimal_policy().iter().enumerate() {
            assert_eq!(s.start, i as u64 + 1);
        }
    }

    #[test]
    fn one_switch_schedule() {
        let env = Environment::build(
            EnvironmentSpec::PeriodicTable {
                table: vec![
                    [vec![0.9; 499], vec![0.1; 501]].concat(),
                    [vec![0.2; 499], vec![0.8; 501]].concat(),
                ],
            },
            RewardLaw::Bernoulli,
            1000,
            0,
        )
        .unwrap();
        assert_eq!(
            env.optimal_policy(),
            &[Segment { arm: 0, start: 1 }, Segment { arm: 1, start: 500 }]
        );
    }

    #[test]
    fn segment_dominance_on_builtins() {
        let specs = vec![
            EnvironmentSpec::figure1(),
            EnvironmentSpec::Sinusoidal {
                arms: 6,
                gap: 0.05,
                optimal_arm: None,
            },
            EnvironmentSpec::DriftCap {
                arms: 5,
                gap: 0.05,
                base: 0.95,
                cap: 0.45,
                rate: 1e-3,
                optimal_arm: None,
            },
            EnvironmentSpec::SwitchingDrift {
                arms: 5,
                gap: 0.05,
                switch_prob: 1e-2,
                rate: 1e-3,
                period: 300,
                base: 0.95,
                cap: 0.45,
                switch_seed: None,
            },
        ];
        for spec in specs {
            let env = Environment::build(spec, RewardLaw::Bernoulli, 2000, 4).unwrap();
            for t in 1..=2000 {
                let best = env.optimal_arm_at(t);
                for k in 0..env.arms() {
                    let m = env.mean_at(k, t).unwrap();
                    assert!((0.0..=1.0).contains(&m));
                    if k != best {
                        assert!(env.mean_at(best, t).unwrap() > m);
                    }
                }
            }
        }
    }

    #[test]
    fn file_backed_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("means.txt");
        let rows = vec![vec![0.1, 0.123456789, 1.0], vec![0.3, 0.7, 0.0]];
        write_mean_table(&path, &rows).unwrap();
        let file = Environment::build(
            EnvironmentSpec::FileBacked { path },
            RewardLaw::Deterministic,
            30,
            0,
        )
        .unwrap();
        let direct = Environment::build(
            EnvironmentSpec::PeriodicTable { table: rows },
            RewardLaw::Deterministic,
            30,
            0,
        )
        .unwrap();
        for t in 1..=30 {
            for k in 0..2 {
                assert_eq!(file.mean(k, t), direct.mean(k, t));
            }
        }
    }

    #[test]
    fn spec_json_rejects_unknown_keys() {
        let ok: EnvironmentSpec =
            serde_json::from_str(r#"{"kind":"stationary","means":[0.9,0.7]}"#).unwrap();
        assert_eq!(
            ok,
            EnvironmentSpec::Stationary {
                means: vec![0.9, 0.7]
            }
        );
        assert!(serde_json::from_str::<EnvironmentSpec>(
            r#"{"kind":"stationary","means":[0.9],"extra":1}"#
        )
        .is_err());
    }
}
