//! One-command reproductions of the four synthetic benchmarks.
//!
//! Defaults are `T = 10^6`, `R = 10`; `full_scale` selects `T = 10^7`,
//! `R = 50`. Horizon-dependent constants are scaled by `f = T / 10^7`.

use serde::{Deserialize, Serialize};

use crate::agents::AgentConfig;
use crate::analysis::bounds::phi_regret;
use crate::env::{EnvironmentSpec, RewardLaw};
use crate::error::{Error, Result};

use super::config::{Checkpoints, ExperimentConfig};

pub const FULL_HORIZON: u64 = 10_000_000;
pub const FULL_RUNS: u64 = 50;
pub const SCALED_HORIZON: u64 = 1_000_000;
pub const SCALED_RUNS: u64 = 10;

pub const ARMS: usize = 20;
pub const GAP: f64 = 0.05;
pub const DELTA: f64 = 0.05;
pub const GAMMA: f64 = 0.05;
pub const EXP3S_ALPHA: f64 = 1e-5;

/// Values of the full-scale problems at `T = 10^7`.
const DRIFT_RATE: f64 = 1e-7;
const SWITCH_PROB: f64 = 1e-6;
const SAWTOOTH_PERIOD: f64 = 1e6;
const SW_WINDOW: f64 = 1e5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Figure1,
    Problem1,
    Problem2,
    Problem3,
}

impl Preset {
    pub const ALL: [Preset; 4] = [
        Preset::Figure1,
        Preset::Problem1,
        Preset::Problem2,
        Preset::Problem3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Figure1 => "figure1",
            Preset::Problem1 => "problem1",
            Preset::Problem2 => "problem2",
            Preset::Problem3 => "problem3",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| Error::config("preset", format!("unknown preset `{name}`")))
    }
}

/// SER4's reset probability for `problem3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiChoice {
    /// `5^-5`.
    Printed,
    /// `5 * 10^-5`.
    Intended,
    /// `sqrt(N / (T K ln(KT)))` with `N = 1 + switch_prob (T - 1)` expected
    /// segments.
    RegretTuned,
    Value(f64),
}

impl PhiChoice {
    pub const PRINTED: f64 = 3.2e-4;
    pub const INTENDED: f64 = 5e-5;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresetOptions {
    pub horizon: Option<u64>,
    pub runs: Option<u64>,
    pub seed: u64,
    pub full_scale: bool,
    pub phi: PhiChoice,
    pub checkpoints: Checkpoints,
}

impl Default for PresetOptions {
    fn default() -> Self {
        Self {
            horizon: None,
            runs: None,
            seed: 0,
            full_scale: false,
            phi: PhiChoice::Printed,
            checkpoints: Checkpoints::default(),
        }
    }
}

fn elimination(delta: f64) -> (f64, f64, Option<u64>) {
    (delta, 0.0, None)
}

fn se() -> AgentConfig {
    let (delta, epsilon, tau_min) = elimination(DELTA);
    AgentConfig::Se {
        delta,
        epsilon,
        tau_min,
    }
}

fn ser3() -> AgentConfig {
    let (delta, epsilon, tau_min) = elimination(DELTA);
    AgentConfig::Ser3 {
        delta,
        epsilon,
        tau_min,
    }
}

/// `switch_prob`, `rate` and `period` of problem 3 at horizon `T`.
pub fn problem3_scaling(horizon: u64) -> (f64, f64, u64) {
    let f = horizon as f64 / FULL_HORIZON as f64;
    let period = (SAWTOOTH_PERIOD * f).round().max(1.0) as u64;
    ((SWITCH_PROB / f).min(1.0), DRIFT_RATE / f, period)
}

pub fn preset_config(preset: Preset, opts: &PresetOptions) -> Result<ExperimentConfig> {
    let (default_t, default_r) = match (preset, opts.full_scale) {
        (_, true) => (FULL_HORIZON, FULL_RUNS),
        (Preset::Figure1, false) => (100_000, 100),
        (_, false) => (SCALED_HORIZON, SCALED_RUNS),
    };
    let horizon = opts.horizon.unwrap_or(default_t);
    let runs = opts.runs.unwrap_or(default_r);
    if horizon == 0 {
        return Err(Error::config("horizon", "must be >= 1"));
    }
    let f = horizon as f64 / FULL_HORIZON as f64;

    let (environment, agents) = match preset {
        Preset::Figure1 => (EnvironmentSpec::figure1(), vec![se(), ser3()]),
        Preset::Problem1 => (
            EnvironmentSpec::Sinusoidal {
                arms: ARMS,
                gap: GAP,
                optimal_arm: None,
            },
            vec![
                se(),
                ser3(),
                AgentConfig::Ucb1 {},
                AgentConfig::Exp3 { gamma: GAMMA },
            ],
        ),
        Preset::Problem2 => (
            EnvironmentSpec::DriftCap {
                arms: ARMS,
                gap: GAP,
                base: 0.95,
                cap: 0.45,
                rate: DRIFT_RATE / f,
                optimal_arm: None,
            },
            vec![
                se(),
                ser3(),
                AgentConfig::Ucb1 {},
                AgentConfig::Exp3 { gamma: GAMMA },
            ],
        ),
        Preset::Problem3 => {
            let (switch_prob, rate, period) = problem3_scaling(horizon);
            let phi = match opts.phi {
                PhiChoice::Printed => PhiChoice::PRINTED,
                PhiChoice::Intended => PhiChoice::INTENDED,
                PhiChoice::RegretTuned => {
                    let segments = 1.0 + switch_prob * (horizon - 1) as f64;
                    phi_regret(ARMS, horizon as f64, segments)
                }
                PhiChoice::Value(v) => v,
            };
            let (delta, epsilon, tau_min) = elimination(DELTA);
            (
                EnvironmentSpec::SwitchingDrift {
                    arms: ARMS,
                    gap: GAP,
                    switch_prob,
                    rate,
                    period,
                    base: 0.95,
                    cap: 0.45,
                    switch_seed: None,
                },
                vec![
                    AgentConfig::Ser4 {
                        delta,
                        epsilon,
                        tau_min,
                        phi,
                    },
                    AgentConfig::SwUcb {
                        window: (SW_WINDOW * f).round().max(1.0) as usize,
                        xi: 0.6,
                    },
                    AgentConfig::Exp3s {
                        gamma: GAMMA,
                        alpha: EXP3S_ALPHA,
                    },
                ],
            )
        }
    };
    let config = ExperimentConfig {
        environment,
        reward_law: RewardLaw::Bernoulli,
        agents,
        horizon,
        runs,
        seed: opts.seed,
        checkpoints: opts.checkpoints.clone(),
        output_dir: None,
        jobs: None,
    };
    config.validate()?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled_problem3() {
        let (p, rate, period) = problem3_scaling(1_000_000);
        assert!((p - 1e-5).abs() < 1e-18);
        assert!((rate - 1e-6).abs() < 1e-18);
        assert_eq!(period, 100_000);
        let (p, rate, period) = problem3_scaling(FULL_HORIZON);
        assert_eq!((p, rate, period), (1e-6, 1e-7, 1_000_000));
    }

    #[test]
    fn presets_validate() {
        for p in Preset::ALL {
            let c = preset_config(p, &PresetOptions::default()).unwrap();
            assert!(c.runs >= 1);
            assert_eq!(Preset::parse(p.name()).unwrap(), p);
        }
        assert!(Preset::parse("problem9").is_err());
    }

    #[test]
    fn phi_choices() {
        let phi_of = |choice| {
            let c = preset_config(
                Preset::Problem3,
                &PresetOptions {
                    phi: choice,
                    ..PresetOptions::default()
                },
            )
            .unwrap();
            match c.agents[0] {
                AgentConfig::Ser4 { phi, .. } => phi,
                _ => unreachable!(),
            }
        };
        assert_eq!(phi_of(PhiChoice::Printed), 5f64.powi(-5));
        assert_eq!(phi_of(PhiChoice::Intended), 5e-5);
        let tuned = phi_of(PhiChoice::RegretTuned);
        let expected = (10.99999 / (1e6 * 20.0 * (2e7f64).ln())).sqrt();
        assert!((tuned / expected - 1.0).abs() < 1e-9, "{tuned}");
    }
}
