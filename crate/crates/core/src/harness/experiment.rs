use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{ComplexityMeter, RegretMeter};
use crate::env::{Environment, EnvironmentSpec};
use crate::error::{Error, Result};
use crate::rng::{derive_stream, RngStream, StreamPurpose};

use super::config::{ExperimentConfig, Manifest};
use super::run::{play, AgentEvents};

/// What one `(agent, run)` unit leaves behind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOutcome {
    pub run: u64,
    /// Cumulative pseudo-regret at each checkpoint.
    pub regret: Vec<f64>,
    pub sample_complexity: u64,
    /// Optimal arm of the last segment.
    pub final_optimal: usize,
    pub events: AgentEvents,
}

impl RunOutcome {
    pub fn final_regret(&self) -> f64 {
        *self.regret.last().unwrap_or(&0.0)
    }

    pub fn correct(&self) -> bool {
        self.events.final_recommendation == self.final_optimal
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentSummary {
    pub algorithm: String,
    pub runs: u64,
    pub mean_regret: Vec<f64>,
    pub std_regret: Vec<f64>,
    pub mean_sample_complexity: f64,
    pub std_sample_complexity: f64,
    /// Run outcomes in run-index order.
    pub outcomes: Vec<RunOutcome>,
}

impl AgentSummary {
    pub fn final_mean_regret(&self) -> f64 {
        *self.mean_regret.last().unwrap_or(&0.0)
    }

    pub fn final_regrets(&self) -> Vec<f64> {
        self.outcomes.iter().map(RunOutcome::final_regret).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateResult {
    /// The resolved configuration the results came from.
    pub config: ExperimentConfig,
    pub checkpoints: Vec<u64>,
    /// In config order.
    pub agents: Vec<AgentSummary>,
}

impl AggregateResult {
    pub fn agent(&self, algorithm: &str) -> Option<&AgentSummary> {
        self.agents.iter().find(|a| a.algorithm == algorithm)
    }
}

/// Neumaier-compensated sum.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
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

/// Mean and population standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = compensated_sum(values.iter().copied()) / n;
    let var = compensated_sum(values.iter().map(|v| (v - mean) * (v - mean))) / n;
    (mean, var.sqrt())
}

/// True when building the environment consumes randomness.
fn seed_dependent(spec: &EnvironmentSpec) -> bool {
    match spec {
        EnvironmentSpec::Sinusoidal { optimal_arm, .. }
        | EnvironmentSpec::DriftCap { optimal_arm, .. } => optimal_arm.is_none(),
        EnvironmentSpec::SwitchingDrift { switch_seed, .. } => switch_seed.is_none(),
        _ => false,
    }
}

/// Environment of run `run`; shared by every agent of that run.
pub fn run_environment(config: &ExperimentConfig, run: u64) -> Result<Environment> {
    let mut rng = RngStream::new(
        config.seed,
        derive_stream(0, run, StreamPurpose::Environment),
    );
    Environment::build_with_rng(
        config.environment.clone(),
        config.reward_law,
        config.horizon,
        &mut rng,
    )
}

fn run_unit(
    config: &ExperimentConfig,
    env: &Environment,
    agent: usize,
    run: u64,
    checkpoints: &[u64],
) -> Result<RunOutcome> {
    let a = agent as u64;
    let mut reward_rng = RngStream::new(config.seed, derive_stream(a, run, StreamPurpose::Reward));
    let mut agent_rng = RngStream::new(config.seed, derive_stream(a, run, StreamPurpose::Agent));
    let mut regret = RegretMeter::new(env);
    let mut complexity = ComplexityMeter::new(env.optimal_policy());
    let mut curve = Vec::with_capacity(checkpoints.len());
    let mut next = 0;
    let events = play(
        env,
        &config.agents[agent],
        config.horizon,
        &mut reward_rng,
        &mut agent_rng,
        |r| {
            let total = regret.push(r.t, r.arm);
            complexity.push(r.t, r.sampling, r.recommended);
            if next < checkpoints.len() && checkpoints[next] == r.t {
                curve.push(total);
                next += 1;
            }
        },
    )?;
    Ok(RunOutcome {
        run,
        regret: curve,
        sample_complexity: complexity.finish().total,
        final_optimal: env.optimal_policy().last().expect("non-empty policy").arm,
        events,
    })
}

/// Runs every `(agent, run)` pair on up to `jobs` threads (all cores when
/// `None`) and aggregates in index order, so the result does not depend on
/// scheduling.
pub fn run_experiment(config: &ExperimentConfig, jobs: Option<usize>) -> Result<AggregateResult> {
    config.validate()?;
    let jobs = jobs.or(config.jobs);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Contract(format!("thread pool: {e}")))?;

    pool.install(|| {
        let first = run_environment(config, 0)?;
        let resolved = config.resolved(first.arms())?;
        let checkpoints = resolved.checkpoints.resolve(config.horizon)?;
        let envs: Vec<Environment> = if seed_dependent(&config.environment) {
            std::iter::once(Ok(first))
                .chain(
                    (1..config.runs)
                        .into_par_iter()
                        .map(|r| run_environment(config, r))
                        .collect::<Vec<_>>(),
                )
                .collect::<Result<_>>()?
        } else {
            vec![first]
        };
        let env_of = |run: u64| &envs[if envs.len() == 1 { 0 } else { run as usize }];

        let units: Vec<(usize, u64)> = (0..resolved.agents.len())
            .flat_map(|a| (0..config.runs).map(move |r| (a, r)))
            .collect();
        let outcomes: Vec<RunOutcome> = units
            .par_iter()
            .map(|&(a, r)| run_unit(&resolved, env_of(r), a, r, &checkpoints))
            .collect::<Result<_>>()?;

        let runs = config.runs as usize;
        let agents = resolved
            .agents
            .iter()
            .zip(outcomes.chunks(runs.max(1)))
            .map(|(cfg, chunk)| summarize(cfg.name(), chunk, checkpoints.len()))
            .collect();
        Ok(AggregateResult {
            config: resolved,
            checkpoints,
            agents,
        })
    })
}

fn summarize(name: &str, outcomes: &[RunOutcome], points: usize) -> AgentSummary {
    let (mean_regret, std_regret) = (0..points)
        .map(|i| {
            let column: Vec<f64> = outcomes.iter().map(|o| o.regret[i]).collect();
            mean_std(&column)
        })
        .unzip();
    let complexity: Vec<f64> = outcomes
        .iter()
        .map(|o| o.sample_complexity as f64)
        .collect();
    let (mean_sample_complexity, std_sample_complexity) = mean_std(&complexity);
    AgentSummary {
        algorithm: name.to_string(),
        runs: outcomes.len() as u64,
        mean_regret,
        std_regret,
        mean_sample_complexity,
        std_sample_complexity,
        outcomes: outcomes.to_vec(),
    }
}

pub fn regret_csv(agg: &AggregateResult) -> String {
    let mut out = String::from("algorithm,checkpoint_t,mean_regret,std_regret,runs\n");
    let mut agents: Vec<&AgentSummary> = agg.agents.iter().collect();
    agents.sort_by(|a, b| a.algorithm.cmp(&b.algorithm));
    for a in agents {
        for (i, t) in agg.checkpoints.iter().enumerate() {
            writeln!(
                out,
                "{},{},{},{},{}",
                a.algorithm, t, a.mean_regret[i], a.std_regret[i], a.runs
            )
            .unwrap();
        }
    }
    out
}

pub fn complexity_csv(agg: &AggregateResult) -> String {
    let mut out = String::from("algorithm,mean_sample_complexity,std,runs\n");
    let mut agents: Vec<&AgentSummary> = agg.agents.iter().collect();
    agents.sort_by(|a, b| a.algorithm.cmp(&b.algorithm));
    for a in agents {
        writeln!(
            out,
            "{},{},{},{}",
            a.algorithm, a.mean_sample_complexity, a.std_sample_complexity, a.runs
        )
        .unwrap();
    }
    out
}

pub fn manifest_json(agg: &AggregateResult) -> String {
    let mut text = serde_json::to_string_pretty(&Manifest::new(agg.config.clone()))
        .expect("config serializes");
    text.push('\n');
    text
}

/// Writes `regret.csv`, `complexity.csv` and `manifest.json` into `out_dir`,
/// creating it if needed.
pub fn emit_results(agg: &AggregateResult, out_dir: &Path) -> Result<()> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    for (name, body) in [
        ("regret.csv", regret_csv(agg)),
        ("complexity.csv", complexity_csv(agg)),
        ("manifest.json", manifest_json(agg)),
    ] {
        let path = out_dir.join(name);
        std::fs::write(&path, body).map_err(|e| Error::io(path, e))?;
    }
    Ok(())
}
