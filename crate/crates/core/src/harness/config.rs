use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::agents::{default_tau_min, AgentConfig};
use crate::env::{EnvironmentSpec, RewardLaw};
use crate::error::{Error, Result};

pub const DEFAULT_CHECKPOINTS: usize = 100;

/// Either a number of log-spaced points ending at `T` or an explicit list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Checkpoints {
    Count(usize),
    List(Vec<u64>),
}

impl Default for Checkpoints {
    fn default() -> Self {
        Checkpoints::Count(DEFAULT_CHECKPOINTS)
    }
}

impl Checkpoints {
    pub fn resolve(&self, horizon: u64) -> Result<Vec<u64>> {
        match self {
            Checkpoints::Count(0) => Err(Error::config("checkpoints", "count must be >= 1")),
            Checkpoints::Count(n) => Ok(log_spaced(horizon, *n)),
            Checkpoints::List(list) => {
                if list.is_empty() {
                    return Err(Error::config("checkpoints", "list is empty"));
                }
                if list[0] == 0 || list.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::config(
                        "checkpoints",
                        "must be strictly increasing and >= 1",
                    ));
                }
                if *list.last().unwrap() > horizon {
                    return Err(Error::config(
                        "checkpoints",
                        format!("last checkpoint exceeds horizon {horizon}"),
                    ));
                }
                Ok(list.clone())
            }
        }
    }
}

/// `min(n, T)` strictly increasing steps, roughly uniform in `ln t`, the last
/// one equal to `T`.
pub fn log_spaced(horizon: u64, n: usize) -> Vec<u64> {
    if horizon == 0 {
        return Vec::new();
    }
    if (n as u64) >= horizon {
        return (1..=horizon).collect();
    }
    if n == 1 {
        return vec![horizon];
    }
    let ln_t = (horizon as f64).ln();
    let mut out: Vec<u64> = Vec::with_capacity(n);
    for i in 0..n {
        let raw = (ln_t * i as f64 / (n - 1) as f64).exp().round() as u64;
        // leave room for the remaining points below T
        let ceiling = horizon - (n - 1 - i) as u64;
        let floor = out.last().map_or(1, |&p| p + 1);
        out.push(raw.clamp(floor, ceiling));
    }
    out
}

/// A complete experiment description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub environment: EnvironmentSpec,
    #[serde(default)]
    pub reward_law: RewardLaw,
    pub agents: Vec<AgentConfig>,
    pub horizon: u64,
    pub runs: u64,
    pub seed: u64,
    #[serde(default)]
    pub checkpoints: Checkpoints,
    /// Default output directory; the CLI flag wins.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    /// Worker threads; `None` uses every core. Never affects results.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::config("horizon", "must be >= 1"));
        }
        if self.runs == 0 {
            return Err(Error::config("runs", "must be >= 1"));
        }
        if self.jobs == Some(0) {
            return Err(Error::config("jobs", "must be >= 1"));
        }
        self.checkpoints.resolve(self.horizon)?;
        let mut names = BTreeSet::new();
        for (i, agent) in self.agents.iter().enumerate() {
            agent
                .validate()
                .map_err(|e| Error::config(format!("agents[{i}]"), e.to_string()))?;
            if !names.insert(agent.name()) {
                return Err(Error::config(
                    format!("agents[{i}]"),
                    format!("duplicate algorithm {}", agent.name()),
                ));
            }
        }
        Ok(())
    }

    /// Copy with every default made explicit and execution-only settings
    /// dropped; what a manifest stores.
    pub fn resolved(&self, arms: usize) -> Result<Self> {
        let checkpoints = Checkpoints::List(self.checkpoints.resolve(self.horizon)?);
        let agents = self
            .agents
            .iter()
            .map(|a| {
                let mut a = a.clone();
                match &mut a {
                    AgentConfig::Ser3 { delta, tau_min, .. }
                    | AgentConfig::Ser4 { delta, tau_min, .. }
                    | AgentConfig::Se { delta, tau_min, .. } => {
                        tau_min.get_or_insert_with(|| default_tau_min(arms, *delta));
                    }
                    _ => {}
                }
                a
            })
            .collect();
        Ok(Self {
            agents,
            checkpoints,
            output_dir: None,
            jobs: None,
            ..self.clone()
        })
    }
}

/// What `manifest.json` holds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub artifact: String,
    pub artifact_version: String,
    pub seed: u64,
    pub config: ExperimentConfig,
}

impl Manifest {
    pub fn new(config: ExperimentConfig) -> Self {
        Self {
            artifact: env!("CARGO_PKG_NAME").to_string(),
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            seed: config.seed,
            config,
        }
    }
}

fn from_value<T: DeserializeOwned>(value: serde_json::Value) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        Error::config(
            if path == "." { "<root>".into() } else { path },
            e.into_inner().to_string(),
        )
    })
}

pub fn parse_config(text: &str, origin: &Path) -> Result<ExperimentConfig> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|source| Error::Json {
        context: origin.display().to_string(),
        source,
    })?;
    let config = if value.get("artifact_version").is_some() {
        let manifest: Manifest = from_value(value)?;
        if manifest.seed != manifest.config.seed {
            return Err(Error::config(
                "seed",
                "manifest seed disagrees with its config",
            ));
        }
        manifest.config
    } else {
        from_value(value)?
    };
    config.validate()?;
    Ok(config)
}

/// Reads an experiment config or a `manifest.json` written by a previous run.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text, path)
}
