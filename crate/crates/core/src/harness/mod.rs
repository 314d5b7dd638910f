//! Experiment orchestration: configs, seeded parallel runs, aggregation and
//! persisted results.

pub mod config;
pub mod experiment;
pub mod presets;
pub mod run;

pub use config::{load_config, log_spaced, parse_config, Checkpoints, ExperimentConfig, Manifest};
pub use experiment::{
    complexity_csv, emit_results, manifest_json, mean_std, regret_csv, run_environment,
    run_experiment, AgentSummary, AggregateResult, RunOutcome,
};
pub use presets::{preset_config, PhiChoice, Preset, PresetOptions};
pub use run::{play, run_single, AgentEvents, RunTrace};
