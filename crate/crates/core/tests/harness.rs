use std::path::Path;

use nsbandit::agents::AgentConfig;
use nsbandit::harness::{
    complexity_csv, emit_results, parse_config, preset_config, regret_csv, run_experiment,
    Checkpoints, ExperimentConfig, PhiChoice, Preset, PresetOptions,
};
use nsbandit::{EnvironmentSpec, RewardLaw};

fn small_config() -> ExperimentConfig {
    ExperimentConfig {
        environment: EnvironmentSpec::Sinusoidal {
            arms: 4,
            gap: 0.1,
            optimal_arm: None,
        },
        reward_law: RewardLaw::Bernoulli,
        agents: vec![
            AgentConfig::Ser3 {
                delta: 0.05,
                epsilon: 0.0,
                tau_min: None,
            },
            AgentConfig::Ucb1 {},
        ],
        horizon: 5000,
        runs: 4,
        seed: 5,
        checkpoints: Checkpoints::Count(10),
        output_dir: None,
        jobs: None,
    }
}

#[test]
fn single_run_has_zero_std() {
    let mut cfg = small_config();
    cfg.runs = 1;
    let agg = run_experiment(&cfg, Some(1)).unwrap();
    for a in &agg.agents {
        assert!(a.std_regret.iter().all(|&s| s == 0.0));
        assert_eq!(a.std_sample_complexity, 0.0);
    }
}

#[test]
fn csv_layout() {
    let agg = run_experiment(&small_config(), Some(2)).unwrap();
    let csv = regret_csv(&agg);
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "algorithm,checkpoint_t,mean_regret,std_regret,runs"
    );
    assert_eq!(lines.count(), 2 * 10);
    assert!(csv.lines().nth(1).unwrap().starts_with("SER3,"));
    let cx = complexity_csv(&agg);
    assert_eq!(cx.lines().count(), 3);
    assert!(cx.starts_with("algorithm,mean_sample_complexity,std,runs\n"));
}

#[test]
fn seed_changes_results() {
    let a = run_experiment(&small_config(), None).unwrap();
    let mut cfg = small_config();
    cfg.seed = 6;
    let b = run_experiment(&cfg, None).unwrap();
    assert_ne!(regret_csv(&a), regret_csv(&b));
}

#[test]
fn emitted_manifest_replays() {
    let dir = tempfile::tempdir().unwrap();
    let agg = run_experiment(&small_config(), Some(3)).unwrap();
    emit_results(&agg, dir.path()).unwrap();
    let manifest = dir.path().join("manifest.json");
    let text = std::fs::read_to_string(&manifest).unwrap();
    let replay = parse_config(&text, &manifest).unwrap();
    let again = run_experiment(&replay, Some(1)).unwrap();
    assert_eq!(regret_csv(&agg), regret_csv(&again));
}

#[test]
fn config_errors_name_the_field() {
    let bad = r#"{"environment": {"kind": "stationary", "means": [0.5, 0.6]},
        "agents": [{"kind": "exp3", "gamma": 0.1}], "horizon": 10, "runs": 1, "seed": 0,
        "bogus": 1}"#;
    let err = parse_config(bad, Path::new("bad.json")).unwrap_err();
    assert!(err.is_config());
    assert!(err.to_string().contains("bogus"), "{err}");

    let dup = r#"{"environment": {"kind": "stationary", "means": [0.5, 0.6]},
        "agents": [{"kind": "ucb1"}, {"kind": "ucb1"}], "horizon": 10, "runs": 1, "seed": 0}"#;
    let err = parse_config(dup, Path::new("dup.json"))
        .and_then(|c| run_experiment(&c, None).map(|_| ()))
        .unwrap_err();
    assert!(err.is_config());

    let mut cfg = small_config();
    cfg.agents = vec![AgentConfig::Exp3 { gamma: 1.5 }];
    assert!(run_experiment(&cfg, None).unwrap_err().is_config());
}

#[test]
fn presets_are_valid() {
    for preset in Preset::ALL {
        let cfg = preset_config(
            preset,
            &PresetOptions {
                horizon: Some(2000),
                runs: Some(1),
                phi: PhiChoice::Intended,
                ..PresetOptions::default()
            },
        )
        .unwrap();
        let agg = run_experiment(&cfg, None).unwrap();
        assert_eq!(agg.agents.len(), cfg.agents.len());
    }
}
