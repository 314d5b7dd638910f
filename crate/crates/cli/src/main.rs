use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nsbandit::analysis::{bound_calculators, full_set_gap, min_gap_bruteforce, BoundInputs};
use nsbandit::env::table::read_mean_table;
use nsbandit::harness::{
    emit_results, load_config, preset_config, run_experiment, AggregateResult, Checkpoints,
    PhiChoice, Preset, PresetOptions,
};
use nsbandit::{Environment, EnvironmentSpec, Error, RewardLaw};

#[derive(Parser)]
#[command(name = "nsbandit", version, about = "Non-stationary bandit laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment from a JSON config or a previous manifest.json.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
        /// Overrides the config's master seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run one of the built-in benchmark presets.
    Reproduce {
        #[arg(value_parser = ["figure1", "problem1", "problem2", "problem3"])]
        preset: String,
        #[arg(long)]
        horizon: Option<u64>,
        #[arg(long)]
        runs: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// T = 10^7 and 50 runs.
        #[arg(long)]
        full_scale: bool,
        /// SER4 reset probability: printed (5^-5), intended (5e-5),
        /// regret-tuned, or a number.
        #[arg(long, default_value = "printed")]
        phi: String,
        /// Number of log-spaced checkpoints.
        #[arg(long, default_value_t = 100)]
        checkpoints: usize,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Realization gaps of a mean table, as JSON.
    Gap {
        #[arg(long)]
        env: PathBuf,
        #[arg(long)]
        tau_max: u64,
        #[arg(long, default_value_t = 1)]
        tau_min: u64,
        /// Enumerate every elimination pattern (K <= 6, tau <= 8); otherwise
        /// only the pattern where no arm is eliminated is evaluated.
        #[arg(long)]
        brute_force: bool,
        /// Horizon for the optimal-arm sum; defaults to K * tau_max.
        #[arg(long)]
        horizon: Option<u64>,
    },
    /// Closed-form guarantees, as JSON.
    Bounds {
        #[arg(long = "K")]
        arms: usize,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        gap: f64,
        #[arg(long = "T")]
        horizon: Option<u64>,
        #[arg(long = "N")]
        segments: Option<u64>,
        #[arg(long)]
        phi: Option<f64>,
    },
    /// Available agents and environments with their parameters.
    List,
}

fn parse_phi(s: &str) -> Result<PhiChoice, Error> {
    match s {
        "printed" => Ok(PhiChoice::Printed),
        "intended" => Ok(PhiChoice::Intended),
        "regret-tuned" => Ok(PhiChoice::RegretTuned),
        other => other
            .parse::<f64>()
            .map(PhiChoice::Value)
            .map_err(|_| Error::Config {
                field: "phi".into(),
                reason: format!("`{other}` is not printed, intended, regret-tuned or a number"),
            }),
    }
}

fn print_summary(agg: &AggregateResult) {
    println!(
        "{:<8} {:>14} {:>12} {:>16} {:>8}",
        "agent", "final_regret", "std", "sample_cplx", "correct"
    );
    for a in &agg.agents {
        let correct = a.outcomes.iter().filter(|o| o.correct()).count();
        println!(
            "{:<8} {:>14.1} {:>12.1} {:>16.1} {:>5}/{}",
            a.algorithm,
            a.final_mean_regret(),
            a.std_regret.last().copied().unwrap_or(0.0),
            a.mean_sample_complexity,
            correct,
            a.runs
        );
    }
}

fn json(value: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(value).expect("report serializes")
}

const LISTING: &str = r#"{
  "agents": {
    "se": {"delta": "(0, 1)", "epsilon": "[0, 1), default 0", "tau_min": ">= 1, default ceil(ln(K/delta))"},
    "ser3": {"delta": "(0, 1)", "epsilon": "[0, 1), default 0", "tau_min": ">= 1, default ceil(ln(K/delta))"},
    "ser4": {"delta": "(0, 1)", "epsilon": "[0, 1), default 0", "tau_min": ">= 1, default ceil(ln(K/delta))", "phi": "[0, 1]"},
    "ucb1": {},
    "exp3": {"gamma": "(0, 1]"},
    "exp3s": {"gamma": "(0, 1]", "alpha": ">= 0"},
    "sw_ucb": {"window": ">= 1", "xi": "> 0, default 0.6"}
  },
  "environments": {
    "stationary": {"means": "[mu_0, ..., mu_{K-1}] in [0, 1]"},
    "periodic_table": {"table": "K rows of P means; mu_k(t) = table[k][(t-1) mod P]"},
    "file_backed": {"path": "mean table file: header `K P`, then K rows of P values"},
    "sinusoidal": {"arms": ">= 2", "gap": "> 0", "optimal_arm": "optional, drawn per run"},
    "drift_cap": {"arms": ">= 2", "gap": "> 0", "rate": ">= 0", "base": "default 0.95", "cap": "default 0.45", "optimal_arm": "optional, drawn per run"},
    "switching_drift": {"arms": ">= 2", "gap": "> 0", "switch_prob": "[0, 1]", "rate": ">= 0", "period": ">= 1", "base": "default 0.95", "cap": "default 0.45", "switch_seed": "optional"}
  },
  "reward_law": ["bernoulli", "deterministic"],
  "presets": ["figure1", "problem1", "problem2", "problem3"]
}"#;

fn execute(command: Command) -> Result<(), Error> {
    match command {
        Command::Run {
            config,
            out,
            jobs,
            seed,
        } => {
            let mut cfg = load_config(&config)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let out = out
                .or_else(|| cfg.output_dir.clone())
                .ok_or(Error::Config {
                    field: "output_dir".into(),
                    reason: "pass --out or set output_dir in the config".into(),
                })?;
            let agg = run_experiment(&cfg, jobs)?;
            emit_results(&agg, &out)?;
            print_summary(&agg);
        }
        Command::Reproduce {
            preset,
            horizon,
            runs,
            seed,
            full_scale,
            phi,
            checkpoints,
            jobs,
            out,
        } => {
            let opts = PresetOptions {
                horizon,
                runs,
                seed,
                full_scale,
                phi: parse_phi(&phi)?,
                checkpoints: Checkpoints::Count(checkpoints),
            };
            let cfg = preset_config(Preset::parse(&preset)?, &opts)?;
            let agg = run_experiment(&cfg, jobs)?;
            emit_results(&agg, &out)?;
            print_summary(&agg);
        }
        Command::Gap {
            env,
            tau_max,
            tau_min,
            brute_force,
            horizon,
        } => {
            let table = read_mean_table(&env)?;
            let horizon = horizon.unwrap_or(table.len() as u64 * tau_max);
            let environment = Environment::build(
                EnvironmentSpec::FileBacked { path: env },
                RewardLaw::Bernoulli,
                horizon,
                0,
            )?;
            let report = if brute_force {
                min_gap_bruteforce(&environment, tau_min, tau_max)?
            } else {
                full_set_gap(&environment, tau_min, tau_max)?
            };
            println!("{}", json(&report));
        }
        Command::Bounds {
            arms,
            delta,
            gap,
            horizon,
            segments,
            phi,
        } => {
            let report = bound_calculators(BoundInputs {
                arms,
                delta,
                gap,
                horizon,
                segments,
                phi,
            })?;
            println!("{}", json(&report));
        }
        Command::List => println!("{LISTING}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config() { 2 } else { 3 })
        }
    }
}
