use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::{ArgGroup, Parser, Subcommand};
use maedm::local_search::is_insert_local_optimum;
use maedm::permutation::{check_bijection, parse_values};
use maedm::{brute_force_optimum, Budget, Crossover, EngineConfig, Permutation, Replacement};
use maedm_cli::harness::{self, ExperimentSpec};

#[derive(Parser)]
#[command(name = "maedm", version, about = "Memetic solver and benchmark harness for the linear ordering problem")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run repeated experiments over instance files.
    #[command(group(ArgGroup::new("budget").required(true).args(["budget_seconds", "budget_evals"])))]
    #[command(group(ArgGroup::new("inputs").required(true).multiple(true).args(["instance", "instance_dir"])))]
    Solve {
        /// Instance file (repeatable).
        #[arg(long)]
        instance: Vec<PathBuf>,
        /// Directory whose files are all treated as instances.
        #[arg(long)]
        instance_dir: Vec<PathBuf>,
        #[arg(long, default_value_t = 30)]
        reps: u64,
        /// Wall-clock budget per run.
        #[arg(long)]
        budget_seconds: Option<f64>,
        /// Evaluation-count budget per run (reproducible).
        #[arg(long)]
        budget_evals: Option<u64>,
        #[arg(long, default_value_t = 200)]
        pop_size: usize,
        #[arg(long, default_value = "cx")]
        crossover: Crossover,
        #[arg(long, default_value = "bnp")]
        replacement: Replacement,
        /// Base seed; repetition k uses seed + k.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "results")]
        out_dir: PathBuf,
        /// Runs executed concurrently.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Telemetry sampling interval in generations.
        #[arg(long)]
        telemetry_every: Option<u64>,
        /// Replace existing result files in the output directory.
        #[arg(long)]
        overwrite: bool,
    },
    /// Exhaustively solve an instance with n <= 10.
    Oracle {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Check a stored solution against an instance.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        solution: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve {
            instance,
            instance_dir,
            reps,
            budget_seconds,
            budget_evals,
            pop_size,
            crossover,
            replacement,
            seed,
            out_dir,
            jobs,
            telemetry_every,
            overwrite,
        } => {
            let budget = match (budget_seconds, budget_evals) {
                (Some(s), _) if s > 0.0 && s.is_finite() => Budget::WallClock(Duration::from_secs_f64(s)),
                (None, Some(e)) if e > 0 => Budget::Evaluations(e),
                _ => return usage_error("budget must be positive"),
            };
            let mut instances = instance;
            for dir in &instance_dir {
                match harness::instance_files(dir) {
                    Ok(files) => instances.extend(files),
                    Err(e) => return usage_error(&format!("{e:#}")),
                }
            }
            if instances.is_empty() {
                return usage_error("no instance files found");
            }
            let mut engine = EngineConfig::new(budget);
            engine.population_size = pop_size;
            engine.crossover = crossover;
            engine.replacement = replacement;
            engine.seed = seed;
            engine.telemetry_every = telemetry_every;
            if let Err(e) = engine.validate() {
                return usage_error(&e.to_string());
            }
            solve(ExperimentSpec {
                instances,
                repetitions: reps,
                engine,
                out_dir,
                jobs,
                overwrite,
            })
        }
        Command::Oracle { instance } => oracle(&instance),
        Command::Verify { instance, solution } => verify(&instance, &solution),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn solve(spec: ExperimentSpec) -> Result<ExitCode> {
    let outcome = harness::run_experiment(&spec)?;
    for (path, reason) in &outcome.failures {
        eprintln!("error: {}: {reason}", path.display());
    }
    print!("{}", harness::summary_table(&outcome.aggregates));
    println!("results written to {}", spec.out_dir.display());
    Ok(if outcome.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn oracle(path: &Path) -> Result<ExitCode> {
    let inst = harness::load_instance(path)?;
    let (best, obj) = brute_force_optimum(&inst)?;
    println!("{obj}, ({})", best.perm());
    Ok(ExitCode::SUCCESS)
}

fn verify(instance: &Path, solution: &Path) -> Result<ExitCode> {
    let inst = harness::load_instance(instance)?;
    let text = fs::read_to_string(solution).with_context(|| format!("reading {}", solution.display()))?;
    let values = match parse_values(&text) {
        Ok(v) => v,
        Err(e) => {
            println!("valid: no ({e})");
            return Ok(ExitCode::FAILURE);
        }
    };
    if values.len() != inst.n() {
        println!("valid: no (permutation has {} values, instance has n = {})", values.len(), inst.n());
        return Ok(ExitCode::FAILURE);
    }
    if let Err(e) = check_bijection(&values) {
        println!("valid: no ({e})");
        return Ok(ExitCode::FAILURE);
    }
    let perm = Permutation::new(values)?;
    let local = is_insert_local_optimum(&inst, perm.as_slice());
    println!("objective: {}", inst.objective(&perm));
    println!("valid: yes");
    println!("locally optimal: {}", if local { "yes" } else { "no" });
    Ok(ExitCode::SUCCESS)
}
