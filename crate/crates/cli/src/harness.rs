use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use maedm::{run, EngineConfig, Instance, Permutation, Sample};
use rayon::prelude::*;

use crate::stats::Aggregate;

pub const RESULTS_FILE: &str = "results.csv";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const SUMMARY_TABLE_FILE: &str = "summary.txt";
pub const SOLUTIONS_DIR: &str = "solutions";
pub const TELEMETRY_DIR: &str = "telemetry";

pub const RESULTS_HEADER: &str = "instance,seed,best_obj,generations,evaluations,wall_seconds";
pub const SUMMARY_HEADER: &str = "instance,runs,best,mean,median,stddev";
pub const TELEMETRY_HEADER: &str = "rho,best_obj,mean_dist,threshold,generation";

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub instances: Vec<PathBuf>,
    pub repetitions: u64,
    /// Repetition `k` runs with seed `engine.seed + k`.
    pub engine: EngineConfig,
    pub out_dir: PathBuf,
    /// Runs executed concurrently.
    pub jobs: usize,
    pub overwrite: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub instance: String,
    pub seed: u64,
    pub best_obj: i64,
    pub best: Permutation,
    pub generations: u64,
    pub evaluations: u64,
    pub wall_seconds: f64,
    pub telemetry: Vec<Sample>,
}

#[derive(Debug, Default)]
pub struct ExperimentOutcome {
    /// Sorted by instance then seed.
    pub records: Vec<RunRecord>,
    pub aggregates: Vec<Aggregate>,
    /// Instance files that could not be loaded, with the reason.
    pub failures: Vec<(PathBuf, String)>,
}

/// Collects the regular, non-hidden files of `dir` in name order.
pub fn instance_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let entry = entry?;
        let hidden = entry.file_name().to_string_lossy().starts_with('.');
        if entry.file_type()?.is_file() && !hidden {
            files.push(entry.path());
        }
    }
    files.sort();
    Ok(files)
}

pub fn instance_label(path: &Path) -> String {
    path.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

pub fn load_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Instance::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Runs every repetition on every loadable instance and writes all result
/// files into `spec.out_dir`.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutcome> {
    if spec.instances.is_empty() {
        bail!("no instances given");
    }
    if spec.repetitions == 0 {
        bail!("repetitions must be positive");
    }
    spec.engine.validate()?;
    prepare_out_dir(&spec.out_dir, spec.overwrite)?;

    let mut outcome = ExperimentOutcome::default();
    let mut loaded = Vec::new();
    for path in &spec.instances {
        match load_instance(path) {
            Ok(inst) => loaded.push((instance_label(path), inst)),
            Err(e) => outcome.failures.push((path.clone(), format!("{e:#}"))),
        }
    }

    let jobs: Vec<(usize, u64)> = (0..loaded.len())
        .flat_map(|i| (0..spec.repetitions).map(move |k| (i, k)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs.max(1))
        .build()?;
    let mut records: Vec<RunRecord> = pool.install(|| {
        jobs.par_iter()
            .map(|&(i, k)| {
                let (label, inst) = &loaded[i];
                let mut cfg = spec.engine.clone();
                cfg.seed = spec.engine.seed.wrapping_add(k);
                let started = Instant::now();
                let telemetry = run(inst, &cfg)?;
                Ok(RunRecord {
                    instance: label.clone(),
                    seed: cfg.seed,
                    best_obj: telemetry.best.obj(),
                    best: telemetry.best.perm().clone(),
                    generations: telemetry.generations,
                    evaluations: telemetry.evaluations,
                    wall_seconds: started.elapsed().as_secs_f64(),
                    telemetry: telemetry.samples,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    records.sort_by(|a, b| (&a.instance, a.seed).cmp(&(&b.instance, b.seed)));

    outcome.aggregates = aggregate(&records);
    outcome.records = records;
    write_outputs(&spec.out_dir, &outcome)?;
    Ok(outcome)
}

fn prepare_out_dir(dir: &Path, overwrite: bool) -> Result<()> {
    fs::create_dir_all(dir.join(SOLUTIONS_DIR))?;
    fs::create_dir_all(dir.join(TELEMETRY_DIR))?;
    if !overwrite {
        for name in [RESULTS_FILE, SUMMARY_FILE, SUMMARY_TABLE_FILE] {
            let path = dir.join(name);
            if path.exists() {
                bail!("{} already exists (pass --overwrite to replace it)", path.display());
            }
        }
    }
    Ok(())
}

/// Per-instance aggregates in instance order. Recomputable from the records
/// alone.
pub fn aggregate(records: &[RunRecord]) -> Vec<Aggregate> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < records.len() {
        let name = &records[start].instance;
        let end = start + records[start..].iter().take_while(|r| &r.instance == name).count();
        let values: Vec<i64> = records[start..end].iter().map(|r| r.best_obj).collect();
        out.extend(Aggregate::from_values(name.clone(), &values));
        start = end;
    }
    out
}

pub fn results_csv(records: &[RunRecord]) -> String {
    let mut out = format!("{RESULTS_HEADER}\n");
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:.3}",
            r.instance, r.seed, r.best_obj, r.generations, r.evaluations, r.wall_seconds
        );
    }
    out
}

pub fn summary_csv(aggregates: &[Aggregate]) -> String {
    let mut out = format!("{SUMMARY_HEADER}\n");
    for a in aggregates {
        let _ = writeln!(out, "{},{},{},{},{},{}", a.instance, a.runs, a.best, a.mean, a.median, a.stddev);
    }
    out
}

pub fn summary_table(aggregates: &[Aggregate]) -> String {
    let width = aggregates.iter().map(|a| a.instance.len()).max().unwrap_or(0).max(8);
    let mut out = format!(
        "{:<width$}  {:>5}  {:>14}  {:>16}  {:>16}  {:>12}\n",
        "instance", "runs", "best", "mean", "median", "stddev"
    );
    for a in aggregates {
        let _ = writeln!(
            out,
            "{:<width$}  {:>5}  {:>14}  {:>16.2}  {:>16.1}  {:>12.2}",
            a.instance, a.runs, a.best, a.mean, a.median, a.stddev
        );
    }
    out
}

pub fn telemetry_csv(samples: &[Sample]) -> String {
    let mut out = format!("{TELEMETRY_HEADER}\n");
    for s in samples {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            s.rho, s.best_obj, s.mean_distance, s.threshold, s.generation
        );
    }
    out
}

/// File stem shared by a run's solution and telemetry files.
pub fn run_file_stem(record: &RunRecord) -> String {
    format!("{}.seed{}", record.instance, record.seed)
}

fn write_outputs(dir: &Path, outcome: &ExperimentOutcome) -> io::Result<()> {
    for r in &outcome.records {
        let stem = run_file_stem(r);
        fs::write(dir.join(SOLUTIONS_DIR).join(format!("{stem}.sol")), format!("{}\n", r.best))?;
        fs::write(
            dir.join(TELEMETRY_DIR).join(format!("{stem}.csv")),
            telemetry_csv(&r.telemetry),
        )?;
    }
    fs::write(dir.join(RESULTS_FILE), results_csv(&outcome.records))?;
    fs::write(dir.join(SUMMARY_FILE), summary_csv(&outcome.aggregates))?;
    fs::write(dir.join(SUMMARY_TABLE_FILE), summary_table(&outcome.aggregates))?;
    Ok(())
}
