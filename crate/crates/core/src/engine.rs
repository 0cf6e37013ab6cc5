//! The memetic loop: improved random initialization, binary tournaments,
//! crossover, local search of every offspring and diversity-aware
//! replacement until the budget runs out.

use std::time::Duration;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::local_search::local_search;
use crate::permutation::{mean_pairwise_distance, Individual, Permutation};
use crate::replacement::{bnp_select, PickPath, Clock, DiversitySchedule, EvaluationClock, WallClock};
use crate::rng::{substream, Purpose};
use crate::variation::{binary_tournament, Crossover};

/// How a run's budget is measured.
///
/// Evaluations count one unit per full objective computation plus one unit
/// per local search sweep (a sweep performs `n` O(n) scans, the cost of one
/// full evaluation).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Budget {
    WallClock(Duration),
    Evaluations(u64),
}

impl Budget {
    fn total(&self) -> f64 {
        match self {
            Budget::WallClock(d) => d.as_secs_f64(),
            Budget::Evaluations(e) => *e as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Replacement {
    #[default]
    Bnp,
    /// Plain truncation to the best candidates (a zero threshold throughout).
    Elitist,
}

impl std::fmt::Display for Replacement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Replacement::Bnp => "bnp",
            Replacement::Elitist => "elitist",
        })
    }
}

impl std::str::FromStr for Replacement {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bnp" => Ok(Replacement::Bnp),
            "elitist" => Ok(Replacement::Elitist),
            other => Err(format!("unknown replacement `{other}` (expected bnp or elitist)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    pub population_size: usize,
    pub crossover: Crossover,
    pub budget: Budget,
    pub seed: u64,
    pub replacement: Replacement,
    /// Sample telemetry every this many generations. `None` picks 1 for
    /// `n <= 300` and 5 above.
    pub telemetry_every: Option<u64>,
}

impl EngineConfig {
    pub fn new(budget: Budget) -> Self {
        Self {
            population_size: 200,
            crossover: Crossover::Cx,
            budget,
            seed: 0,
            replacement: Replacement::Bnp,
            telemetry_every: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::Config(format!(
                "population size must be at least 2, got {}",
                self.population_size
            )));
        }
        let total = self.budget.total();
        if total.is_nan() || total <= 0.0 {
            return Err(Error::Config("budget must be positive".into()));
        }
        if self.telemetry_every == Some(0) {
            return Err(Error::Config("telemetry interval must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    /// Fraction of the budget consumed, in `[0, 1]`.
    pub rho: f64,
    pub best_obj: i64,
    pub mean_distance: f64,
    pub threshold: f64,
    pub generation: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunTelemetry {
    pub samples: Vec<Sample>,
    pub best: Individual,
    pub d0: f64,
    pub generations: u64,
    pub evaluations: u64,
}

/// State handed to a run observer after every replacement.
#[derive(Debug)]
pub struct GenerationReport<'a> {
    pub generation: u64,
    pub threshold: f64,
    pub best_parent_obj: i64,
    /// Survivors chosen because every remaining candidate was penalized.
    pub fallback_picks: usize,
    pub offspring: &'a [Individual],
    pub population: &'a [Individual],
}

pub fn run(inst: &Instance, cfg: &EngineConfig) -> Result<RunTelemetry> {
    run_observed(inst, cfg, |_| {})
}

pub fn run_observed<F>(inst: &Instance, cfg: &EngineConfig, mut observe: F) -> Result<RunTelemetry>
where
    F: FnMut(&GenerationReport<'_>),
{
    cfg.validate()?;
    let n = inst.n();
    let size = cfg.population_size;
    let seed = cfg.seed;
    let interval = cfg.telemetry_every.unwrap_or(if n <= 300 { 1 } else { 5 });

    let evaluations = EvaluationClock::new();
    let wall = WallClock::start();
    let clock: &dyn Clock = match cfg.budget {
        Budget::WallClock(_) => &wall,
        Budget::Evaluations(_) => &evaluations,
    };
    let total = cfg.budget.total();

    let improved: Vec<(Individual, u64)> = (0..size as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(seed, Purpose::Initialization, 0, i);
            let start = inst.evaluate(Permutation::random(n, &mut rng));
            let (ind, stats) = local_search(inst, start, &mut rng);
            (ind, 1 + stats.sweeps)
        })
        .collect();
    evaluations.advance(improved.iter().map(|(_, e)| e).sum());
    let mut population: Vec<Individual> = improved.into_iter().map(|(ind, _)| ind).collect();
    let mut best = best_of(&population).clone();

    let d0 = mean_pairwise_distance(&population);
    let schedule = DiversitySchedule::new(d0, total)?;
    let threshold_now = |clock: &dyn Clock| match cfg.replacement {
        Replacement::Bnp => schedule.current_threshold(clock),
        Replacement::Elitist => 0.0,
    };

    let mut samples = vec![Sample {
        rho: schedule.progress(clock.elapsed()),
        best_obj: best.obj(),
        mean_distance: d0,
        threshold: threshold_now(clock),
        generation: 0,
    }];

    let mut generation = 0u64;
    while clock.elapsed() < total {
        generation += 1;

        let mut rng = substream(seed, Purpose::Tournament, generation, 0);
        let parents: Vec<&Individual> = (0..size + size % 2)
            .map(|_| binary_tournament(&population, &mut rng))
            .collect();

        let mut rng = substream(seed, Purpose::Crossover, generation, 0);
        let mut children: Vec<Permutation> = Vec::with_capacity(size + 1);
        for pair in parents.chunks_exact(2) {
            let (a, b) = cfg.crossover.apply(pair[0].perm(), pair[1].perm(), &mut rng);
            children.push(a);
            children.push(b);
        }
        children.truncate(size);

        let searched: Vec<(Individual, u64)> = children
            .into_par_iter()
            .enumerate()
            .map(|(k, perm)| {
                let mut rng = substream(seed, Purpose::OffspringSearch, generation, k as u64);
                let (ind, stats) = local_search(inst, inst.evaluate(perm), &mut rng);
                (ind, 1 + stats.sweeps)
            })
            .collect();
        evaluations.advance(searched.iter().map(|(_, e)| e).sum());
        let offspring: Vec<Individual> = searched.into_iter().map(|(ind, _)| ind).collect();

        let best_child = best_of(&offspring);
        if best_child.obj() > best.obj() {
            best = best_child.clone();
        }

        let threshold = threshold_now(clock);
        let rho = schedule.progress(clock.elapsed());
        let best_parent_obj = best_of(&population).obj();
        let mut rng = substream(seed, Purpose::Replacement, generation, 0);
        let parents_owned = std::mem::take(&mut population);
        let selection = bnp_select(parents_owned, offspring.clone(), size, threshold, &mut rng);
        let fallback_picks = selection.picks.iter().filter(|p| p.path == PickPath::Fallback).count();
        population = selection.survivors;

        observe(&GenerationReport {
            generation,
            threshold,
            best_parent_obj,
            fallback_picks,
            offspring: &offspring,
            population: &population,
        });

        if generation.is_multiple_of(interval) || clock.elapsed() >= total {
            samples.push(Sample {
                rho,
                best_obj: best.obj(),
                mean_distance: mean_pairwise_distance(&population),
                threshold,
                generation,
            });
        }
    }

    Ok(RunTelemetry {
        samples,
        best,
        d0,
        generations: generation,
        evaluations: evaluations.evaluations(),
    })
}

// First member with the highest objective.
fn best_of(members: &[Individual]) -> &Individual {
    members
        .iter()
        .reduce(|a, b| if b.obj() > a.obj() { b } else { a })
        .expect("population is non-empty")
}
