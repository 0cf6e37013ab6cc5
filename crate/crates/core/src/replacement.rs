//! Best-non-penalized survivor selection with a linearly shrinking distance
//! threshold.
//!
//! Survivors are picked one at a time. Candidates closer than the current
//! threshold to any survivor already picked are penalized for the rest of
//! the pass. The best remaining non-penalized candidate by objective is picked
//! while one exists; afterwards the penalized candidate farthest from the
//! survivors is picked.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::Instant;

use rand::Rng;

use crate::error::{Error, Result};
use crate::permutation::{deviation_distance, deviation_distance_to, Individual};

/// Source of elapsed budget, in the same unit as the schedule's total.
pub trait Clock {
    fn elapsed(&self) -> f64;
}

/// Seconds since construction.
#[derive(Debug, Clone)]
pub struct WallClock {
    start: Instant,
}

impl WallClock {
    pub fn start() -> Self {
        Self {
            start: Instant::now(),
        }
    }
}

impl Clock for WallClock {
    fn elapsed(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }
}

/// Clock driven by an evaluation counter, shared with whoever performs the
/// evaluations.
#[derive(Debug, Clone, Default)]
pub struct EvaluationClock {
    count: Arc<AtomicU64>,
}

impl EvaluationClock {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn advance(&self, evaluations: u64) {
        self.count.fetch_add(evaluations, Ordering::Relaxed);
    }

    pub fn evaluations(&self) -> u64 {
        self.count.load(Ordering::Relaxed)
    }
}

impl Clock for EvaluationClock {
    fn elapsed(&self) -> f64 {
        self.evaluations() as f64
    }
}

/// Linear decay of the distance threshold from `d0` to zero over the budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiversitySchedule {
    d0: f64,
    total: f64,
}

impl DiversitySchedule {
    pub fn new(d0: f64, total: f64) -> Result<Self> {
        if !total.is_finite() || total <= 0.0 {
            return Err(Error::Config(format!("total budget must be positive, got {total}")));
        }
        if !d0.is_finite() || d0 < 0.0 {
            return Err(Error::Config(format!("initial threshold must be non-negative, got {d0}")));
        }
        Ok(Self { d0, total })
    }

    pub fn d0(&self) -> f64 {
        self.d0
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    /// Fraction of the budget consumed at `elapsed`, clamped to `[0, 1]`.
    pub fn progress(&self, elapsed: f64) -> f64 {
        (elapsed / self.total).clamp(0.0, 1.0)
    }

    /// `d0 - (elapsed / total) * d0`, clamped at zero once the budget is spent.
    pub fn threshold_at(&self, elapsed: f64) -> f64 {
        self.d0 - self.progress(elapsed) * self.d0
    }

    pub fn current_threshold(&self, clock: &dyn Clock) -> f64 {
        self.threshold_at(clock.elapsed())
    }
}

/// How the distance to the closest survivor is maintained during a pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DciUpdate {
    /// Each candidate keeps `min(previous, distance to newest survivor)`.
    #[default]
    Incremental,
    /// Recompute against every survivor whenever the value is needed, as the
    /// textbook pseudocode does. O(N) times slower; kept for cross-checking.
    Rescan,
}

/// Which branch chose a survivor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PickPath {
    Eligible,
    Fallback,
}

/// One survivor choice. `candidate` indexes the concatenation of the
/// population and the offspring. `dci` is the distance to the closest
/// earlier survivor; it is `None` for the first pick and whenever the
/// threshold is zero, since distances are then never computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pick {
    pub candidate: usize,
    pub dci: Option<u64>,
    pub path: PickPath,
}

#[derive(Debug, Clone)]
pub struct Selection {
    pub survivors: Vec<Individual>,
    pub picks: Vec<Pick>,
}

struct Candidate {
    ind: Individual,
    inverse: Vec<usize>,
    // u64::MAX stands for "no survivor yet".
    dci: u64,
}

/// Selects `size` survivors from `population` followed by `offspring`.
///
/// Ties on objective (eligible path) or on distance (fallback path) are
/// broken uniformly at random. A candidate is penalized when its distance to
/// the closest survivor is strictly below `threshold`.
///
/// # Panics
///
/// If fewer than `size` candidates are supplied or dimensions differ.
pub fn bnp_select<R: Rng + ?Sized>(
    population: Vec<Individual>,
    offspring: Vec<Individual>,
    size: usize,
    threshold: f64,
    rng: &mut R,
) -> Selection {
    bnp_select_with(population, offspring, size, threshold, DciUpdate::Incremental, rng)
}

pub fn bnp_select_with<R: Rng + ?Sized>(
    population: Vec<Individual>,
    offspring: Vec<Individual>,
    size: usize,
    threshold: f64,
    update: DciUpdate,
    rng: &mut R,
) -> Selection {
    let total = population.len() + offspring.len();
    assert!(total >= size, "need at least {size} candidates, got {total}");
    let mut cands: Vec<Candidate> = population
        .into_iter()
        .chain(offspring)
        .map(|ind| Candidate {
            inverse: ind.perm().inverse(),
            ind,
            dci: u64::MAX,
        })
        .collect();
    if let Some(first) = cands.first() {
        let n = first.ind.n();
        assert!(cands.iter().all(|c| c.ind.n() == n), "candidate dimensions differ");
    }

    // With no positive threshold nobody is ever penalized, so distances are
    // never consulted.
    let track_distance = threshold > 0.0;
    let mut eligible: Vec<usize> = (0..total).collect();
    let mut penalized: Vec<usize> = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(size);
    let mut picks = Vec::with_capacity(size);
    let mut ties = Vec::new();

    while chosen.len() < size {
        if track_distance {
            match update {
                DciUpdate::Incremental => {
                    if let Some(&last) = chosen.last() {
                        let last_inv = std::mem::take(&mut cands[last].inverse);
                        for &c in eligible.iter().chain(&penalized) {
                            let d = deviation_distance_to(cands[c].ind.perm(), &last_inv);
                            cands[c].dci = cands[c].dci.min(d);
                        }
                        cands[last].inverse = last_inv;
                    }
                }
                DciUpdate::Rescan => {
                    for &c in &eligible {
                        cands[c].dci = rescan_dci(&cands, c, &chosen);
                    }
                }
            }
            let (keep, moved): (Vec<usize>, Vec<usize>) = eligible
                .iter()
                .partition(|&&c| cands[c].dci as f64 >= threshold);
            eligible = keep;
            penalized.extend(moved);
        }

        let (pool, path) = if !eligible.is_empty() {
            (&mut eligible, PickPath::Eligible)
        } else {
            if update == DciUpdate::Rescan {
                for &c in &penalized {
                    cands[c].dci = rescan_dci(&cands, c, &chosen);
                }
            }
            (&mut penalized, PickPath::Fallback)
        };

        ties.clear();
        let key = |c: usize| match path {
            PickPath::Eligible => cands[c].ind.obj() as i128,
            PickPath::Fallback => cands[c].dci as i128,
        };
        let best = pool.iter().map(|&c| key(c)).max().expect("candidate pool is non-empty");
        ties.extend(pool.iter().enumerate().filter(|(_, &c)| key(c) == best).map(|(i, _)| i));
        let slot = if ties.len() == 1 {
            ties[0]
        } else {
            ties[rng.gen_range(0..ties.len())]
        };
        let picked = pool.remove(slot);
        picks.push(Pick {
            candidate: picked,
            dci: (track_distance && !chosen.is_empty()).then_some(cands[picked].dci),
            path,
        });
        chosen.push(picked);
    }

    let mut slots: Vec<Option<Individual>> = cands.into_iter().map(|c| Some(c.ind)).collect();
    let survivors = chosen.iter().map(|&c| slots[c].take().unwrap()).collect();
    Selection { survivors, picks }
}

fn rescan_dci(cands: &[Candidate], c: usize, chosen: &[usize]) -> u64 {
    chosen
        .iter()
        .map(|&s| deviation_distance(cands[c].ind.perm(), cands[s].ind.perm()))
        .min()
        .unwrap_or(u64::MAX)
}

/// Keeps the `size` best candidates by objective, ties broken at random.
/// This is [`bnp_select`] with a zero threshold.
pub fn elitist_select<R: Rng + ?Sized>(
    population: Vec<Individual>,
    offspring: Vec<Individual>,
    size: usize,
    rng: &mut R,
) -> Selection {
    bnp_select(population, offspring, size, 0.0, rng)
}
