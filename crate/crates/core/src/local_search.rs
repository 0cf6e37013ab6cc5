//! Insert-neighborhood hill climbing.
//!
//! An insert move takes the element at position `i` out of the permutation
//! and reinserts it at position `j`, shifting everything in between by one.
//! Moving an element past one neighbour only changes the contribution of
//! that single pair, so the deltas of all targets for a fixed element can
//! be accumulated in one O(n) sweep outward from `i`.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::instance::Instance;
use crate::permutation::{Individual, Permutation};

/// Best reinsertion of the element currently at `element_index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InsertMove {
    pub element_index: usize,
    pub target_index: usize,
    pub delta: i64,
}

impl InsertMove {
    pub fn is_noop(&self) -> bool {
        self.element_index == self.target_index
    }
}

/// Finds the best target position for the element at `element_index`.
///
/// The baseline is the no-op move with delta 0. Targets are visited from
/// `i - 1` down to `0`, then from `i + 1` up to `n - 1`, and only strictly
/// larger deltas replace the incumbent, so ties resolve to the earliest
/// target in that order.
///
/// # Panics
///
/// If `element_index` is out of range or dimensions disagree.
pub fn insertion_delta_scan(inst: &Instance, perm: &[usize], element_index: usize) -> InsertMove {
    let n = perm.len();
    assert_eq!(n, inst.n(), "permutation length does not match instance");
    assert!(element_index < n, "element index {element_index} out of range");

    let v = perm[element_index];
    let gain = inst.precedence_gain_row(v);
    let mut best = InsertMove {
        element_index,
        target_index: element_index,
        delta: 0,
    };

    let mut delta = 0i64;
    for k in (0..element_index).rev() {
        let u = perm[k];
        delta += gain[u];
        if delta > best.delta {
            best.target_index = k;
            best.delta = delta;
        }
    }
    delta = 0;
    for (k, &u) in perm.iter().enumerate().skip(element_index + 1) {
        delta -= gain[u];
        if delta > best.delta {
            best.target_index = k;
            best.delta = delta;
        }
    }
    best
}

/// Delta of moving the element at `element_index` to every target position
/// (zero at `element_index` itself), accumulated the same way as
/// [`insertion_delta_scan`].
pub fn insertion_delta_profile(inst: &Instance, perm: &[usize], element_index: usize) -> Vec<i64> {
    let n = perm.len();
    assert_eq!(n, inst.n(), "permutation length does not match instance");
    assert!(element_index < n, "element index {element_index} out of range");
    let gain = inst.precedence_gain_row(perm[element_index]);
    let mut deltas = vec![0; n];
    for k in (0..element_index).rev() {
        deltas[k] = deltas[k + 1] + gain[perm[k]];
    }
    for k in element_index + 1..n {
        deltas[k] = deltas[k - 1] - gain[perm[k]];
    }
    deltas
}

/// Moves `perm[from]` to index `to`, keeping `positions` (value -> index)
/// in sync. Work is proportional to the shift length.
pub fn apply_insert(perm: &mut [usize], positions: &mut [usize], from: usize, to: usize) {
    if from < to {
        perm[from..=to].rotate_left(1);
    } else if to < from {
        perm[to..=from].rotate_right(1);
    } else {
        return;
    }
    let (lo, hi) = (from.min(to), from.max(to));
    for (i, &v) in perm[lo..=hi].iter().enumerate() {
        positions[v] = lo + i;
    }
}

/// Counters reported by [`local_search`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Complete passes over all elements, including the final clean pass.
    pub sweeps: u64,
    pub moves: u64,
}

/// First-improvement stochastic hill climber over the insert neighborhood.
///
/// Each sweep visits every element once in a freshly shuffled order and
/// applies the element's best insertion whenever it strictly improves the
/// objective. The search stops after a sweep with no accepted move, at which
/// point the result is insert-locally optimal.
pub fn local_search<R: Rng + ?Sized>(
    inst: &Instance,
    start: Individual,
    rng: &mut R,
) -> (Individual, SearchStats) {
    local_search_observed(inst, start, rng, |_, _| {})
}

/// [`local_search`] calling `on_move(move, permutation_after)` for every
/// accepted move.
pub fn local_search_observed<R, F>(
    inst: &Instance,
    start: Individual,
    rng: &mut R,
    mut on_move: F,
) -> (Individual, SearchStats)
where
    R: Rng + ?Sized,
    F: FnMut(&InsertMove, &[usize]),
{
    let n = start.n();
    assert_eq!(n, inst.n(), "permutation length does not match instance");
    let mut obj = start.obj();
    let mut perm = start.into_perm().into_inner();
    let mut positions = vec![0; n];
    for (i, &v) in perm.iter().enumerate() {
        positions[v] = i;
    }

    let mut order: Vec<usize> = (0..n).collect();
    let mut stats = SearchStats::default();
    loop {
        stats.sweeps += 1;
        order.shuffle(rng);
        let mut improved = false;
        for &value in &order {
            let mv = insertion_delta_scan(inst, &perm, positions[value]);
            if mv.delta > 0 {
                apply_insert(&mut perm, &mut positions, mv.element_index, mv.target_index);
                obj += mv.delta;
                stats.moves += 1;
                improved = true;
                on_move(&mv, &perm);
            }
        }
        if !improved {
            break;
        }
    }
    (Individual::new(Permutation::from_vec_unchecked(perm), obj), stats)
}

/// Whether no single insert move strictly improves `perm`.
pub fn is_insert_local_optimum(inst: &Instance, perm: &[usize]) -> bool {
    (0..perm.len()).all(|i| insertion_delta_scan(inst, perm, i).delta <= 0)
}
