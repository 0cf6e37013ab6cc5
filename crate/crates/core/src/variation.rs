//! Mating selection and crossover. There is no mutation operator.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;

use crate::permutation::{Individual, Permutation};

/// Crossover operator applied to every parent pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Crossover {
    /// Cycle crossover.
    #[default]
    Cx,
    /// Order-based crossover.
    Ob,
}

impl Crossover {
    pub fn apply<R: Rng + ?Sized>(
        self,
        p1: &Permutation,
        p2: &Permutation,
        rng: &mut R,
    ) -> (Permutation, Permutation) {
        match self {
            Crossover::Cx => cycle_crossover(p1, p2, rng),
            Crossover::Ob => order_crossover(p1, p2, rng),
        }
    }
}

impl fmt::Display for Crossover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Crossover::Cx => "cx",
            Crossover::Ob => "ob",
        })
    }
}

impl FromStr for Crossover {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cx" => Ok(Crossover::Cx),
            "ob" => Ok(Crossover::Ob),
            other => Err(format!("unknown crossover `{other}` (expected cx or ob)")),
        }
    }
}

/// Binary tournament: two members drawn uniformly with replacement, the
/// higher objective wins and a fair coin settles ties.
///
/// # Panics
///
/// If `pop` is empty.
pub fn binary_tournament<'a, R: Rng + ?Sized>(pop: &'a [Individual], rng: &mut R) -> &'a Individual {
    assert!(!pop.is_empty(), "tournament on an empty population");
    let a = &pop[rng.gen_range(0..pop.len())];
    let b = &pop[rng.gen_range(0..pop.len())];
    match a.obj().cmp(&b.obj()) {
        std::cmp::Ordering::Greater => a,
        std::cmp::Ordering::Less => b,
        std::cmp::Ordering::Equal => {
            if rng.gen_bool(0.5) {
                a
            } else {
                b
            }
        }
    }
}

/// Cycle crossover with a fair coin per cycle.
///
/// # Panics
///
/// If the parents differ in length.
pub fn cycle_crossover<R: Rng + ?Sized>(
    p1: &Permutation,
    p2: &Permutation,
    rng: &mut R,
) -> (Permutation, Permutation) {
    cycle_crossover_with(p1, p2, || rng.gen_bool(0.5))
}

/// Cycle crossover where `first_from_p1()` is asked once per cycle, in order
/// of the cycle's lowest position, whether offspring 1 takes that cycle from
/// `p1` (offspring 2 then takes it from `p2`, and vice versa). Positions
/// where the parents agree form one-element cycles and are copied without
/// consulting the coin.
pub fn cycle_crossover_with(
    p1: &Permutation,
    p2: &Permutation,
    mut first_from_p1: impl FnMut() -> bool,
) -> (Permutation, Permutation) {
    let (a, b) = (p1.as_slice(), p2.as_slice());
    assert_eq!(a.len(), b.len(), "parent dimensions differ");
    let n = a.len();
    let pos_in_a = p1.inverse();
    let mut c1 = vec![0; n];
    let mut c2 = vec![0; n];
    let mut done = vec![false; n];

    for start in 0..n {
        if done[start] {
            continue;
        }
        if a[start] == b[start] {
            c1[start] = a[start];
            c2[start] = a[start];
            done[start] = true;
            continue;
        }
        let take_p1 = first_from_p1();
        let (d1, d2) = if take_p1 { (a, b) } else { (b, a) };
        let mut i = start;
        loop {
            c1[i] = d1[i];
            c2[i] = d2[i];
            done[i] = true;
            i = pos_in_a[b[i]];
            if i == start {
                break;
            }
        }
    }
    (
        Permutation::from_vec_unchecked(c1),
        Permutation::from_vec_unchecked(c2),
    )
}

/// Order-based crossover. Each offspring clones one parent and rewrites a
/// random half (`n / 2` rounded down) of its positions so the values there
/// follow their relative order in the other parent. The two offspring use
/// independently drawn position subsets.
///
/// # Panics
///
/// If the parents differ in length.
pub fn order_crossover<R: Rng + ?Sized>(
    p1: &Permutation,
    p2: &Permutation,
    rng: &mut R,
) -> (Permutation, Permutation) {
    assert_eq!(p1.len(), p2.len(), "parent dimensions differ");
    let n = p1.len();
    let s1 = sample_half_positions(n, rng);
    let s2 = sample_half_positions(n, rng);
    (
        reorder_positions(p1, p2, &s1),
        reorder_positions(p2, p1, &s2),
    )
}

/// Uniform random subset of `n / 2` positions, as drawn by
/// [`order_crossover`] for each offspring in turn.
pub fn sample_half_positions<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    index::sample(rng, n, n / 2).into_vec()
}

/// Clones `base` and rewrites the values at `positions` in the relative
/// order they appear in `order_donor`.
pub fn reorder_positions(base: &Permutation, order_donor: &Permutation, positions: &[usize]) -> Permutation {
    assert_eq!(base.len(), order_donor.len(), "parent dimensions differ");
    let rank = order_donor.inverse();
    let mut slots = positions.to_vec();
    slots.sort_unstable();
    let mut values: Vec<usize> = slots.iter().map(|&i| base.as_slice()[i]).collect();
    values.sort_unstable_by_key(|&v| rank[v]);
    let mut child = base.as_slice().to_vec();
    for (&slot, v) in slots.iter().zip(values) {
        child[slot] = v;
    }
    Permutation::from_vec_unchecked(child)
}
