//! Permutations, the deviation distance between them, and population level
//! diversity statistics.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// A bijection on `0..n`, stored 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    /// Wraps `values` after checking every value in `0..len` appears once.
    pub fn new(values: Vec<usize>) -> Result<Self> {
        check_bijection(&values)?;
        Ok(Self(values))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    /// Uniformly random permutation (Fisher-Yates).
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut values: Vec<usize> = (0..n).collect();
        values.shuffle(rng);
        Self(values)
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }

    /// Position of each value: `inverse()[v]` is the index of `v`.
    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v] = i;
        }
        inv
    }

    /// Parses one line of space separated 0-based values.
    pub fn parse(text: &str) -> Result<Self> {
        let values = parse_values(text)?;
        Self::new(values)
    }

    // Callers must uphold the bijection invariant.
    pub(crate) fn from_vec_unchecked(values: Vec<usize>) -> Self {
        debug_assert!(check_bijection(&values).is_ok());
        Self(values)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Parses whitespace separated non-negative integers without validating
/// that they form a permutation.
pub fn parse_values(text: &str) -> Result<Vec<usize>> {
    text.split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::InvalidPermutation(format!("`{t}` is not a non-negative integer")))
        })
        .collect()
}

/// Checks that `values` holds each of `0..values.len()` exactly once,
/// describing the first violation found.
pub fn check_bijection(values: &[usize]) -> Result<()> {
    let n = values.len();
    let mut seen = vec![false; n];
    for (i, &v) in values.iter().enumerate() {
        if v >= n {
            return Err(Error::InvalidPermutation(format!(
                "value {v} at position {i} is out of range 0..{n}"
            )));
        }
        if seen[v] {
            return Err(Error::InvalidPermutation(format!(
                "value {v} repeated at position {i}"
            )));
        }
        seen[v] = true;
    }
    Ok(())
}

/// A permutation together with its cached objective value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Individual {
    perm: Permutation,
    obj: i64,
}

impl Individual {
    pub fn new(perm: Permutation, obj: i64) -> Self {
        Self { perm, obj }
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn obj(&self) -> i64 {
        self.obj
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn into_perm(self) -> Permutation {
        self.perm
    }
}

pub type Population = Vec<Individual>;

/// Deviation distance `sum_i |i - pos(x[i], y)|`.
///
/// The formula is usually written with 1-based positions; shifting both
/// sides by one leaves every term unchanged, so 0-based indices are used.
///
/// # Panics
///
/// If the two permutations differ in length.
pub fn deviation_distance(x: &Permutation, y: &Permutation) -> u64 {
    assert_eq!(x.len(), y.len(), "permutation dimensions differ");
    deviation_distance_to(x, &y.inverse())
}

/// [`deviation_distance`] against a precomputed inverse of the second
/// permutation.
#[inline]
pub fn deviation_distance_to(x: &Permutation, y_inverse: &[usize]) -> u64 {
    assert_eq!(x.len(), y_inverse.len(), "permutation dimensions differ");
    x.0.iter()
        .enumerate()
        .map(|(i, &v)| i.abs_diff(y_inverse[v]) as u64)
        .sum()
}

/// Distance to the closest member of `others`, or `None` (infinitely far)
/// when `others` is empty.
pub fn dci<'a>(x: &Permutation, others: impl IntoIterator<Item = &'a Permutation>) -> Option<u64> {
    others.into_iter().map(|y| deviation_distance(x, y)).min()
}

/// Exact sum of deviation distances over unordered distinct pairs, with the
/// number of pairs.
pub fn pairwise_distance_sum(members: &[Individual]) -> (u128, u64) {
    let inverses: Vec<Vec<usize>> = members.iter().map(|m| m.perm.inverse()).collect();
    let total: u128 = (0..members.len())
        .into_par_iter()
        .map(|i| {
            inverses[i + 1..]
                .iter()
                .map(|inv| deviation_distance_to(&members[i].perm, inv) as u128)
                .sum::<u128>()
        })
        .sum();
    let k = members.len() as u64;
    (total, k * k.saturating_sub(1) / 2)
}

/// Mean deviation distance over all unordered pairs of distinct members.
///
/// The sum is accumulated exactly and divided once in double precision.
///
/// # Panics
///
/// If fewer than two members are given.
pub fn mean_pairwise_distance(members: &[Individual]) -> f64 {
    assert!(members.len() >= 2, "mean distance needs at least two members");
    let (sum, pairs) = pairwise_distance_sum(members);
    sum as f64 / pairs as f64
}
