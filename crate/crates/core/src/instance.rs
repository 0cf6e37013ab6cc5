//! LOLIB instance matrices and the triangulation objective.
//!
//! The text format is a whitespace separated stream: an optional name line,
//! the dimension `n`, then `n * n` integers in row-major order. Diagonal
//! entries are kept as read but never enter the objective.

use std::fmt::Write as _;
use std::io::Read;

use crate::error::{Error, Result};
use crate::permutation::{Individual, Permutation};

/// Largest dimension accepted by [`brute_force_optimum`].
pub const BRUTE_FORCE_CAP: usize = 10;

/// Dense `n x n` weight matrix of a linear ordering instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    name: String,
    n: usize,
    weights: Vec<i64>,
    // skew[a * n + b] = m[a][b] - m[b][a]
    skew: Vec<i64>,
}

impl Instance {
    pub fn new(name: impl Into<String>, n: usize, weights: Vec<i64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Dimension(n as i64));
        }
        let expected = n * n;
        if weights.len() != expected {
            return Err(Error::WeightCount {
                n,
                expected,
                found: weights.len(),
            });
        }
        let abs_sum = weights
            .iter()
            .try_fold(0i64, |acc, w| w.checked_abs().and_then(|a| acc.checked_add(a)));
        if abs_sum.is_none() {
            return Err(Error::Overflow);
        }
        let mut skew = vec![0; expected];
        for a in 0..n {
            for b in 0..n {
                skew[a * n + b] = weights[a * n + b] - weights[b * n + a];
            }
        }
        Ok(Self {
            name: name.into(),
            n,
            weights,
            skew,
        })
    }

    /// Builds an instance from explicit rows; convenient in tests.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        let weights: Vec<i64> = rows.iter().flatten().copied().collect();
        Self::new("", n, weights)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    #[inline]
    pub fn weight(&self, row: usize, col: usize) -> i64 {
        self.weights[row * self.n + col]
    }

    #[inline]
    pub fn row(&self, row: usize) -> &[i64] {
        &self.weights[row * self.n..(row + 1) * self.n]
    }

    /// Row `a` of the antisymmetric matrix `m[a][b] - m[b][a]`: the gain of
    /// placing `a` before `b` rather than after it.
    #[inline]
    pub fn precedence_gain_row(&self, a: usize) -> &[i64] {
        &self.skew[a * self.n..(a + 1) * self.n]
    }

    /// Sum of every entry off the main diagonal.
    pub fn off_diagonal_sum(&self) -> i64 {
        (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| self.weight(i, j))
            .sum()
    }

    /// Sum of entries above the diagonal for rows and columns permuted by
    /// `perm`.
    ///
    /// # Panics
    ///
    /// If `perm` is not over the same dimension as the instance.
    pub fn objective(&self, perm: &Permutation) -> i64 {
        assert_eq!(
            perm.len(),
            self.n,
            "permutation length does not match instance dimension"
        );
        let p = perm.as_slice();
        let mut total = 0i64;
        for (i, &a) in p.iter().enumerate() {
            let row = self.row(a);
            for &b in &p[i + 1..] {
                total += row[b];
            }
        }
        total
    }

    /// Evaluates `perm` into an [`Individual`].
    pub fn evaluate(&self, perm: Permutation) -> Individual {
        let obj = self.objective(&perm);
        Individual::new(perm, obj)
    }

    /// Parses the LOLIB text format.
    pub fn parse(source: &str) -> Result<Self> {
        let mut lines = source
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .skip_while(|(_, l)| l.trim().is_empty())
            .peekable();

        let mut name = String::new();
        if let Some((_, first)) = lines.peek() {
            if first.split_whitespace().any(|t| t.parse::<i64>().is_err()) {
                name = first.trim().to_string();
                lines.next();
            }
        }

        let mut tokens = lines.flat_map(|(line, l)| l.split_whitespace().map(move |t| (line, t)));
        let parse_int = |(line, token): (usize, &str)| -> Result<i64> {
            token.parse::<i64>().map_err(|_| Error::Parse {
                line,
                token: token.to_string(),
            })
        };

        let n = match tokens.next() {
            Some(tok) => parse_int(tok)?,
            None => return Err(Error::Dimension(0)),
        };
        if n < 2 {
            return Err(Error::Dimension(n));
        }
        let n = usize::try_from(n).map_err(|_| Error::Dimension(n))?;
        let expected = n.checked_mul(n).ok_or(Error::Dimension(n as i64))?;

        let mut weights = Vec::with_capacity(expected.min(1 << 24));
        for tok in tokens.by_ref().take(expected) {
            weights.push(parse_int(tok)?);
        }
        if weights.len() < expected {
            return Err(Error::Truncated {
                expected,
                found: weights.len(),
            });
        }
        Self::new(name, n, weights)
    }

    pub fn read_from(mut reader: impl Read) -> std::io::Result<Result<Self>> {
        let mut buf = String::new();
        reader.read_to_string(&mut buf)?;
        Ok(Self::parse(&buf))
    }

    /// Serializes to the LOLIB text format. The name line is omitted when
    /// the name is empty.
    pub fn to_lolib_string(&self) -> String {
        let mut out = String::new();
        if !self.name.is_empty() {
            out.push_str(&self.name);
            out.push('\n');
        }
        let _ = writeln!(out, "{}", self.n);
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(|w| w.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Exhaustively finds the optimum of a small instance.
///
/// Permutations are visited in lexicographic order and only a strictly
/// better value replaces the incumbent, so ties resolve to the
/// lexicographically smallest maximizer.
pub fn brute_force_optimum(inst: &Instance) -> Result<(Individual, i64)> {
    let n = inst.n();
    if n > BRUTE_FORCE_CAP {
        return Err(Error::TooLarge {
            n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = perm.clone();
    let mut best_obj = objective_of_slice(inst, &perm);
    while next_permutation(&mut perm) {
        let obj = objective_of_slice(inst, &perm);
        if obj > best_obj {
            best_obj = obj;
            best.copy_from_slice(&perm);
        }
    }
    let best = Permutation::new(best)?;
    Ok((Individual::new(best, best_obj), best_obj))
}

fn objective_of_slice(inst: &Instance, p: &[usize]) -> i64 {
    let mut total = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            total += inst.weight(p[i], p[j]);
        }
    }
    total
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}
