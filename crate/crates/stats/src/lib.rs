//! Comparative statistics over invariant values: distinctness percentages,
//! birthday-style pair-collision expectations (exact and sampled), and the
//! coefficient aggregates behind the report tables.
//!
//! All published numbers are floor-truncated decimals, so every computation
//! here is exact integer/rational arithmetic until the final truncation:
//! percentages to one decimal, aggregate averages and expectations to four.

use laurent::CoeffStats;
use num_bigint::BigInt;
use num_traits::{Euclid, Signed, ToPrimitive, Zero};
use rand::Rng;
use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

/// A decimal truncated (floored) to four places, stored as value·10⁴.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fixed4(pub i128);

impl Fixed4 {
    /// Floor of `num/den` (with `den > 0`) to four decimals.
    pub fn from_ratio(num: &BigInt, den: &BigInt) -> Fixed4 {
        assert!(den.is_positive());
        let scaled = num * BigInt::from(10_000);
        Fixed4(scaled.div_euclid(den).to_i128().expect("fits in i128"))
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 10_000.0
    }
}

impl fmt::Display for Fixed4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let a = self.0.unsigned_abs();
        write!(f, "{sign}{}.{:04}", a / 10_000, a % 10_000)
    }
}

/// A percentage truncated to one decimal, stored in tenths of a percent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Tenths(pub u64);

impl fmt::Display for Tenths {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.0 / 10, self.0 % 10)
    }
}

/// A multiset of value classes: `counts[k]` elements share value class `k`.
#[derive(Debug, Clone)]
pub struct ClassPartition {
    counts: Vec<u64>,
    /// class id per element, in input order (used by the sampler)
    assignment: Vec<u32>,
}

impl ClassPartition {
    /// Group elements by key equality, preserving input order.
    pub fn from_keys<I, K>(keys: I) -> Self
    where
        I: IntoIterator<Item = K>,
        K: Hash + Eq,
    {
        let mut ids: HashMap<K, u32> = HashMap::new();
        let mut counts: Vec<u64> = Vec::new();
        let mut assignment = Vec::new();
        for k in keys {
            let next = counts.len() as u32;
            let id = *ids.entry(k).or_insert_with(|| {
                counts.push(0);
                next
            });
            counts[id as usize] += 1;
            assignment.push(id);
        }
        ClassPartition { counts, assignment }
    }

    pub fn total(&self) -> u64 {
        self.assignment.len() as u64
    }

    pub fn num_classes(&self) -> u64 {
        self.counts.len() as u64
    }

    /// Percentage of distinct values, floored to one decimal.
    pub fn distinct_percent(&self) -> Tenths {
        Tenths(1000 * self.num_classes() / self.total())
    }

    /// Collision probability of a uniform ordered pair of distinct elements:
    /// `ρ = Σ cᵢ(cᵢ−1) / (N(N−1))`, as an exact (numerator, denominator).
    pub fn collision_probability(&self) -> (BigInt, BigInt) {
        let num: BigInt = self
            .counts
            .iter()
            .map(|&c| BigInt::from(c) * BigInt::from(c.saturating_sub(1)))
            .sum();
        let n = BigInt::from(self.total());
        (num, &n * (&n - 1))
    }

    /// Expected number of uniformly drawn distinct pairs until the first
    /// collision, `1/ρ` (geometric distribution); `Infinite` when all values
    /// are distinct.
    pub fn pair_expectation_exact(&self) -> Expectation {
        let (num, den) = self.collision_probability();
        if num.is_zero() {
            Expectation::Infinite
        } else {
            Expectation::Finite { num: den, den: num }
        }
    }

    /// Monte-Carlo estimate of the pair expectation: for each trial, draw
    /// uniform ordered distinct pairs until two elements collide and record
    /// the number of draws, capped at `cap`.  Returns the mean draw count and
    /// how many trials hit the cap.
    pub fn pair_expectation_sampled<R: Rng>(&self, trials: u64, cap: u64, rng: &mut R) -> Sampled {
        let n = self.assignment.len();
        assert!(n >= 2, "need at least two elements to draw pairs");
        let mut total_draws: u128 = 0;
        let mut capped = 0u64;
        for _ in 0..trials {
            let mut draws = 0u64;
            loop {
                draws += 1;
                if draws > cap {
                    draws = cap;
                    capped += 1;
                    break;
                }
                let i = rng.gen_range(0..n);
                let j = {
                    let j = rng.gen_range(0..n - 1);
                    if j >= i {
                        j + 1
                    } else {
                        j
                    }
                };
                if self.assignment[i] == self.assignment[j] {
                    break;
                }
            }
            total_draws += draws as u128;
        }
        Sampled {
            mean: total_draws as f64 / trials as f64,
            capped,
            trials,
        }
    }
}

/// Exact pair-collision expectation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expectation {
    Finite { num: BigInt, den: BigInt },
    Infinite,
}

impl Expectation {
    pub fn to_f64(&self) -> Option<f64> {
        match self {
            Expectation::Finite { num, den } => Some(num.to_f64().unwrap() / den.to_f64().unwrap()),
            Expectation::Infinite => None,
        }
    }

    pub fn floor4(&self) -> Option<Fixed4> {
        match self {
            Expectation::Finite { num, den } => Some(Fixed4::from_ratio(num, den)),
            Expectation::Infinite => None,
        }
    }
}

/// Result of the sampled pair expectation.
#[derive(Debug, Clone, PartialEq)]
pub struct Sampled {
    pub mean: f64,
    pub capped: u64,
    pub trials: u64,
}

/// The six coefficient aggregates of the report tables, over one set of
/// polynomial coefficient statistics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Aggregates {
    /// maximal single coefficient (absolute value)
    pub max_coeff: BigInt,
    /// maximal coefficient sum
    pub max_abs_sum: BigInt,
    /// maximal span (number of coefficient slots)
    pub max_span: u64,
    /// average coefficient sum, floored to 4 decimals
    pub avg_abs_sum: Fixed4,
    /// average span, floored to 4 decimals
    pub avg_span: Fixed4,
    /// maximal per-polynomial average coefficient (abs-sum / span),
    /// floored to 4 decimals
    pub max_avg_coeff: Fixed4,
}

/// Aggregate coefficient statistics; `span` in each entry must be the number
/// of coefficient slots (so it is nonzero for nonzero polynomials).
pub fn aggregate(stats: &[CoeffStats]) -> Aggregates {
    assert!(!stats.is_empty());
    let n = BigInt::from(stats.len());
    let max_coeff = stats.iter().map(|s| s.max_abs.clone()).max().unwrap();
    let max_abs_sum = stats.iter().map(|s| s.abs_sum.clone()).max().unwrap();
    let max_span = stats.iter().map(|s| s.span).max().unwrap();
    let sum_abs: BigInt = stats.iter().map(|s| s.abs_sum.clone()).sum();
    let sum_span: BigInt = stats.iter().map(|s| BigInt::from(s.span)).sum();
    // max of exact fractions abs_sum/span by cross-multiplication
    let best = stats
        .iter()
        .max_by(|a, b| {
            (&a.abs_sum * BigInt::from(b.span)).cmp(&(&b.abs_sum * BigInt::from(a.span)))
        })
        .unwrap();
    Aggregates {
        max_coeff,
        max_abs_sum,
        max_span,
        avg_abs_sum: Fixed4::from_ratio(&sum_abs, &n),
        avg_span: Fixed4::from_ratio(&sum_span, &n),
        max_avg_coeff: Fixed4::from_ratio(&best.abs_sum, &BigInt::from(best.span)),
    }
}

/// Successive quotients `v[i+1]/v[i]` of a growth sequence.
pub fn successive_quotients(values: &[f64]) -> Vec<f64> {
    values.windows(2).map(|w| w[1] / w[0]).collect()
}
