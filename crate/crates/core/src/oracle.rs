//! Enumeration over permutations of `1..=n` to find the extreme swap counts
//! of the double-loop sort and the exact inputs attaining them.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::{count_inversions, swap_bounds};
use crate::sortcore::{icbics_sort, Algorithm};
use crate::trace::NoopObserver;
use crate::verify::{CheckId, Counterexample};

pub const MAX_ENUMERATION_N: usize = 10;
pub const MAX_EXHAUSTIVE_N: usize = 8;

/// Name recorded in random-mode summaries.
pub const RANDOM_PERMUTATION_METHOD: &str = "fisher-yates/chacha8";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("n = {n} outside the allowed range {min}..={max}")]
    OutOfRange { n: usize, min: usize, max: usize },
    #[error("at least one sample is required")]
    NoSamples,
}

/// Lexicographic permutations of `1..=n`.
#[derive(Debug, Clone)]
pub struct Permutations {
    next: Option<Vec<i64>>,
}

impl Iterator for Permutations {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_permutation(&mut succ) {
            self.next = Some(succ);
        }
        Some(current)
    }
}

/// Rearranges into the lexicographic successor; false at the last one.
fn next_permutation(a: &mut [i64]) -> bool {
    let Some(pivot) = a.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let succ = a.iter().rposition(|x| *x > a[pivot]).expect("a larger element follows the pivot");
    a.swap(pivot, succ);
    a[pivot + 1..].reverse();
    true
}

pub fn enumerate_permutations(n: usize) -> Result<Permutations, OracleError> {
    if n > MAX_ENUMERATION_N {
        return Err(OracleError::OutOfRange { n, min: 0, max: MAX_ENUMERATION_N });
    }
    Ok(Permutations { next: Some((1..=n as i64).collect()) })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum OracleMode {
    Exhaustive,
    Random { seed: u64, method: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub n: usize,
    #[serde(flatten)]
    pub mode: OracleMode,
    pub inputs_examined: u64,
    pub max_swaps: u64,
    pub argmax_inputs: Vec<Vec<i64>>,
    pub min_swaps: u64,
    pub argmin_inputs: Vec<Vec<i64>>,
    pub bound_violations: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<Counterexample>,
}

/// Running max/min with attaining sets.
///
/// [`merge`](Self::merge) gives the same result whatever order partial
/// accumulators are combined in, so enumeration can be split across workers.
#[derive(Debug, Clone, Default)]
pub struct OracleAccumulator {
    inputs_examined: u64,
    max: Option<(u64, BTreeSet<Vec<i64>>)>,
    min: Option<(u64, BTreeSet<Vec<i64>>)>,
    bound_violations: u64,
    // Smallest violating input wins, keeping merges deterministic.
    first_violation: Option<Counterexample>,
}

impl OracleAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Runs the sort on `input`, checks the three bounds and records it.
    pub fn examine(&mut self, input: &[i64]) {
        let mut array = input.to_vec();
        let swaps = icbics_sort(&mut array, &mut NoopObserver).swaps;
        let inversions = count_inversions(input);
        let bounds = swap_bounds(input.len(), inversions);
        let violated = if swaps > bounds.max_inversions_upper {
            Some((CheckId::Theorem2, format!("swaps <= {}", bounds.max_inversions_upper)))
        } else if swaps > bounds.adaptive_upper {
            Some((CheckId::Theorem3, format!("swaps <= {}", bounds.adaptive_upper)))
        } else if swaps < bounds.lower {
            Some((CheckId::Theorem4, format!("swaps >= {}", bounds.lower)))
        } else {
            None
        };
        let violation = violated.map(|(check, expected)| Counterexample {
            algorithm: Algorithm::Icbics,
            input: input.to_vec(),
            event_seq: None,
            outer: None,
            expected: format!("{check}: {expected}"),
            observed: format!("swaps = {swaps} (I = {inversions})"),
        });
        self.record(input, swaps, violation);
    }

    /// Records an already measured swap count.
    pub fn record(&mut self, input: &[i64], swaps: u64, violation: Option<Counterexample>) {
        self.inputs_examined += 1;
        let single = || (swaps, BTreeSet::from([input.to_vec()]));
        absorb(&mut self.max, single(), |a, b| a > b);
        absorb(&mut self.min, single(), |a, b| a < b);
        if let Some(v) = violation {
            self.bound_violations += 1;
            keep_smallest(&mut self.first_violation, v);
        }
    }

    pub fn merge(&mut self, other: OracleAccumulator) {
        self.inputs_examined += other.inputs_examined;
        if let Some(m) = other.max {
            absorb(&mut self.max, m, |a, b| a > b);
        }
        if let Some(m) = other.min {
            absorb(&mut self.min, m, |a, b| a < b);
        }
        self.bound_violations += other.bound_violations;
        if let Some(v) = other.first_violation {
            keep_smallest(&mut self.first_violation, v);
        }
    }

    pub fn finish(self, n: usize, mode: OracleMode) -> OracleSummary {
        let (max_swaps, argmax) = self.max.unwrap_or_default();
        let (min_swaps, argmin) = self.min.unwrap_or_default();
        OracleSummary {
            n,
            mode,
            inputs_examined: self.inputs_examined,
            max_swaps,
            argmax_inputs: argmax.into_iter().collect(),
            min_swaps,
            argmin_inputs: argmin.into_iter().collect(),
            bound_violations: self.bound_violations,
            first_violation: self.first_violation,
        }
    }
}

fn absorb(
    slot: &mut Option<(u64, BTreeSet<Vec<i64>>)>,
    incoming: (u64, BTreeSet<Vec<i64>>),
    better: impl Fn(u64, u64) -> bool,
) {
    match slot {
        None => *slot = Some(incoming),
        Some((value, set)) => {
            if better(incoming.0, *value) {
                *slot = Some(incoming);
            } else if incoming.0 == *value {
                set.extend(incoming.1);
            }
        }
    }
}

fn keep_smallest(slot: &mut Option<Counterexample>, candidate: Counterexample) {
    if slot.as_ref().is_none_or(|cur| candidate.input < cur.input) {
        *slot = Some(candidate);
    }
}

/// Runs every permutation of `1..=n`, `2 <= n <= 8`.
pub fn exhaustive_summary(n: usize) -> Result<OracleSummary, OracleError> {
    if !(2..=MAX_EXHAUSTIVE_N).contains(&n) {
        return Err(OracleError::OutOfRange { n, min: 2, max: MAX_EXHAUSTIVE_N });
    }
    let mut acc = OracleAccumulator::new();
    for p in enumerate_permutations(n)? {
        acc.examine(&p);
    }
    Ok(acc.finish(n, OracleMode::Exhaustive))
}

/// Uniform random permutation of `1..=n`.
pub fn random_permutation<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<i64> {
    let mut p: Vec<i64> = (1..=n as i64).collect();
    p.shuffle(rng);
    p
}

/// Checks `samples` seeded random permutations of `1..=n`.
pub fn random_suite(n: usize, samples: u64, seed: u64) -> Result<OracleSummary, OracleError> {
    if n < 2 {
        return Err(OracleError::OutOfRange { n, min: 2, max: usize::MAX });
    }
    if samples == 0 {
        return Err(OracleError::NoSamples);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = OracleAccumulator::new();
    for _ in 0..samples {
        acc.examine(&random_permutation(n, &mut rng));
    }
    Ok(acc.finish(n, OracleMode::Random { seed, method: RANDOM_PERMUTATION_METHOD.to_string() }))
}

/// `[n-1, n, n-2, n-3, ..., 1]` and `[n-2, n-1, n, n-3, ..., 1]`, the two
/// inputs that make `I_max + 1` swaps (`n >= 3`).
pub fn theorem2_extremal_inputs(n: usize) -> [Vec<i64>; 2] {
    assert!(n >= 3, "both patterns need n >= 3");
    let n = n as i64;
    let first = [n - 1, n].into_iter().chain((1..=n - 2).rev()).collect();
    let second = [n - 2, n - 1, n].into_iter().chain((1..=n - 3).rev()).collect();
    [first, second]
}

/// `[n, 1, 2, ..., n-1]`, the only input making `n - 1` swaps.
pub fn theorem4_extremal_input(n: usize) -> Vec<i64> {
    let n = n as i64;
    std::iter::once(n).chain(1..n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_examples() {
        let zero: Vec<_> = enumerate_permutations(0).unwrap().collect();
        assert_eq!(zero, vec![Vec::<i64>::new()]);
        let three: Vec<_> = enumerate_permutations(3).unwrap().collect();
        assert_eq!(three.len(), 6);
        assert_eq!(three.first().unwrap(), &vec![1, 2, 3]);
        assert_eq!(three.last().unwrap(), &vec![3, 2, 1]);
        assert!(three.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(enumerate_permutations(8).unwrap().count(), 40320);
        assert!(enumerate_permutations(11).is_err());
    }

    #[test]
    fn enumeration_yields_distinct_permutations() {
        let all: BTreeSet<_> = enumerate_permutations(6).unwrap().collect();
        assert_eq!(all.len(), 720);
        assert!(all.iter().all(|p| {
            let mut s = p.clone();
            s.sort_unstable();
            s == (1..=6).collect::<Vec<_>>()
        }));
    }

    #[test]
    fn summary_n3() {
        let s = exhaustive_summary(3).unwrap();
        assert_eq!(s.inputs_examined, 6);
        assert_eq!(s.max_swaps, 4);
        assert_eq!(s.argmax_inputs, vec![vec![1, 2, 3], vec![2, 3, 1]]);
        assert_eq!(s.min_swaps, 2);
        assert_eq!(s.argmin_inputs, vec![vec![3, 1, 2]]);
        assert_eq!(s.bound_violations, 0);
    }

    #[test]
    fn summary_n2() {
        let s = exhaustive_summary(2).unwrap();
        assert_eq!((s.max_swaps, s.argmax_inputs.clone()), (2, vec![vec![1, 2]]));
        assert_eq!((s.min_swaps, s.argmin_inputs.clone()), (1, vec![vec![2, 1]]));
    }

    #[test]
    fn summary_range_guard() {
        assert!(exhaustive_summary(1).is_err());
        assert!(exhaustive_summary(9).is_err());
    }

    #[test]
    fn extremal_patterns() {
        assert_eq!(theorem2_extremal_inputs(3), [vec![2, 3, 1], vec![1, 2, 3]]);
        assert_eq!(theorem2_extremal_inputs(5), [vec![4, 5, 3, 2, 1], vec![3, 4, 5, 2, 1]]);
        assert_eq!(theorem4_extremal_input(4), vec![4, 1, 2, 3]);
    }

    #[test]
    fn random_suite_small() {
        let s = random_suite(2, 1, 99).unwrap();
        assert_eq!((s.inputs_examined, s.bound_violations), (1, 0));
        assert!(random_suite(1, 5, 0).is_err());
        assert_eq!(random_suite(4, 0, 0), Err(OracleError::NoSamples));
    }

    #[test]
    fn random_suite_is_reproducible() {
        assert_eq!(random_suite(16, 50, 3).unwrap(), random_suite(16, 50, 3).unwrap());
    }

    #[test]
    fn merge_is_order_insensitive() {
        let perms: Vec<_> = enumerate_permutations(5).unwrap().collect();
        let chunks: Vec<OracleAccumulator> = perms
            .chunks(17)
            .map(|c| {
                let mut a = OracleAccumulator::new();
                c.iter().for_each(|p| a.examine(p));
                a
            })
            .collect();
        let mut forward = OracleAccumulator::new();
        chunks.iter().cloned().for_each(|c| forward.merge(c));
        let mut backward = OracleAccumulator::new();
        chunks.into_iter().rev().for_each(|c| backward.merge(c));
        let whole = exhaustive_summary(5).unwrap();
        assert_eq!(forward.finish(5, OracleMode::Exhaustive), whole);
        assert_eq!(backward.finish(5, OracleMode::Exhaustive), whole);
    }

    #[test]
    fn violations_are_counted() {
        let mut acc = OracleAccumulator::new();
        let cx = |input: Vec<i64>| Counterexample {
            algorithm: Algorithm::Icbics,
            input,
            event_seq: None,
            outer: None,
            expected: String::new(),
            observed: String::new(),
        };
        acc.record(&[2, 1], 9, Some(cx(vec![2, 1])));
        acc.record(&[1, 2], 9, Some(cx(vec![1, 2])));
        let s = acc.finish(2, OracleMode::Exhaustive);
        assert_eq!(s.bound_violations, 2);
        assert_eq!(s.first_violation.unwrap().input, vec![1, 2]);
    }
}
