//! Per-input checkers for the double-loop sort's correctness argument and
//! swap bounds, plus the search for an instability witness.
//!
//! Each checker has a `_for` form taking the algorithm to run. The plain
//! form runs [`Algorithm::Icbics`]; the others exist so the failure paths
//! can be exercised against sorts that do not satisfy the property.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::{count_inversions, swap_bounds, SwapBounds};
use crate::sortcore::{icbics_sort, is_non_decreasing, is_non_increasing, Algorithm};
use crate::trace::{EventKind, NoopObserver, Observer, Phase, TraceEvent};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckId {
    Correctness,
    Pi,
    Lemma1,
    Theorem2,
    Theorem3,
    Theorem4,
    Instability,
}

impl CheckId {
    pub const ALL: [CheckId; 7] = [
        CheckId::Correctness,
        CheckId::Pi,
        CheckId::Lemma1,
        CheckId::Theorem2,
        CheckId::Theorem3,
        CheckId::Theorem4,
        CheckId::Instability,
    ];

    pub fn id(self) -> &'static str {
        match self {
            CheckId::Correctness => "correctness",
            CheckId::Pi => "pi",
            CheckId::Lemma1 => "lemma1",
            CheckId::Theorem2 => "theorem2",
            CheckId::Theorem3 => "theorem3",
            CheckId::Theorem4 => "theorem4",
            CheckId::Instability => "instability",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for CheckId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CheckId::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| format!("unknown check `{s}`"))
    }
}

/// Enough to rerun a failed check and see it fail again.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub algorithm: Algorithm,
    pub input: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub event_seq: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer: Option<usize>,
    pub expected: String,
    pub observed: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationVerdict {
    pub check: CheckId,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl VerificationVerdict {
    pub fn pass(check: CheckId) -> Self {
        VerificationVerdict { check, passed: true, counterexample: None }
    }

    pub fn fail(check: CheckId, counterexample: Counterexample) -> Self {
        VerificationVerdict { check, passed: false, counterexample: Some(counterexample) }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("check `{check}` requires distinct elements")]
    DuplicateElements { check: CheckId },
    #[error("check `{check}` requires n >= {min}, got {n}")]
    TooShort { check: CheckId, n: usize, min: usize },
    #[error("instability search bound must be in 2..={max}, got {got}")]
    SearchRange { got: usize, max: usize },
    #[error("check `{0}` is not a per-input check")]
    NotPerInput(CheckId),
}

fn require_distinct(check: CheckId, input: &[i64]) -> Result<(), VerifyError> {
    let mut seen = HashSet::with_capacity(input.len());
    if input.iter().all(|x| seen.insert(*x)) {
        Ok(())
    } else {
        Err(VerifyError::DuplicateElements { check })
    }
}

/// Sorted in the algorithm's direction and a permutation of the input.
pub fn check_correctness(input: &[i64]) -> VerificationVerdict {
    check_correctness_for(Algorithm::Icbics, input)
}

pub fn check_correctness_for(algorithm: Algorithm, input: &[i64]) -> VerificationVerdict {
    let mut output = input.to_vec();
    algorithm.sort(&mut output, &mut NoopObserver);
    let mut expected = input.to_vec();
    expected.sort_unstable();
    if algorithm.is_descending() {
        expected.reverse();
    }
    let ordered = if algorithm.is_descending() { is_non_increasing(&output) } else { is_non_decreasing(&output) };
    if ordered && output == expected {
        VerificationVerdict::pass(CheckId::Correctness)
    } else {
        VerificationVerdict::fail(
            CheckId::Correctness,
            Counterexample {
                algorithm,
                input: input.to_vec(),
                event_seq: None,
                outer: None,
                expected: format!("{expected:?}"),
                observed: format!("{output:?}"),
            },
        )
    }
}

/// After outer iteration `i`, `A[1..=i]` is non-decreasing and `A[i]` is
/// the maximum of the whole array.
pub fn check_pi_invariant(input: &[i64]) -> Result<VerificationVerdict, VerifyError> {
    check_pi_invariant_for(Algorithm::Icbics, input)
}

pub fn check_pi_invariant_for(algorithm: Algorithm, input: &[i64]) -> Result<VerificationVerdict, VerifyError> {
    require_distinct(CheckId::Pi, input)?;

    struct PrefixWatch {
        max: Option<i64>,
        failure: Option<(usize, String, String)>,
    }

    impl Observer<i64> for PrefixWatch {
        fn on_event(&mut self, _: &TraceEvent, _: &[i64]) {}

        fn on_outer_done(&mut self, i: usize, a: &[i64]) {
            if self.failure.is_some() {
                return;
            }
            let prefix = &a[..i];
            if !is_non_decreasing(prefix) {
                self.failure = Some((i, format!("A[1..={i}] non-decreasing"), format!("{prefix:?}")));
            } else if Some(a[i - 1]) != self.max {
                self.failure = Some((
                    i,
                    format!("A[{i}] = max = {}", self.max.unwrap_or_default()),
                    format!("A[{i}] = {}", a[i - 1]),
                ));
            }
        }
    }

    let mut watch = PrefixWatch { max: input.iter().copied().max(), failure: None };
    let mut array = input.to_vec();
    algorithm.sort(&mut array, &mut watch);
    Ok(match watch.failure {
        None => VerificationVerdict::pass(CheckId::Pi),
        Some((i, expected, observed)) => VerificationVerdict::fail(
            CheckId::Pi,
            Counterexample { algorithm, input: input.to_vec(), event_seq: None, outer: Some(i), expected, observed },
        ),
    })
}

/// Inversion bookkeeping gathered while checking the per-swap deltas.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma1Outcome {
    pub verdict: VerificationVerdict,
    pub initial_inversions: u64,
    pub final_inversions: u64,
    pub selection_swaps: u64,
    pub insertion_swaps: u64,
}

/// Every selection-phase swap adds exactly one inversion and every
/// insertion-phase swap removes exactly one.
pub fn check_lemma1(input: &[i64]) -> Result<VerificationVerdict, VerifyError> {
    check_lemma1_detailed(Algorithm::Icbics, input).map(|o| o.verdict)
}

/// Also checks the consequence for the whole run: the array ends with no
/// inversions, so insertion swaps = initial inversions + selection swaps.
pub fn check_lemma1_detailed(algorithm: Algorithm, input: &[i64]) -> Result<Lemma1Outcome, VerifyError> {
    require_distinct(CheckId::Lemma1, input)?;

    struct DeltaWatch {
        inversions: u64,
        selection_swaps: u64,
        insertion_swaps: u64,
        failure: Option<(u64, String, String)>,
    }

    impl Observer<i64> for DeltaWatch {
        fn on_event(&mut self, event: &TraceEvent, a: &[i64]) {
            if event.kind != EventKind::Swap {
                return;
            }
            let now = count_inversions(a);
            let delta = now as i64 - self.inversions as i64;
            self.inversions = now;
            let expected = match event.phase {
                Phase::Selection => {
                    self.selection_swaps += 1;
                    Some(1)
                }
                Phase::Insertion => {
                    self.insertion_swaps += 1;
                    Some(-1)
                }
                Phase::NotApplicable => None,
            };
            if self.failure.is_none() && expected != Some(delta) {
                let want = match expected {
                    Some(d) => format!("delta {d:+} in {:?} phase", event.phase),
                    None => "swap in selection or insertion phase".to_string(),
                };
                self.failure = Some((event.seq, want, format!("delta {delta:+}")));
            }
        }
    }

    let initial = count_inversions(input);
    let mut watch = DeltaWatch { inversions: initial, selection_swaps: 0, insertion_swaps: 0, failure: None };
    let mut array = input.to_vec();
    algorithm.sort(&mut array, &mut watch);

    let cx = |event_seq, expected, observed| Counterexample {
        algorithm,
        input: input.to_vec(),
        event_seq,
        outer: None,
        expected,
        observed,
    };
    let verdict = if let Some((seq, expected, observed)) = watch.failure {
        VerificationVerdict::fail(CheckId::Lemma1, cx(Some(seq), expected, observed))
    } else if watch.inversions != 0 || watch.insertion_swaps != initial + watch.selection_swaps {
        VerificationVerdict::fail(
            CheckId::Lemma1,
            cx(
                None,
                format!("0 final inversions, insertion swaps = {}", initial + watch.selection_swaps),
                format!("{} final inversions, insertion swaps = {}", watch.inversions, watch.insertion_swaps),
            ),
        )
    } else {
        VerificationVerdict::pass(CheckId::Lemma1)
    };
    Ok(Lemma1Outcome {
        verdict,
        initial_inversions: initial,
        final_inversions: watch.inversions,
        selection_swaps: watch.selection_swaps,
        insertion_swaps: watch.insertion_swaps,
    })
}

/// Swap count of one run against all three bounds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsCheck {
    pub inversions: u64,
    pub swaps: u64,
    pub bounds: SwapBounds,
    /// One verdict each for `theorem2`, `theorem3`, `theorem4`, in that order.
    pub verdicts: [VerificationVerdict; 3],
}

impl BoundsCheck {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn verdict(&self, check: CheckId) -> Option<&VerificationVerdict> {
        self.verdicts.iter().find(|v| v.check == check)
    }

    pub fn first_failure(&self) -> Option<&VerificationVerdict> {
        self.verdicts.iter().find(|v| !v.passed)
    }
}

/// `max(0, n-1) <= swaps <= min(I_max + 1, I + 2(n-1))`.
pub fn check_theorem_bounds(input: &[i64]) -> Result<BoundsCheck, VerifyError> {
    check_theorem_bounds_for(Algorithm::Icbics, input)
}

pub fn check_theorem_bounds_for(algorithm: Algorithm, input: &[i64]) -> Result<BoundsCheck, VerifyError> {
    require_distinct(CheckId::Theorem2, input)?;
    if input.len() < 2 {
        return Err(VerifyError::TooShort { check: CheckId::Theorem2, n: input.len(), min: 2 });
    }
    let inversions = count_inversions(input);
    let bounds = swap_bounds(input.len(), inversions);
    let mut array = input.to_vec();
    let swaps = algorithm.sort(&mut array, &mut NoopObserver).swaps;

    let judge = |check, ok: bool, expected: String| {
        if ok {
            VerificationVerdict::pass(check)
        } else {
            VerificationVerdict::fail(
                check,
                Counterexample {
                    algorithm,
                    input: input.to_vec(),
                    event_seq: None,
                    outer: None,
                    expected,
                    observed: format!("swaps = {swaps} (I = {inversions})"),
                },
            )
        }
    };
    let verdicts = [
        judge(
            CheckId::Theorem2,
            swaps <= bounds.max_inversions_upper,
            format!("swaps <= I_max + 1 = {}", bounds.max_inversions_upper),
        ),
        judge(
            CheckId::Theorem3,
            swaps <= bounds.adaptive_upper,
            format!("swaps <= I + 2(n-1) = {}", bounds.adaptive_upper),
        ),
        judge(CheckId::Theorem4, swaps >= bounds.lower, format!("swaps >= n-1 = {}", bounds.lower)),
    ];
    Ok(BoundsCheck { inversions, swaps, bounds, verdicts })
}

/// Reruns a per-input check by id, as needed to replay a counterexample.
pub fn run_check(check: CheckId, algorithm: Algorithm, input: &[i64]) -> Result<VerificationVerdict, VerifyError> {
    match check {
        CheckId::Correctness => Ok(check_correctness_for(algorithm, input)),
        CheckId::Pi => check_pi_invariant_for(algorithm, input),
        CheckId::Lemma1 => check_lemma1_detailed(algorithm, input).map(|o| o.verdict),
        CheckId::Theorem2 | CheckId::Theorem3 | CheckId::Theorem4 => {
            let bounds = check_theorem_bounds_for(algorithm, input)?;
            Ok(bounds.verdict(check).cloned().expect("all three bound verdicts are present"))
        }
        CheckId::Instability => Err(VerifyError::NotPerInput(check)),
    }
}

/// A key carrying a label. Ordering and equality look at the key only, so
/// a sort cannot tell two equal keys apart.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Tagged {
    pub key: i64,
    pub tag: char,
}

impl Tagged {
    pub fn new(key: i64, tag: char) -> Self {
        Tagged { key, tag }
    }
}

impl PartialEq for Tagged {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for Tagged {}

impl PartialOrd for Tagged {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Tagged {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstabilityWitness {
    pub input: Vec<Tagged>,
    pub output: Vec<Tagged>,
    /// 1-based input positions of two equal keys that come out reversed.
    pub violated_pair: [usize; 2],
}

impl InstabilityWitness {
    pub fn tags(&self) -> (char, char) {
        let [p, q] = self.violated_pair;
        (self.input[p - 1].tag, self.input[q - 1].tag)
    }
}

/// Runs the double-loop sort on `input` and reports the first pair of equal
/// keys (by input position) whose tags leave in reversed order.
///
/// Tags must be distinct.
pub fn check_instability(input: &[Tagged]) -> Option<InstabilityWitness> {
    let mut output = input.to_vec();
    icbics_sort(&mut output, &mut NoopObserver);
    let out_pos = |tag: char| output.iter().position(|t| t.tag == tag).expect("tags survive sorting");
    for p in 0..input.len() {
        for q in p + 1..input.len() {
            if input[p].key == input[q].key && out_pos(input[p].tag) > out_pos(input[q].tag) {
                return Some(InstabilityWitness {
                    input: input.to_vec(),
                    output: output.clone(),
                    violated_pair: [p + 1, q + 1],
                });
            }
        }
    }
    None
}

pub const MAX_WITNESS_SEARCH: usize = 10;

/// Searches lengths `2..=max_n` for an input the double-loop sort handles
/// unstably.
///
/// Keys range over `{1, 2, 3}` in lexicographic order within each length,
/// skipping sequences without a repeated key; position `p` gets tag
/// `'a' + p`. The first witness in that order is returned.
pub fn find_instability_witness(max_n: usize) -> Result<Option<InstabilityWitness>, VerifyError> {
    if !(2..=MAX_WITNESS_SEARCH).contains(&max_n) {
        return Err(VerifyError::SearchRange { got: max_n, max: MAX_WITNESS_SEARCH });
    }
    const KEYS: [i64; 3] = [1, 2, 3];
    for n in 2..=max_n {
        let mut digits = vec![0usize; n];
        loop {
            let keys: Vec<i64> = digits.iter().map(|&d| KEYS[d]).collect();
            let mut seen = HashSet::new();
            if !keys.iter().all(|k| seen.insert(*k)) {
                let input: Vec<Tagged> =
                    keys.iter().enumerate().map(|(p, &k)| Tagged::new(k, (b'a' + p as u8) as char)).collect();
                if let Some(w) = check_instability(&input) {
                    return Ok(Some(w));
                }
            }
            // Odometer increment, last position fastest.
            let mut pos = n;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < KEYS.len() {
                    break;
                }
                digits[pos] = 0;
            }
            if digits.iter().all(|&d| d == 0) {
                break;
            }
        }
    }
    Ok(None)
}
