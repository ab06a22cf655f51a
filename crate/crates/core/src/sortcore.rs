//! The six instrumented sorts.
//!
//! All of them work in place on a slice of any `Ord` key and report every
//! comparison and swap to an [`Observer`]. Slot `k` of the slice is position
//! `k + 1` in trace events.

use std::fmt;
use std::str::FromStr;

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::trace::{EventKind, NoopObserver, Observer, Phase, TraceEvent};

/// Operation totals of one run.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct Counts {
    pub comparisons: u64,
    pub swaps: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "icbics")]
    Icbics,
    #[serde(rename = "exchange")]
    Exchange,
    #[serde(rename = "improved")]
    Improved,
    #[serde(rename = "icbics-desc-ineq")]
    IcbicsDescIneq,
    #[serde(rename = "icbics-desc-loops")]
    IcbicsDescLoops,
    #[serde(rename = "std-insertion")]
    StdInsertion,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Icbics,
        Algorithm::Exchange,
        Algorithm::Improved,
        Algorithm::IcbicsDescIneq,
        Algorithm::IcbicsDescLoops,
        Algorithm::StdInsertion,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Algorithm::Icbics => "icbics",
            Algorithm::Exchange => "exchange",
            Algorithm::Improved => "improved",
            Algorithm::IcbicsDescIneq => "icbics-desc-ineq",
            Algorithm::IcbicsDescLoops => "icbics-desc-loops",
            Algorithm::StdInsertion => "std-insertion",
        }
    }

    pub fn is_descending(self) -> bool {
        matches!(self, Algorithm::IcbicsDescIneq | Algorithm::IcbicsDescLoops)
    }

    pub fn sort<T: Ord, O: Observer<T> + ?Sized>(self, array: &mut [T], observer: &mut O) -> Counts {
        match self {
            Algorithm::Icbics => icbics_sort(array, observer),
            Algorithm::Exchange => exchange_sort(array, observer),
            Algorithm::Improved => improved_sort(array, observer),
            Algorithm::IcbicsDescIneq => icbics_desc_ineq(array, observer),
            Algorithm::IcbicsDescLoops => icbics_desc_loopswap(array, observer),
            Algorithm::StdInsertion => std_insertion_sort(array, observer),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown algorithm `{0}` (expected one of: icbics, exchange, improved, icbics-desc-ineq, icbics-desc-loops, std-insertion)")]
pub struct UnknownAlgorithm(pub String);

impl FromStr for Algorithm {
    type Err = UnknownAlgorithm;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.id() == s)
            .ok_or_else(|| UnknownAlgorithm(s.to_string()))
    }
}

/// Totals and result of sorting one input.
///
/// Serialized with the key `moves` instead of `swaps` for the standard
/// insertion sort, whose shifts are only modeled as adjacent exchanges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortReport {
    pub algorithm: Algorithm,
    pub n: usize,
    pub comparisons: u64,
    pub swaps: u64,
    pub output: Vec<i64>,
}

impl SortReport {
    /// Sorts a copy of `input` and reports to `observer`.
    pub fn run<O: Observer<i64> + ?Sized>(algorithm: Algorithm, input: &[i64], observer: &mut O) -> Self {
        let mut output = input.to_vec();
        let counts = algorithm.sort(&mut output, observer);
        SortReport {
            algorithm,
            n: input.len(),
            comparisons: counts.comparisons,
            swaps: counts.swaps,
            output,
        }
    }

    pub fn run_silent(algorithm: Algorithm, input: &[i64]) -> Self {
        Self::run(algorithm, input, &mut NoopObserver)
    }

    /// Whether `output` is in the order the algorithm promises.
    pub fn sorted(&self) -> bool {
        if self.algorithm.is_descending() {
            is_non_increasing(&self.output)
        } else {
            is_non_decreasing(&self.output)
        }
    }
}

impl Serialize for SortReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("SortReport", 6)?;
        s.serialize_field("algorithm", &self.algorithm)?;
        s.serialize_field("n", &self.n)?;
        s.serialize_field("comparisons", &self.comparisons)?;
        if self.algorithm == Algorithm::StdInsertion {
            s.serialize_field("moves", &self.swaps)?;
        } else {
            s.serialize_field("swaps", &self.swaps)?;
        }
        s.serialize_field("output", &self.output)?;
        s.serialize_field("sorted", &self.sorted())?;
        s.end()
    }
}

pub fn is_non_decreasing<T: Ord>(a: &[T]) -> bool {
    a.windows(2).all(|w| w[0] <= w[1])
}

pub fn is_non_increasing<T: Ord>(a: &[T]) -> bool {
    a.windows(2).all(|w| w[0] >= w[1])
}

/// Wraps the array and observer, numbering events and keeping totals.
struct Instrumented<'a, T, O: ?Sized> {
    array: &'a mut [T],
    observer: &'a mut O,
    seq: u64,
    counts: Counts,
}

impl<'a, T: Ord, O: Observer<T> + ?Sized> Instrumented<'a, T, O> {
    fn new(array: &'a mut [T], observer: &'a mut O) -> Self {
        Instrumented { array, observer, seq: 0, counts: Counts::default() }
    }

    fn emit(&mut self, kind: EventKind, i: usize, j: usize, phase: Phase) {
        let event = TraceEvent { seq: self.seq, kind, i, j, phase };
        self.seq += 1;
        self.observer.on_event(&event, self.array);
    }

    /// Compares `A[i]` against `A[j]` (1-based) and reports it.
    fn compare(&mut self, i: usize, j: usize, phase: Phase) -> std::cmp::Ordering {
        let ord = self.array[i - 1].cmp(&self.array[j - 1]);
        self.counts.comparisons += 1;
        self.emit(EventKind::Compare, i, j, phase);
        ord
    }

    /// Compares 0-based slots `a` and `b` but reports positions `(i, j)`.
    fn compare_slots(&mut self, a: usize, b: usize, i: usize, j: usize) -> std::cmp::Ordering {
        let ord = self.array[a].cmp(&self.array[b]);
        self.counts.comparisons += 1;
        self.emit(EventKind::Compare, i, j, Phase::NotApplicable);
        ord
    }

    fn swap(&mut self, i: usize, j: usize, phase: Phase) {
        self.array.swap(i - 1, j - 1);
        self.counts.swaps += 1;
        self.emit(EventKind::Swap, i, j, phase);
    }

    fn outer_done(&mut self, i: usize) {
        self.observer.on_outer_done(i, self.array);
    }

    fn len(&self) -> usize {
        self.array.len()
    }
}

fn icbics_phase(i: usize) -> Phase {
    if i == 1 {
        Phase::Selection
    } else {
        Phase::Insertion
    }
}

/// Both loops run over the whole array; swap whenever `A[i] < A[j]`.
///
/// Sorts non-decreasing with exactly `n²` comparisons, self-comparisons
/// included. Equal keys are never swapped.
pub fn icbics_sort<T: Ord, O: Observer<T> + ?Sized>(array: &mut [T], observer: &mut O) -> Counts {
    let mut run = Instrumented::new(array, observer);
    let n = run.len();
    for i in 1..=n {
        let phase = icbics_phase(i);
        for j in 1..=n {
            if run.compare(i, j, phase).is_lt() {
                run.swap(i, j, phase);
            }
        }
        run.outer_done(i);
    }
    run.counts
}

/// Classic exchange sort: `j` from `i + 1`, swap when `A[i] > A[j]`.
pub fn exchange_sort<T: Ord, O: Observer<T> + ?Sized>(array: &mut [T], observer: &mut O) -> Counts {
    let mut run = Instrumented::new(array, observer);
    let n = run.len();
    for i in 1..=n {
        for j in i + 1..=n {
            if run.compare(i, j, Phase::NotApplicable).is_gt() {
                run.swap(i, j, Phase::NotApplicable);
            }
        }
        run.outer_done(i);
    }
    run.counts
}

/// The double loop with the dead iterations removed: `i` from 2, `j < i`.
pub fn improved_sort<T: Ord, O: Observer<T> + ?Sized>(array: &mut [T], observer: &mut O) -> Counts {
    let mut run = Instrumented::new(array, observer);
    let n = run.len();
    for i in 2..=n {
        for j in 1..i {
            if run.compare(i, j, Phase::NotApplicable).is_lt() {
                run.swap(i, j, Phase::NotApplicable);
            }
        }
        run.outer_done(i);
    }
    run.counts
}

/// Non-increasing order by flipping the test to `A[i] > A[j]`.
pub fn icbics_desc_ineq<T: Ord, O: Observer<T> + ?Sized>(array: &mut [T], observer: &mut O) -> Counts {
    let mut run = Instrumented::new(array, observer);
    let n = run.len();
    for i in 1..=n {
        for j in 1..=n {
            if run.compare(i, j, Phase::NotApplicable).is_gt() {
                run.swap(i, j, Phase::NotApplicable);
            }
        }
        run.outer_done(i);
    }
    run.counts
}

/// Non-increasing order by keeping `A[i] < A[j]` but nesting `i` inside `j`.
///
/// Events still name the pseudocode variables, so `i` is the inner index
/// here and `on_outer_done` receives `j`.
pub fn icbics_desc_loopswap<T: Ord, O: Observer<T> + ?Sized>(array: &mut [T], observer: &mut O) -> Counts {
    let mut run = Instrumented::new(array, observer);
    let n = run.len();
    for j in 1..=n {
        for i in 1..=n {
            if run.compare(i, j, Phase::NotApplicable).is_lt() {
                run.swap(i, j, Phase::NotApplicable);
            }
        }
        run.outer_done(j);
    }
    run.counts
}

/// Textbook insertion sort scanning back from the end of the sorted prefix.
///
/// Every move is reported as a swap of positions `(k - 1, k)`, preceded by
/// the compare of the same pair, exactly as if the element were carried down
/// by adjacent exchanges. Stops at the first element not greater than the one
/// being inserted, so it is stable.
///
/// If the observer does not inspect the array, the insertion point is found
/// first and the block is shifted in one move; events and totals are the
/// same either way.
pub fn std_insertion_sort<T: Ord, O: Observer<T> + ?Sized>(array: &mut [T], observer: &mut O) -> Counts {
    let shift = !observer.inspects_array();
    let mut run = Instrumented::new(array, observer);
    let n = run.len();
    for i in 2..=n {
        let mut k = i;
        if shift {
            // The inserted element stays at slot i - 1 until the rotate.
            while k > 1 && run.compare_slots(k - 2, i - 1, k - 1, k).is_gt() {
                run.counts.swaps += 1;
                run.emit(EventKind::Swap, k - 1, k, Phase::NotApplicable);
                k -= 1;
            }
            run.array[k - 1..i].rotate_right(1);
        } else {
            while k > 1 && run.compare(k - 1, k, Phase::NotApplicable).is_gt() {
                run.swap(k - 1, k, Phase::NotApplicable);
                k -= 1;
            }
        }
        run.outer_done(i);
    }
    run.counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::TraceRecorder;

    fn run(algo: Algorithm, input: &[i64]) -> SortReport {
        SortReport::run_silent(algo, input)
    }

    #[test]
    fn icbics_examples() {
        let r = run(Algorithm::Icbics, &[3, 1, 2]);
        assert_eq!((r.output.as_slice(), r.swaps), (&[1, 2, 3][..], 2));
        let r = run(Algorithm::Icbics, &[1]);
        assert_eq!((r.output.as_slice(), r.comparisons, r.swaps), (&[1][..], 1, 0));
        let r = run(Algorithm::Icbics, &[2, 3, 1]);
        assert_eq!((r.output.as_slice(), r.comparisons, r.swaps), (&[1, 2, 3][..], 9, 4));
        let r = run(Algorithm::Icbics, &[1, 2, 3]);
        assert_eq!((r.output.as_slice(), r.swaps), (&[1, 2, 3][..], 4));
    }

    #[test]
    fn exchange_examples() {
        let r = run(Algorithm::Exchange, &[3, 2, 1]);
        assert_eq!((r.output.as_slice(), r.comparisons), (&[1, 2, 3][..], 3));
        let r = run(Algorithm::Exchange, &[]);
        assert_eq!((r.output.len(), r.comparisons, r.swaps), (0, 0, 0));
        let r = run(Algorithm::Exchange, &[2, 3, 1]);
        assert_eq!((r.output.as_slice(), r.swaps), (&[1, 2, 3][..], 2));
    }

    #[test]
    fn improved_examples() {
        assert_eq!(run(Algorithm::Improved, &[1, 2, 3]).swaps, 0);
        let r = run(Algorithm::Improved, &[3, 2, 1]);
        assert_eq!((r.output.as_slice(), r.comparisons), (&[1, 2, 3][..], 3));
        let r = run(Algorithm::Improved, &[2, 3, 1]);
        assert_eq!((r.output.as_slice(), r.swaps), (&[1, 2, 3][..], 2));
    }

    #[test]
    fn descending_examples() {
        assert_eq!(run(Algorithm::IcbicsDescIneq, &[1, 2, 3]).output, vec![3, 2, 1]);
        assert_eq!(run(Algorithm::IcbicsDescIneq, &[5]).output, vec![5]);
        let r = run(Algorithm::IcbicsDescIneq, &[2, 1, 3]);
        assert_eq!((r.output.as_slice(), r.comparisons, r.swaps), (&[3, 2, 1][..], 9, 4));

        assert_eq!(run(Algorithm::IcbicsDescLoops, &[1, 2, 3]).output, vec![3, 2, 1]);
        assert!(run(Algorithm::IcbicsDescLoops, &[]).output.is_empty());
        let r = run(Algorithm::IcbicsDescLoops, &[3, 1, 2]);
        assert_eq!((r.output.as_slice(), r.comparisons, r.swaps), (&[3, 2, 1][..], 9, 3));
    }

    #[test]
    fn std_insertion_examples() {
        let r = run(Algorithm::StdInsertion, &[1, 2, 3]);
        assert_eq!((r.comparisons, r.swaps), (2, 0));
        assert_eq!(run(Algorithm::StdInsertion, &[3, 2, 1]).output, vec![1, 2, 3]);
        let r = run(Algorithm::StdInsertion, &[2, 3, 1]);
        assert_eq!((r.output.as_slice(), r.comparisons, r.swaps), (&[1, 2, 3][..], 3, 2));
    }

    #[test]
    fn icbics_phases_follow_outer_index() {
        let mut rec = TraceRecorder::new();
        let mut a = vec![4, 1, 3, 2];
        icbics_sort(&mut a, &mut rec);
        for e in &rec.events {
            let want = if e.i == 1 { Phase::Selection } else { Phase::Insertion };
            assert_eq!(e.phase, want, "{e:?}");
        }
        let mut rec = TraceRecorder::new();
        exchange_sort(&mut [4, 1, 3, 2], &mut rec);
        assert!(rec.events.iter().all(|e| e.phase == Phase::NotApplicable));
    }

    #[test]
    fn equal_keys_never_swap() {
        for algo in Algorithm::ALL {
            assert_eq!(run(algo, &[7, 7, 7, 7]).swaps, 0, "{algo}");
        }
    }

    #[test]
    fn algorithm_ids_round_trip() {
        for algo in Algorithm::ALL {
            assert_eq!(algo.id().parse::<Algorithm>().unwrap(), algo);
            assert_eq!(serde_json::to_string(&algo).unwrap(), format!("\"{}\"", algo.id()));
        }
        assert!("bogo".parse::<Algorithm>().is_err());
    }

    #[test]
    fn report_json_labels_moves_for_insertion_sort() {
        let v = serde_json::to_value(run(Algorithm::StdInsertion, &[2, 1])).unwrap();
        assert_eq!(v["moves"], 1);
        assert!(v.get("swaps").is_none());
        let v = serde_json::to_value(run(Algorithm::Icbics, &[2, 3, 1])).unwrap();
        assert_eq!(v["swaps"], 4);
        assert_eq!(v["comparisons"], 9);
        assert_eq!(v["sorted"], true);
    }

    #[test]
    fn insertion_shift_path_matches_swap_path() {
        struct Inspecting(TraceRecorder, Vec<Vec<i64>>);
        impl Observer<i64> for Inspecting {
            fn on_event(&mut self, e: &TraceEvent, a: &[i64]) {
                Observer::<i64>::on_event(&mut self.0, e, a);
            }
            fn on_outer_done(&mut self, _: usize, a: &[i64]) {
                self.1.push(a.to_vec());
            }
        }
        struct Blind(TraceRecorder, Vec<Vec<i64>>);
        impl Observer<i64> for Blind {
            fn on_event(&mut self, e: &TraceEvent, a: &[i64]) {
                Observer::<i64>::on_event(&mut self.0, e, a);
            }
            fn on_outer_done(&mut self, _: usize, a: &[i64]) {
                self.1.push(a.to_vec());
            }
            fn inspects_array(&self) -> bool {
                false
            }
        }
        for input in [vec![5, 1, 4, 1, 3, 9, 2, 6], vec![3, 2, 1], vec![1, 2, 3], vec![], vec![2, 2, 1, 1]] {
            let mut a = input.clone();
            let mut b = input.clone();
            let mut seen = Inspecting(TraceRecorder::new(), Vec::new());
            let mut blind = Blind(TraceRecorder::new(), Vec::new());
            let ca = std_insertion_sort(&mut a, &mut seen);
            let cb = std_insertion_sort(&mut b, &mut blind);
            assert_eq!((a, ca), (b, cb));
            assert_eq!(seen.0.events, blind.0.events);
            assert_eq!(seen.1, blind.1);
        }
    }

    #[test]
    fn outer_hook_fires_once_per_iteration() {
        struct Outer(Vec<usize>);
        impl Observer<i64> for Outer {
            fn on_event(&mut self, _: &TraceEvent, _: &[i64]) {}
            fn on_outer_done(&mut self, i: usize, _: &[i64]) {
                self.0.push(i);
            }
        }
        let mut o = Outer(Vec::new());
        icbics_sort(&mut [3, 1, 2], &mut o);
        assert_eq!(o.0, vec![1, 2, 3]);
    }
}
