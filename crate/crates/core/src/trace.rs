//! Trace events and the observer interface every sort reports through.
//!
//! Positions in events are 1-based: array slot `k` (0-based) is reported as
//! `k + 1`. For the double-loop sorts `i` and `j` are the loop variables of
//! the pseudocode, so a swap event exchanges `A[i]` and `A[j]`. The standard
//! insertion sort has no `(i, j)` loop pair; its events carry the two adjacent
//! positions being compared (`i = j - 1`).

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    Compare,
    Swap,
}

/// Which phase of the double-loop sort an event belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    /// `i = 1`: the maximum is carried into `A[1]`.
    Selection,
    /// `i >= 2`: behaves like insertion into the sorted prefix.
    Insertion,
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub seq: u64,
    pub kind: EventKind,
    pub i: usize,
    pub j: usize,
    pub phase: Phase,
}

/// Sink for the events of a sort run.
///
/// `on_event` is called after the action took effect, so for a swap `array`
/// already holds the exchanged elements. `on_outer_done` fires at the end of
/// each outer-loop iteration for algorithms that have one.
pub trait Observer<T> {
    fn on_event(&mut self, event: &TraceEvent, array: &[T]);

    fn on_outer_done(&mut self, _outer: usize, _array: &[T]) {}

    /// Whether this observer reads the `array` argument. Returning false lets
    /// a sort pass intermediate states that do not match the events so far
    /// (the standard insertion sort then shifts instead of swapping).
    fn inspects_array(&self) -> bool {
        true
    }
}

/// Discards everything.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoopObserver;

impl<T> Observer<T> for NoopObserver {
    #[inline]
    fn on_event(&mut self, _event: &TraceEvent, _array: &[T]) {}

    fn inspects_array(&self) -> bool {
        false
    }
}

/// Buffers every event in memory.
#[derive(Debug, Default, Clone)]
pub struct TraceRecorder {
    pub events: Vec<TraceEvent>,
}

impl TraceRecorder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn into_events(self) -> Vec<TraceEvent> {
        self.events
    }
}

impl<T> Observer<T> for TraceRecorder {
    fn on_event(&mut self, event: &TraceEvent, _array: &[T]) {
        self.events.push(*event);
    }

    fn inspects_array(&self) -> bool {
        false
    }
}

/// Adapts a closure over events into an observer.
pub struct FnObserver<F>(pub F);

impl<T, F: FnMut(&TraceEvent)> Observer<T> for FnObserver<F> {
    fn on_event(&mut self, event: &TraceEvent, _array: &[T]) {
        (self.0)(event)
    }

    fn inspects_array(&self) -> bool {
        false
    }
}

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error("event seq {seq}: position ({i}, {j}) outside 1..={n}")]
    OutOfBounds { seq: u64, i: usize, j: usize, n: usize },
    #[error("event seq {seq} does not follow seq {prev}")]
    NonIncreasingSeq { seq: u64, prev: u64 },
    #[error("swap at seq {seq} is not preceded by a compare of ({i}, {j})")]
    UnpairedSwap { seq: u64, i: usize, j: usize },
    #[error("line {line}: {source}")]
    Parse {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Applies the swap events of a trace to a copy of `input`.
///
/// Also checks the structural guarantees of a trace: strictly increasing
/// `seq`, in-range positions, and every swap directly preceded by a compare
/// of the same pair.
pub fn replay<T: Clone>(input: &[T], events: &[TraceEvent]) -> Result<Vec<T>, ReplayError> {
    let mut array = input.to_vec();
    let n = array.len();
    let mut prev: Option<&TraceEvent> = None;
    for ev in events {
        if ev.i == 0 || ev.j == 0 || ev.i > n || ev.j > n {
            return Err(ReplayError::OutOfBounds { seq: ev.seq, i: ev.i, j: ev.j, n });
        }
        if let Some(p) = prev {
            if ev.seq <= p.seq {
                return Err(ReplayError::NonIncreasingSeq { seq: ev.seq, prev: p.seq });
            }
        }
        if ev.kind == EventKind::Swap {
            let paired = matches!(prev, Some(p) if p.kind == EventKind::Compare && p.i == ev.i && p.j == ev.j);
            if !paired {
                return Err(ReplayError::UnpairedSwap { seq: ev.seq, i: ev.i, j: ev.j });
            }
            array.swap(ev.i - 1, ev.j - 1);
        }
        prev = Some(ev);
    }
    Ok(array)
}

/// Writes one JSON object per line.
pub fn write_jsonl<W: Write>(mut out: W, events: &[TraceEvent]) -> std::io::Result<()> {
    for ev in events {
        serde_json::to_writer(&mut out, ev)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn read_jsonl<R: BufRead>(input: R) -> Result<Vec<TraceEvent>, ReplayError> {
    let mut events = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let ev = serde_json::from_str(&line).map_err(|source| ReplayError::Parse { line: idx + 1, source })?;
        events.push(ev);
    }
    Ok(events)
}
