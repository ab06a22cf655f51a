//! Instrumented sorting laboratory for the double-loop "swap if `A[i] < A[j]`"
//! sort and its relatives.
//!
//! * [`sortcore`]: the six sorts, all reporting through [`trace::Observer`].
//! * [`metrics`]: inversion counts and closed-form swap bounds.
//! * [`verify`]: per-input checkers and the instability witness search.
//! * [`oracle`]: exhaustive and seeded-random enumeration over permutations.
//! * [`bench`]: timing harness with CSV/JSON output.
//! * [`cli`]: the `sortlab` command line.

pub mod bench;
pub mod cli;
pub mod metrics;
pub mod oracle;
pub mod sortcore;
pub mod trace;
pub mod verify;

pub use sortcore::{Algorithm, Counts, SortReport};
pub use trace::{EventKind, Observer, Phase, TraceEvent};
