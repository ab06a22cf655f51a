//! Seeded benchmark runs of all six sorts on identical inputs.

use std::collections::BTreeMap;
use std::hint::black_box;
use std::io::{Read, Write};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::oracle::random_permutation;
use crate::sortcore::Algorithm;
use crate::trace::NoopObserver;

/// One algorithm on one input. Column order is the CSV header.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub algorithm: Algorithm,
    pub n: usize,
    pub rep: u32,
    pub seed: u64,
    pub comparisons: u64,
    /// Swaps, or modeled moves for `std-insertion`.
    pub swaps: u64,
    pub wall_ns: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchSummaryRow {
    pub algorithm: Algorithm,
    pub n: usize,
    pub reps: u32,
    pub mean_wall_ns: f64,
    pub mean_swaps: f64,
    pub mean_comparisons: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub seed: u64,
    pub records: Vec<BenchRecord>,
    pub summary: Vec<BenchSummaryRow>,
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("at least one size is required")]
    NoSizes,
    #[error("reps must be at least 1")]
    NoReps,
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// For every size and repetition draws one permutation from a ChaCha8
/// stream seeded with `seed`, then times each algorithm on its own copy.
///
/// Only the sort call is timed.
pub fn run_bench(sizes: &[usize], reps: u32, seed: u64) -> Result<BenchReport, BenchError> {
    if sizes.is_empty() {
        return Err(BenchError::NoSizes);
    }
    if reps == 0 {
        return Err(BenchError::NoReps);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(sizes.len() * reps as usize * Algorithm::ALL.len());
    for &n in sizes {
        for rep in 0..reps {
            let input = random_permutation(n, &mut rng);
            for algorithm in Algorithm::ALL {
                let mut work = input.clone();
                let start = Instant::now();
                let counts = algorithm.sort(black_box(&mut work[..]), &mut NoopObserver);
                let wall_ns = start.elapsed().as_nanos() as u64;
                black_box(&work);
                records.push(BenchRecord {
                    algorithm,
                    n,
                    rep,
                    seed,
                    comparisons: counts.comparisons,
                    swaps: counts.swaps,
                    wall_ns,
                });
            }
        }
    }
    let summary = summarize(&records);
    Ok(BenchReport { seed, records, summary })
}

/// Per (algorithm, n) means, ordered by n then algorithm.
pub fn summarize(records: &[BenchRecord]) -> Vec<BenchSummaryRow> {
    let mut groups: BTreeMap<(usize, Algorithm), Vec<&BenchRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((r.n, r.algorithm)).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((n, algorithm), rs)| {
            let k = rs.len() as f64;
            let mean = |f: fn(&BenchRecord) -> u64| rs.iter().map(|r| f(r) as f64).sum::<f64>() / k;
            BenchSummaryRow {
                algorithm,
                n,
                reps: rs.len() as u32,
                mean_wall_ns: mean(|r| r.wall_ns),
                mean_swaps: mean(|r| r.swaps),
                mean_comparisons: mean(|r| r.comparisons),
            }
        })
        .collect()
}

pub fn mean_wall_ns(summary: &[BenchSummaryRow], algorithm: Algorithm, n: usize) -> Option<f64> {
    summary.iter().find(|r| r.algorithm == algorithm && r.n == n).map(|r| r.mean_wall_ns)
}

pub fn write_csv<W: Write>(out: W, records: &[BenchRecord]) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<BenchRecord>, BenchError> {
    let mut rdr = csv::Reader::from_reader(input);
    Ok(rdr.deserialize().collect::<Result<_, _>>()?)
}

pub fn write_json<W: Write>(mut out: W, report: &BenchReport) -> Result<(), BenchError> {
    serde_json::to_writer_pretty(&mut out, report)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn read_json<R: Read>(input: R) -> Result<BenchReport, BenchError> {
    Ok(serde_json::from_reader(input)?)
}
