//! Command-line front end: `sort`, `verify` and `bench`.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 usage or I/O
//! error (clap's own argument errors also exit with 2).

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::bench::{self, BenchError};
use crate::metrics::max_inversions;
use crate::oracle::{
    self, enumerate_permutations, exhaustive_summary, random_permutation, random_suite, OracleSummary,
    MAX_EXHAUSTIVE_N,
};
use crate::sortcore::{Algorithm, SortReport};
use crate::trace::{write_jsonl, TraceRecorder};
use crate::verify::{
    self, check_correctness, check_lemma1, check_pi_invariant, check_theorem_bounds, CheckId, Counterexample,
    InstabilityWitness, VerifyError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "sortlab", version, about = "Instrumented double-loop sorting laboratory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sort one input and print a JSON report.
    Sort(SortArgs),
    /// Run exhaustive and random verification checks.
    Verify(VerifyArgs),
    /// Time all six algorithms on seeded random permutations.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct SortArgs {
    #[arg(long)]
    pub algo: Algorithm,
    /// Comma-separated integers, or a path to a file holding them.
    #[arg(long, allow_hyphen_values = true)]
    pub input: String,
    /// Write the trace here as JSON lines.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_delimiter = ',', default_values_t = CheckId::ALL)]
    pub checks: Vec<CheckId>,
    /// Largest n for exhaustive enumeration (at most 8).
    #[arg(long, default_value_t = 7)]
    pub n_max: usize,
    /// Extra random permutations per check; 0 disables the random pass.
    #[arg(long, default_value_t = 0)]
    pub samples: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Length of the random permutations.
    #[arg(long, default_value_t = 64)]
    pub random_n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    pub reps: u32,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = BenchFormat::Csv)]
    pub format: BenchFormat,
    /// Write records here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot parse `{token}` as an integer (line {line})")]
    BadToken { token: String, line: usize },
    #[error("expected one integer per line or a single comma-separated line")]
    MixedLayout,
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Reads `--input`: a path to an existing file, otherwise the list itself.
pub fn load_input(arg: &str) -> Result<Vec<i64>, InputError> {
    let path = Path::new(arg);
    if !arg.is_empty() && path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|source| InputError::Io { path: path.to_path_buf(), source })?;
        parse_integers(&text)
    } else {
        parse_integers(arg)
    }
}

/// Accepts one integer per line or a single comma-separated line.
pub fn parse_integers(text: &str) -> Result<Vec<i64>, InputError> {
    let lines: Vec<(usize, &str)> =
        text.lines().enumerate().map(|(k, l)| (k + 1, l.trim())).filter(|(_, l)| !l.is_empty()).collect();
    let parse = |token: &str, line: usize| {
        token.trim().parse::<i64>().map_err(|_| InputError::BadToken { token: token.trim().to_string(), line })
    };
    match lines.as_slice() {
        [] => Ok(Vec::new()),
        [(line, only)] => only.split(',').map(|t| parse(t, *line)).collect(),
        many => {
            if many.iter().any(|(_, l)| l.contains(',')) {
                return Err(InputError::MixedLayout);
            }
            many.iter().map(|(line, l)| parse(l, *line)).collect()
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Sort(args) => cmd_sort(&args, out, err),
        Command::Verify(args) => cmd_verify(&args, out, err),
        Command::Bench(args) => cmd_bench(&args, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

type CmdResult = Result<i32, Box<dyn std::error::Error>>;

pub fn cmd_sort(args: &SortArgs, out: &mut dyn Write, _err: &mut dyn Write) -> CmdResult {
    let input = load_input(&args.input)?;
    let mut recorder = TraceRecorder::new();
    let report = SortReport::run(args.algo, &input, &mut recorder);
    if let Some(path) = &args.trace {
        let file = File::create(path).map_err(|e| format!("creating {}: {e}", path.display()))?;
        write_jsonl(BufWriter::new(file), &recorder.events)?;
    }
    serde_json::to_writer(&mut *out, &report)?;
    writeln!(out)?;
    Ok(EXIT_OK)
}

/// Outcome of one check in `verify`.
#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub check: CheckId,
    pub passed: bool,
    pub inputs_examined: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub per_n: Vec<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub random: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<InstabilityWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl CheckReport {
    fn new(check: CheckId) -> Self {
        CheckReport {
            check,
            passed: true,
            inputs_examined: 0,
            per_n: Vec::new(),
            random: None,
            witness: None,
            counterexample: None,
        }
    }

    fn fail(&mut self, cx: Counterexample) {
        self.passed = false;
        if self.counterexample.is_none() {
            self.counterexample = Some(cx);
        }
    }

    fn fail_claim(&mut self, n: usize, expected: String, observed: String) {
        self.fail(Counterexample {
            algorithm: Algorithm::Icbics,
            input: (1..=n as i64).collect(),
            event_seq: None,
            outer: None,
            expected,
            observed,
        });
    }
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub checks: Vec<CheckReport>,
}

/// Runs the selected checks. Inputs are every permutation of `1..=n` for
/// each n up to `n_max`, plus `samples` random permutations of length
/// `random_n` when requested.
pub fn run_verify(args: &VerifyArgs) -> Result<VerifyReport, Box<dyn std::error::Error>> {
    if args.n_max > MAX_EXHAUSTIVE_N {
        return Err(format!("--n-max must be at most {MAX_EXHAUSTIVE_N}, got {}", args.n_max).into());
    }
    if args.samples > 0 && args.random_n < 2 {
        return Err("--random-n must be at least 2".into());
    }
    let mut checks: Vec<CheckId> = args.checks.clone();
    checks.sort();
    checks.dedup();

    let mut summaries: Vec<OracleSummary> = Vec::new();
    if checks.iter().any(|c| matches!(c, CheckId::Theorem2 | CheckId::Theorem3 | CheckId::Theorem4)) {
        for n in 2..=args.n_max {
            summaries.push(exhaustive_summary(n)?);
        }
    }
    let random_inputs = || {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        (0..args.samples).map(move |_| random_permutation(args.random_n, &mut rng))
    };

    let mut reports = Vec::new();
    for check in checks {
        let mut rep = CheckReport::new(check);
        match check {
            CheckId::Correctness | CheckId::Pi | CheckId::Lemma1 => {
                let n_min = if check == CheckId::Correctness { 0 } else { 1 };
                let exhaustive = (n_min..=args.n_max).flat_map(|n| enumerate_permutations(n).expect("n <= 8"));
                for input in exhaustive.chain(random_inputs()) {
                    let verdict = match check {
                        CheckId::Correctness => check_correctness(&input),
                        CheckId::Pi => check_pi_invariant(&input)?,
                        _ => check_lemma1(&input)?,
                    };
                    rep.inputs_examined += 1;
                    if let Some(cx) = verdict.counterexample {
                        rep.fail(cx);
                    }
                }
            }
            CheckId::Theorem2 | CheckId::Theorem3 | CheckId::Theorem4 => {
                theorem_check(&mut rep, &summaries, args)?;
            }
            CheckId::Instability => {
                let bound = args.n_max.max(2);
                rep.per_n.push(json!({ "search_max_n": bound }));
                match verify::find_instability_witness(bound)? {
                    Some(w) => {
                        rep.inputs_examined = 1;
                        rep.witness = Some(w);
                    }
                    None => rep.fail(Counterexample {
                        algorithm: Algorithm::Icbics,
                        input: Vec::new(),
                        event_seq: None,
                        outer: None,
                        expected: format!("an unstable input of length <= {bound}"),
                        observed: "none found".to_string(),
                    }),
                }
            }
        }
        reports.push(rep);
    }
    Ok(VerifyReport { passed: reports.iter().all(|r| r.passed), checks: reports })
}

fn theorem_check(rep: &mut CheckReport, summaries: &[OracleSummary], args: &VerifyArgs) -> Result<(), VerifyError> {
    let check = rep.check;
    for s in summaries {
        let n = s.n;
        rep.inputs_examined += s.inputs_examined;
        for p in enumerate_permutations(n).expect("n <= 8") {
            let bounds = check_theorem_bounds(&p)?;
            if let Some(v) = bounds.verdict(check).filter(|v| !v.passed) {
                rep.fail(v.counterexample.clone().expect("failed verdicts carry a counterexample"));
            }
        }
        let i_max = max_inversions(n);
        match check {
            CheckId::Theorem2 => {
                let expected_set: Vec<Vec<i64>> = if n >= 3 {
                    let mut two = oracle::theorem2_extremal_inputs(n).to_vec();
                    two.sort();
                    two
                } else {
                    vec![(1..=n as i64).collect()]
                };
                if s.max_swaps != i_max + 1 || s.argmax_inputs != expected_set {
                    rep.fail_claim(
                        n,
                        format!("max swaps {} attained by {expected_set:?}", i_max + 1),
                        format!("max swaps {} attained by {:?}", s.max_swaps, s.argmax_inputs),
                    );
                }
                rep.per_n.push(json!({
                    "n": n,
                    "max_swaps": s.max_swaps,
                    "expected_max_swaps": i_max + 1,
                    "argmax_inputs": s.argmax_inputs,
                }));
            }
            CheckId::Theorem3 => {
                let sorted: Vec<i64> = (1..=n as i64).collect();
                let sorted_swaps = check_theorem_bounds(&sorted)?.swaps;
                let expected = 2 * (n as u64 - 1);
                if sorted_swaps != expected {
                    rep.fail_claim(n, format!("sorted input makes {expected} swaps"), format!("{sorted_swaps} swaps"));
                }
                rep.per_n.push(json!({
                    "n": n,
                    "bound_violations": s.bound_violations,
                    "sorted_input_swaps": sorted_swaps,
                    "expected_sorted_input_swaps": expected,
                }));
            }
            _ => {
                let expected_set = vec![oracle::theorem4_extremal_input(n)];
                if s.min_swaps != n as u64 - 1 || s.argmin_inputs != expected_set {
                    rep.fail_claim(
                        n,
                        format!("min swaps {} attained by {expected_set:?}", n - 1),
                        format!("min swaps {} attained by {:?}", s.min_swaps, s.argmin_inputs),
                    );
                }
                rep.per_n.push(json!({
                    "n": n,
                    "min_swaps": s.min_swaps,
                    "expected_min_swaps": n - 1,
                    "argmin_inputs": s.argmin_inputs,
                }));
            }
        }
    }
    if args.samples > 0 {
        let s = random_suite(args.random_n, args.samples, args.seed).expect("arguments validated");
        rep.inputs_examined += s.inputs_examined;
        if let Some(cx) = s.first_violation.clone() {
            rep.fail(cx);
        }
        rep.random = Some(json!({
            "n": s.n,
            "mode": s.mode,
            "inputs_examined": s.inputs_examined,
            "max_swaps": s.max_swaps,
            "min_swaps": s.min_swaps,
            "bound_violations": s.bound_violations,
        }));
    }
    Ok(())
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let report = run_verify(args)?;
    serde_json::to_writer_pretty(&mut *out, &report)?;
    writeln!(out)?;
    if report.passed {
        return Ok(EXIT_OK);
    }
    if let Some(cx) = report.checks.iter().find_map(|c| c.counterexample.as_ref()) {
        writeln!(err, "verification failed; first counterexample: {}", serde_json::to_string(cx)?)?;
    }
    Ok(EXIT_FAILED)
}

pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let report = bench::run_bench(&args.sizes, args.reps, args.seed)?;
    let mut sink: Box<dyn Write + '_> = match &args.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| format!("creating {}: {e}", path.display()))?,
        )),
        None => Box::new(&mut *out),
    };
    match args.format {
        BenchFormat::Csv => {
            bench::write_csv(&mut sink, &report.records)?;
            writeln!(err, "{:<18} {:>7} {:>14} {:>14} {:>14}", "algorithm", "n", "mean_wall_ns", "mean_swaps", "mean_cmp")?;
            for row in &report.summary {
                writeln!(
                    err,
                    "{:<18} {:>7} {:>14.0} {:>14.1} {:>14.1}",
                    row.algorithm.id(),
                    row.n,
                    row.mean_wall_ns,
                    row.mean_swaps,
                    row.mean_comparisons
                )?;
            }
        }
        BenchFormat::Json => bench::write_json(&mut sink, &report)?,
    }
    sink.flush().map_err(BenchError::from)?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("sortlab").chain(args.iter().copied())).unwrap()
    }

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(parse(args), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn integer_parsing() {
        assert_eq!(parse_integers("").unwrap(), Vec::<i64>::new());
        assert_eq!(parse_integers("2,3,1").unwrap(), vec![2, 3, 1]);
        assert_eq!(parse_integers(" -4 , 7 ").unwrap(), vec![-4, 7]);
        assert_eq!(parse_integers("5\n-1\n\n2\n").unwrap(), vec![5, -1, 2]);
        assert_eq!(parse_integers("3,1\n").unwrap(), vec![3, 1]);
        assert!(matches!(parse_integers("1,x"), Err(InputError::BadToken { .. })));
        assert!(matches!(parse_integers("1,,2"), Err(InputError::BadToken { .. })));
        assert!(matches!(parse_integers("1,2\n3"), Err(InputError::MixedLayout)));
    }

    #[test]
    fn sort_reports_json() {
        let (code, out, _) = run_capture(&["sort", "--algo", "icbics", "--input", "2,3,1"]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!((v["swaps"].as_u64(), v["comparisons"].as_u64()), (Some(4), Some(9)));

        let (_, out, _) = run_capture(&["sort", "--algo", "icbics", "--input", ""]);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!((v["n"].as_u64(), v["swaps"].as_u64()), (Some(0), Some(0)));

        let (_, out, _) = run_capture(&["sort", "--algo", "exchange", "--input", "3,2,1"]);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["comparisons"].as_u64(), Some(3));
    }

    #[test]
    fn sort_rejects_bad_input() {
        let (code, _, err) = run_capture(&["sort", "--algo", "icbics", "--input", "1,two"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("two"));
        assert!(Cli::try_parse_from(["sortlab", "sort", "--algo", "bogo", "--input", "1"]).is_err());
    }

    #[test]
    fn verify_small() {
        let (code, out, _) = run_capture(&["verify", "--checks", "pi", "--n-max", "1"]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["passed"], true);
        assert_eq!(v["checks"][0]["inputs_examined"], 1);
    }

    #[test]
    fn verify_theorem_sets() {
        let args = VerifyArgs {
            checks: vec![CheckId::Theorem2, CheckId::Theorem4],
            n_max: 6,
            samples: 0,
            seed: 42,
            random_n: 64,
        };
        let report = run_verify(&args).unwrap();
        assert!(report.passed);
        let t2 = &report.checks[0];
        assert_eq!(t2.check, CheckId::Theorem2);
        for row in &t2.per_n {
            if row["n"].as_u64().unwrap() >= 3 {
                assert_eq!(row["argmax_inputs"].as_array().unwrap().len(), 2);
            }
        }
    }

    #[test]
    fn verify_rejects_large_n() {
        let (code, _, err) = run_capture(&["verify", "--n-max", "9"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("n-max"));
    }

    #[test]
    fn verify_instability_needs_length_three() {
        let (code, _, err) = run_capture(&["verify", "--checks", "instability", "--n-max", "2"]);
        assert_eq!(code, EXIT_FAILED);
        assert!(err.contains("counterexample"));
        let (code, _, _) = run_capture(&["verify", "--checks", "instability", "--n-max", "3"]);
        assert_eq!(code, EXIT_OK);
    }

    #[test]
    fn bench_csv_rows() {
        let (code, out, err) = run_capture(&["bench", "--sizes", "100", "--reps", "3", "--seed", "1", "--format", "csv"]);
        assert_eq!(code, EXIT_OK);
        let records = bench::read_csv(out.as_bytes()).unwrap();
        assert_eq!(records.len(), 18);
        assert!(records.iter().filter(|r| r.algorithm == Algorithm::Icbics).all(|r| r.comparisons == 10_000));
        assert!(err.contains("mean_wall_ns"));
    }
}
