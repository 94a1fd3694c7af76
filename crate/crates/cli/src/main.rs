//! Command line front end: exact discrepancies, certified bounds, Weyl
//! tables, L2 norms, geometric sweeps, and the verification suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use zp_discrepancy::{
    discrepancy_bound, exact_discrepancy, l2_norm_sq, parse_sequence_file, ratio_f64,
    ratio_string, run_suite, weyl_table, PadicApprox, Prime, SequenceSpec, Suite,
};

#[derive(Parser)]
#[command(name = "zpdisc", version, about = "Exact discrepancies of p-adic sequences and certified Fourier bounds", max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the exact discrepancy of the resolved sequence
    Discrepancy {
        #[command(flatten)]
        source: SourceArgs,
        /// Number of elements (prefix length for --explicit/--input)
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate the certified discrepancy bound
    Bound {
        #[command(flatten)]
        source: SourceArgs,
        /// Number of elements (prefix length for --explicit/--input)
        #[arg(long)]
        n: Option<usize>,
        /// Truncation level K_trunc (default: the working precision)
        #[arg(long)]
        trunc: Option<u32>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Dump every Weyl sum up to the truncation level
    Weyl {
        #[command(flatten)]
        source: SourceArgs,
        /// Number of elements (prefix length for --explicit/--input)
        #[arg(long)]
        n: Option<usize>,
        /// Truncation level K_trunc (default: the working precision)
        #[arg(long)]
        trunc: Option<u32>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compute the exact squared L2 norm of the local discrepancy function
    L2norm {
        #[command(flatten)]
        source: SourceArgs,
        /// Number of elements (prefix length for --explicit/--input)
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sweep N geometrically and tabulate discrepancy, bound, and their ratio
    Scan {
        #[command(flatten)]
        source: SourceArgs,
        /// First sequence length of the sweep
        #[arg(long = "n-start")]
        n_start: usize,
        /// Last sequence length of the sweep (inclusive)
        #[arg(long = "n-end")]
        n_end: usize,
        /// Geometric ratio between consecutive lengths (> 1)
        #[arg(long, default_value_t = 2.0)]
        ratio: f64,
        /// Truncation level K_trunc (default: the working precision)
        #[arg(long)]
        trunc: Option<u32>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run verification suites against brute-force oracles
    Verify {
        /// Suite to run: all, charfun, subformula, integralest, sandwich,
        /// weyltable, linear, floor
        #[arg(long, default_value = "all")]
        suite: Suite,
        /// Prime the checks run at
        #[arg(long)]
        p: u64,
        /// Seed for every randomized input
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct SourceArgs {
    /// Prime base (required unless --input supplies it)
    #[arg(long)]
    p: Option<u64>,
    /// Working precision K in digits (default 8, or K_trunc when --trunc is given)
    #[arg(long)]
    precision: Option<u32>,
    /// Linear sequence alpha_n = n*a + b, written a=INT,b=INT
    #[arg(long)]
    linear: Option<String>,
    /// Explicit integer values, comma separated
    #[arg(long)]
    explicit: Option<String>,
    /// Seeded uniform random sequence
    #[arg(long = "random-seed")]
    random_seed: Option<u64>,
    /// Sequence file (header "p=P K=K", one integer per line)
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format (default: json; scan defaults to csv)
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write output to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

enum CliError {
    /// Bad flags, parameters, or input data: exit 2.
    Usage(String),
    /// A verification suite reported a failing check: exit 1.
    Verification,
}

impl From<zp_discrepancy::Error> for CliError {
    fn from(e: zp_discrepancy::Error) -> CliError {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Verification) => ExitCode::from(1),
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Discrepancy { source, n, output } => {
            let resolved = resolve(&source, n, None)?;
            let report = exact_discrepancy(&resolved.values)?;
            let text = match output.format.unwrap_or(Format::Json) {
                Format::Json => to_json_line(&report),
                Format::Csv => {
                    let witness = match serde_json::to_value(&report.witness).unwrap() {
                        serde_json::Value::String(s) => s,
                        v => format!("{}:{}", v["depth"], v["center"]),
                    };
                    format!(
                        "value,witness,limit_term,finite_max,N,K\n{},{witness},{},{},{},{}\n",
                        ratio_string(&report.value),
                        ratio_string(&report.limit_term),
                        ratio_string(&report.finite_max),
                        report.count,
                        report.precision,
                    )
                }
            };
            emit(text, output.out)
        }
        Command::Bound {
            source,
            n,
            trunc,
            output,
        } => {
            let resolved = resolve(&source, n, trunc)?;
            let k_trunc = trunc.unwrap_or_else(|| resolved.spec.precision());
            let report = discrepancy_bound(&resolved.values, k_trunc)?;
            let text = match output.format.unwrap_or(Format::Json) {
                Format::Json => to_json_line(&report),
                Format::Csv => format!(
                    "p,N,k_trunc,s_trunc,tail,c_p,bound\n{},{},{},{},{},{},{}\n",
                    report.p,
                    report.count,
                    report.k_trunc,
                    sig12(report.s_trunc),
                    ratio_string(&report.tail),
                    sig12(report.c_p),
                    sig12(report.bound),
                ),
            };
            emit(text, output.out)
        }
        Command::Weyl {
            source,
            n,
            trunc,
            output,
        } => {
            let resolved = resolve(&source, n, trunc)?;
            let k_trunc = trunc.unwrap_or_else(|| resolved.spec.precision());
            let table = weyl_table(&resolved.values, k_trunc)?;
            let entries = table.entries();
            let text = match output.format.unwrap_or(Format::Json) {
                Format::Json => {
                    let rows: Vec<serde_json::Value> = entries
                        .iter()
                        .map(|(zeta, w)| {
                            serde_json::json!({
                                "character": zeta.label(),
                                "re": w.re,
                                "im": w.im,
                            })
                        })
                        .collect();
                    let doc = serde_json::json!({
                        "p": resolved.spec.p().get(),
                        "N": resolved.values.len(),
                        "k_trunc": k_trunc,
                        "entries": rows,
                    });
                    format!("{doc}\n")
                }
                Format::Csv => {
                    let mut text = String::from("character,re,im\n");
                    for (zeta, w) in &entries {
                        let _ = writeln!(text, "{},{},{}", zeta.label(), sig12(w.re), sig12(w.im));
                    }
                    text
                }
            };
            emit(text, output.out)
        }
        Command::L2norm { source, n, output } => {
            let resolved = resolve(&source, n, None)?;
            let norm = l2_norm_sq(&resolved.values)?;
            let text = match output.format.unwrap_or(Format::Json) {
                Format::Json => {
                    let doc = serde_json::json!({
                        "p": resolved.spec.p().get(),
                        "N": resolved.values.len(),
                        "K": resolved.spec.precision(),
                        "l2_norm_sq": ratio_string(&norm),
                    });
                    format!("{doc}\n")
                }
                Format::Csv => format!("l2_norm_sq\n{}\n", ratio_string(&norm)),
            };
            emit(text, output.out)
        }
        Command::Scan {
            source,
            n_start,
            n_end,
            ratio,
            trunc,
            output,
        } => {
            let rows = scan_rows(&source, n_start, n_end, ratio, trunc)?;
            let (slope, residual) = fit(&rows);
            let text = match output.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut text = String::from("N,discrepancy,bound,ratio,runtime_ms\n");
                    for r in &rows {
                        let _ = writeln!(
                            text,
                            "{},{},{},{},{}",
                            r.n,
                            sig12(r.discrepancy),
                            sig12(r.bound),
                            sig12(r.ratio),
                            r.runtime_ms
                        );
                    }
                    let _ = writeln!(text, "# slope={slope:.6} residual={residual:.6}");
                    text
                }
                Format::Json => {
                    let rows: Vec<serde_json::Value> = rows
                        .iter()
                        .map(|r| {
                            serde_json::json!({
                                "N": r.n,
                                "discrepancy": r.exact,
                                "bound": r.bound,
                                "ratio": r.ratio,
                                "runtime_ms": r.runtime_ms,
                            })
                        })
                        .collect();
                    let doc = serde_json::json!({
                        "rows": rows,
                        "slope": slope,
                        "residual": residual,
                    });
                    format!("{doc}\n")
                }
            };
            emit(text, output.out)
        }
        Command::Verify {
            suite,
            p,
            seed,
            output,
        } => {
            let p = Prime::new(p)?;
            let outcomes = run_suite(suite, p, seed)?;
            let text = match output.format.unwrap_or(Format::Json) {
                Format::Json => {
                    let rows: Vec<serde_json::Value> = outcomes
                        .iter()
                        .map(|o| {
                            serde_json::json!({
                                "name": o.name,
                                "passed": o.passed,
                                "detail": o.detail,
                            })
                        })
                        .collect();
                    format!("{}\n", serde_json::Value::Array(rows))
                }
                Format::Csv => {
                    let mut text = String::from("name,passed,detail\n");
                    for o in &outcomes {
                        let _ = writeln!(text, "{},{},\"{}\"", o.name, o.passed, o.detail);
                    }
                    text
                }
            };
            // the human-readable report always goes to stderr so exit
            // codes and machine output stay clean.
            for o in &outcomes {
                eprintln!(
                    "{} {}: {}",
                    if o.passed { "pass" } else { "FAIL" },
                    o.name,
                    o.detail
                );
            }
            emit(text, output.out)?;
            if outcomes.iter().all(|o| o.passed) {
                Ok(())
            } else {
                Err(CliError::Verification)
            }
        }
    }
}

struct Resolved {
    spec: SequenceSpec,
    values: Vec<PadicApprox>,
}

/// Builds the sequence from exactly one source. `n` is the element count
/// for generated sources and an optional prefix length for listed ones;
/// `trunc` feeds the default precision when --precision is absent.
fn resolve(source: &SourceArgs, n: Option<usize>, trunc: Option<u32>) -> Result<Resolved, CliError> {
    let sources = [
        source.linear.is_some(),
        source.explicit.is_some(),
        source.random_seed.is_some(),
        source.input.is_some(),
    ]
    .iter()
    .filter(|&&s| s)
    .count();
    if sources != 1 {
        return Err(CliError::Usage(String::from(
            "exactly one of --linear, --explicit, --random-seed, --input is required",
        )));
    }
    let precision = source.precision.or(trunc).unwrap_or(8);
    if let Some(path) = &source.input {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let spec = parse_sequence_file(&text)?;
        if let Some(p) = source.p {
            if p != spec.p().get() as u64 {
                return Err(CliError::Usage(format!(
                    "--p {p} contradicts the file header p={}",
                    spec.p().get()
                )));
            }
        }
        if let Some(k) = source.precision {
            if k != spec.precision() {
                return Err(CliError::Usage(format!(
                    "--precision {k} contradicts the file header K={}",
                    spec.precision()
                )));
            }
        }
        return prefix(spec, n);
    }
    let p = Prime::new(source.p.ok_or_else(|| {
        CliError::Usage(String::from("--p is required with this sequence source"))
    })?)?;
    if let Some(text) = &source.linear {
        let (a, b) = parse_linear(text)?;
        let count = n.ok_or_else(|| CliError::Usage(String::from("--linear requires --n")))?;
        let a = PadicApprox::from_integer(a, p, precision);
        let b = PadicApprox::from_integer(b, p, precision);
        let spec = SequenceSpec::linear(a, b, count)?;
        let values = spec.generate();
        return Ok(Resolved { spec, values });
    }
    if let Some(text) = &source.explicit {
        let mut values = Vec::new();
        for part in text.split(',') {
            let v: i64 = part.trim().parse().map_err(|_| {
                CliError::Usage(format!("--explicit: '{part}' is not an integer"))
            })?;
            values.push(PadicApprox::from_integer(v, p, precision));
        }
        let spec = SequenceSpec::explicit(values)?;
        return prefix(spec, n);
    }
    let seed = source.random_seed.expect("remaining source");
    let count = n.ok_or_else(|| CliError::Usage(String::from("--random-seed requires --n")))?;
    let spec = SequenceSpec::random(p, precision, count, seed)?;
    let values = spec.generate();
    Ok(Resolved { spec, values })
}

fn prefix(spec: SequenceSpec, n: Option<usize>) -> Result<Resolved, CliError> {
    let mut values = spec.generate();
    if let Some(n) = n {
        if n == 0 || n > values.len() {
            return Err(CliError::Usage(format!(
                "--n {n} outside the {} available values",
                values.len()
            )));
        }
        values.truncate(n);
    }
    Ok(Resolved { spec, values })
}

fn parse_linear(text: &str) -> Result<(i64, i64), CliError> {
    let bad = || CliError::Usage(format!("--linear expects a=INT,b=INT, got '{text}'"));
    let (a_part, b_part) = text.split_once(',').ok_or_else(bad)?;
    let a = a_part.trim().strip_prefix("a=").ok_or_else(bad)?;
    let b = b_part.trim().strip_prefix("b=").ok_or_else(bad)?;
    Ok((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?))
}

struct ScanRow {
    n: usize,
    exact: String,
    discrepancy: f64,
    bound: f64,
    ratio: f64,
    runtime_ms: u128,
}

fn scan_rows(
    source: &SourceArgs,
    n_start: usize,
    n_end: usize,
    ratio: f64,
    trunc: Option<u32>,
) -> Result<Vec<ScanRow>, CliError> {
    if n_start == 0 || n_end < n_start {
        return Err(CliError::Usage(String::from(
            "the sweep needs 1 <= n-start <= n-end",
        )));
    }
    if ratio <= 1.0 {
        return Err(CliError::Usage(String::from("--ratio must be > 1")));
    }
    let resolved = resolve(source, Some(n_end), trunc)?;
    let k_trunc = trunc.unwrap_or_else(|| resolved.spec.precision());
    let mut lengths = Vec::new();
    let mut j = 0i32;
    loop {
        let n = (n_start as f64 * ratio.powi(j)).round() as usize;
        if n > n_end {
            break;
        }
        if lengths.last() != Some(&n) {
            lengths.push(n);
        }
        j += 1;
    }
    let mut rows = Vec::new();
    for n in lengths {
        let start = Instant::now();
        let exact = exact_discrepancy(&resolved.values[..n])?;
        let report = discrepancy_bound(&resolved.values[..n], k_trunc)?;
        let runtime_ms = start.elapsed().as_millis();
        let discrepancy = ratio_f64(&exact.value);
        rows.push(ScanRow {
            n,
            exact: ratio_string(&exact.value),
            discrepancy,
            bound: report.bound,
            ratio: report.bound / discrepancy,
            runtime_ms,
        });
    }
    Ok(rows)
}

/// OLS fit of log bound against log N; returns the slope and the root
/// mean square residual.
fn fit(rows: &[ScanRow]) -> (f64, f64) {
    if rows.len() < 2 {
        return (f64::NAN, f64::NAN);
    }
    let xs: Vec<f64> = rows.iter().map(|r| (r.n as f64).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.bound.ln()).collect();
    let n = xs.len() as f64;
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    let slope = sxy / sxx;
    let intercept = ym - slope * xm;
    let ss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    (slope, (ss / n).sqrt())
}

/// Renders with 12 significant digits, positionally where reasonable.
fn sig12(x: f64) -> String {
    if x == 0.0 {
        return String::from("0.00000000000");
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-9..12).contains(&exp) {
        format!("{:.*}", (11 - exp).max(0) as usize, x)
    } else {
        format!("{:.11e}", x)
    }
}

fn to_json_line<T: serde::Serialize>(value: &T) -> String {
    format!("{}\n", serde_json::to_string(value).unwrap())
}

fn emit(text: String, out: Option<PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
