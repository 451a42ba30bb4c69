use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use kappa_lab::bounds::{BoundReport, Claim, ClaimRanges};
use kappa_lab::export::{self, RowIndex, TableRow};
use kappa_lab::{limits, montecarlo, Engine, Error, ExactQ, Method, Quantity};

#[derive(Parser, Debug)]
#[command(name = "kappa-lab", version, about = "Exact conjugacy probabilities of S_n and A_n")]
struct Cli {
    /// Truncation order of the generating functions.
    #[arg(long = "N", global = true, default_value_t = 300, value_parser = clap::value_parser!(u32).range(16..))]
    truncation: u32,

    /// Digits in decimal renderings.
    #[arg(long, global = true, default_value_t = 50, value_parser = clap::value_parser!(u32).range(20..))]
    precision: u32,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true, env = "KAPPA_LAB_WORKERS", value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact values of one quantity over n.
    Compute(ComputeArgs),
    /// Check inequalities and numeric certificates.
    Verify(VerifyArgs),
    /// Enclosures of the series constants and of the two limits.
    Limits(LimitsArgs),
    /// Monte Carlo estimate of a quantity.
    Simulate(SimulateArgs),
    /// Convergence of n²κ_E, n²Q and n²κ(A_n) toward the limits.
    Table(TableArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
enum QuantityName {
    KappaSym,
    KappaEven,
    KappaOdd,
    QSplit,
    SBelow,
    KappaAlt,
}

impl QuantityName {
    fn resolve(self, k: Option<u32>) -> Result<Quantity, Error> {
        Ok(match (self, k) {
            (QuantityName::SBelow, Some(k)) if k >= 1 => Quantity::SBelow(k),
            (QuantityName::SBelow, _) => return Err(Error::Usage("s_below needs --k >= 1".into())),
            (_, Some(_)) => return Err(Error::Usage("--k only applies to s_below".into())),
            (QuantityName::KappaSym, None) => Quantity::KappaSym,
            (QuantityName::KappaEven, None) => Quantity::KappaEven,
            (QuantityName::KappaOdd, None) => Quantity::KappaOdd,
            (QuantityName::QSplit, None) => Quantity::QSplit,
            (QuantityName::KappaAlt, None) => Quantity::KappaAlt,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Scale {
    None,
    N,
    N2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SumOver {
    Odd,
    Even,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
enum MethodName {
    Enumeration,
    GeneratingFunction,
    BruteForce,
}

impl From<MethodName> for Method {
    fn from(m: MethodName) -> Method {
        match m {
            MethodName::Enumeration => Method::Enumeration,
            MethodName::GeneratingFunction => Method::GeneratingFunction,
            MethodName::BruteForce => Method::BruteForce,
        }
    }
}

/// `7` or the inclusive range `0..15`.
fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let bad = || format!("expected n or a..b, got {s:?}");
    match s.split_once("..") {
        None => s.trim().parse().map(|n| (n, n)).map_err(|_| bad()),
        Some((a, b)) => {
            let a: u32 = a.trim().parse().map_err(|_| bad())?;
            let b: u32 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
            if a > b {
                return Err(format!("empty range {s:?}"));
            }
            Ok((a, b))
        }
    }
}

#[derive(Args, Debug)]
struct ComputeArgs {
    #[arg(long, value_enum)]
    quantity: QuantityName,
    /// A single n or an inclusive range a..b.
    #[arg(long, value_parser = parse_range)]
    n: (u32, u32),
    /// Cycle-length threshold for s_below.
    #[arg(long)]
    k: Option<u32>,
    #[arg(long, value_enum, default_value_t = Scale::None)]
    scale: Scale,
    /// Sum the (scaled) values over the n of the given parity in the range.
    #[arg(long, value_enum)]
    sum: Option<SumOver>,
    /// Force a method instead of the method of record.
    #[arg(long, value_enum)]
    method: Option<MethodName>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Claim id; may be repeated.
    #[arg(long = "claim")]
    claims: Vec<String>,
    #[arg(long, conflicts_with = "claims")]
    all: bool,
    /// Upper end of every sweep range.
    #[arg(long)]
    max_n: Option<u32>,
    /// Probe n for the induction certificate.
    #[arg(long, default_value_t = 301)]
    n_probe: u32,
    /// Write the full JSON reports here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// List the known claim ids and exit.
    #[arg(long)]
    list: bool,
}

#[derive(Args, Debug)]
struct LimitsArgs {
    /// Terms in the partial sums; defaults to N.
    #[arg(long = "D")]
    d: Option<u32>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long, value_enum, required_unless_present = "split_half")]
    quantity: Option<QuantityName>,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    /// Estimate the rate at which S_n-conjugate elements of a split class
    /// are A_n-conjugate.
    #[arg(long, conflicts_with = "quantity")]
    split_half: bool,
    /// Write per-batch tallies as CSV here.
    #[arg(long)]
    batches: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(long, default_value_t = 2)]
    from: u32,
    #[arg(long, default_value_t = 60)]
    to: u32,
    /// Terms in the limit enclosures; defaults to N.
    #[arg(long = "D")]
    d: Option<u32>,
}

enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(workers) = cli.workers {
        // fails only if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(workers as usize).build_global();
    }
    match run(&cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage = matches!(
                e.downcast_ref::<Error>(),
                Some(Error::Usage(_) | Error::OutOfRange { .. } | Error::ParseRational(_) | Error::Degenerate(_))
            );
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let engine = Engine::new(cli.truncation);
    let out = match &cli.command {
        Command::Compute(a) => compute(cli, &engine, a)?,
        Command::Verify(a) => return verify(cli, &engine, a),
        Command::Limits(a) => limits_cmd(cli, &engine, a)?,
        Command::Simulate(a) => simulate(cli, a)?,
        Command::Table(a) => table(cli, &engine, a)?,
    };
    emit(&out)?;
    Ok(Outcome::Pass)
}

fn emit(text: &str) -> anyhow::Result<()> {
    let mut stdout = io::stdout().lock();
    stdout.write_all(text.as_bytes())?;
    stdout.flush()?;
    Ok(())
}

fn json(value: &impl serde::Serialize) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn csv_string(write: impl FnOnce(&mut Vec<u8>) -> Result<(), Error>) -> anyhow::Result<String> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    Ok(String::from_utf8(buf)?)
}

fn compute(cli: &Cli, engine: &Engine, a: &ComputeArgs) -> anyhow::Result<String> {
    let quantity = a.quantity.resolve(a.k)?;
    let (from, to) = a.n;
    if to > engine.order() {
        return Err(Error::OutOfRange { n: to, min: 0, max: engine.order() }.into());
    }
    let label = match a.scale {
        Scale::None => quantity.to_string(),
        Scale::N => format!("n*{quantity}"),
        Scale::N2 => format!("n2*{quantity}"),
    };
    let mut rows = Vec::new();
    for n in from..=to {
        let method = a.method.map(Method::from).unwrap_or_else(|| record_method(engine, quantity, n));
        let value = engine.value_by(quantity, n, method)?;
        let factor = match a.scale {
            Scale::None => ExactQ::one(),
            Scale::N => ExactQ::from(n),
            Scale::N2 => ExactQ::from(n).pow(2),
        };
        rows.push(TableRow::new(RowIndex::Single(n), label.clone(), value * factor, method, cli.precision));
    }
    if let Some(sum) = a.sum {
        let keep = |r: &TableRow| match (sum, r.n) {
            (SumOver::All, _) => true,
            (SumOver::Odd, RowIndex::Single(n)) => n % 2 == 1,
            (SumOver::Even, RowIndex::Single(n)) => n % 2 == 0,
            _ => false,
        };
        let kept: Vec<&TableRow> = rows.iter().filter(|r| keep(r)).collect();
        let total: ExactQ = kept.iter().map(|r| r.value.clone()).sum();
        let method = kept.first().map(|r| r.method).unwrap_or(Method::Enumeration);
        let name = match sum {
            SumOver::Odd => "sum_odd",
            SumOver::Even => "sum_even",
            SumOver::All => "sum",
        };
        rows = vec![TableRow::new(RowIndex::Range(from, to), format!("{name}({label})"), total, method, cli.precision)];
    }
    match cli.format.unwrap_or(Format::Plain) {
        Format::Json => json(&rows),
        Format::Csv => csv_string(|buf| export::write_table_csv(&rows, buf)),
        Format::Plain => {
            let mut s = String::new();
            for r in &rows {
                writeln!(s, "{}\t{}\t{}\t{}\t{}", r.n, r.quantity, r.value, r.decimal.value, r.method)?;
            }
            Ok(s)
        }
    }
}

fn record_method(engine: &Engine, quantity: Quantity, n: u32) -> Method {
    match quantity {
        Quantity::SBelow(_) => Method::GeneratingFunction,
        _ => engine.method_of_record(n),
    }
}

fn verify(cli: &Cli, engine: &Engine, a: &VerifyArgs) -> anyhow::Result<Outcome> {
    if a.list {
        let ids: String = Claim::ALL.iter().map(|c| format!("{}\n", c.id())).collect();
        emit(&ids)?;
        return Ok(Outcome::Pass);
    }
    let claims: Vec<Claim> = if a.all {
        Claim::ALL.to_vec()
    } else if a.claims.is_empty() {
        return Err(Error::Usage("give --claim <id> or --all".into()).into());
    } else {
        a.claims.iter().map(|id| Claim::from_id(id)).collect::<Result<_, _>>()?
    };
    let mut ranges = ClaimRanges { n_probe: a.n_probe, ..ClaimRanges::default() };
    ranges.uniform_max_n = ranges.uniform_max_n.min(engine.order());
    if let Some(m) = a.max_n {
        ranges.upper_max_n = m;
        ranges.lower_max_n = m;
        ranges.uniform_max_n = m;
        ranges.s15_max_n = m;
        ranges.tail_max_n = m;
    }
    let reports = claims.iter().map(|c| c.run(engine, &ranges)).collect::<Result<Vec<BoundReport>, _>>()?;
    if let Some(path) = &a.out {
        fs::write(path, json(&reports)?).with_context(|| format!("writing {}", path.display()))?;
    }
    let text = match cli.format.unwrap_or(Format::Plain) {
        Format::Json => json(&reports)?,
        Format::Csv => csv_string(|buf| export::write_verify_csv(&reports, buf))?,
        Format::Plain => reports.iter().map(|r| r.summary() + "\n").collect(),
    };
    emit(&text)?;
    Ok(if reports.iter().all(|r| r.holds) { Outcome::Pass } else { Outcome::Fail })
}

fn limits_cmd(cli: &Cli, engine: &Engine, a: &LimitsArgs) -> anyhow::Result<String> {
    let d = a.d.unwrap_or(engine.order());
    let rows = limits::limits_report(engine, d, cli.precision)?;
    match cli.format.unwrap_or(Format::Plain) {
        Format::Json => json(&rows),
        Format::Csv => csv_string(|buf| export::write_limits_csv(&rows, buf)),
        Format::Plain => {
            let mut s = String::new();
            for r in &rows {
                writeln!(s, "{:<7} D={} mid={} width={}", r.constant, r.d, r.decimal_mid, r.width.to_significant(6))?;
            }
            Ok(s)
        }
    }
}

fn simulate(cli: &Cli, a: &SimulateArgs) -> anyhow::Result<String> {
    let workers = cli.workers.unwrap_or_else(|| rayon::current_num_threads() as u64);
    if a.split_half {
        let r = montecarlo::split_half_rate(a.n, a.samples, cli.seed, workers)?;
        return match cli.format.unwrap_or(Format::Plain) {
            Format::Plain => Ok(format!(
                "split_half n={} rate={} ({}) std_error={:.6} z={:.3}\n",
                r.n,
                r.rate,
                r.rate.to_fixed(6),
                r.std_error,
                r.z_score()
            )),
            _ => json(&r),
        };
    }
    let quantity = a.quantity.expect("clap enforces --quantity").resolve(a.k)?;
    let est = montecarlo::estimate(quantity, a.n, a.samples, cli.seed, workers)?;
    if let Some(path) = &a.batches {
        let text = csv_string(|buf| export::write_batches_csv(&est.batches, buf))?;
        fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    match cli.format.unwrap_or(Format::Plain) {
        Format::Plain => Ok(format!(
            "{} n={} point={} ({}) std_error={:.6} samples={} seed={} workers={}\n",
            est.quantity,
            est.n,
            est.point,
            est.point.to_fixed(6),
            est.std_error,
            est.samples,
            est.seed,
            est.workers
        )),
        _ => json(&est),
    }
}

fn table(cli: &Cli, engine: &Engine, a: &TableArgs) -> anyhow::Result<String> {
    let d = a.d.unwrap_or(engine.order());
    let rows = limits::convergence_table(engine, a.from, a.to, d)?;
    match cli.format.unwrap_or(Format::Csv) {
        Format::Json => json(&rows),
        _ => csv_string(|buf| export::write_convergence_csv(&rows, cli.precision, buf)),
    }
}
