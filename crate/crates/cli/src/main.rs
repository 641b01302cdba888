use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use menon_core::arith::prime_power;
use menon_core::counts::{self, CountStrategy};
use menon_core::oracle::{self, DEFAULT_ENUMERATION_LIMIT};
use menon_core::table::{self, check_k};
use menon_core::verify::{self, VerifyConfig};
use menon_core::{
    Count, Error, FunctionTag, MemoCache, MenonParams, MenonStrategy, SequenceTable, SieveTables,
    TableFormat,
};

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "menon",
    version,
    about = "Relatively prime subset counts and Menon-type sums"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Function {
    F,
    Fk,
    Phi,
    Phik,
    Menon,
    Mbar,
    Mbark,
}

impl From<Function> for FunctionTag {
    fn from(f: Function) -> Self {
        match f {
            Function::F => FunctionTag::F,
            Function::Fk => FunctionTag::Fk,
            Function::Phi => FunctionTag::Phi,
            Function::Phik => FunctionTag::Phik,
            Function::Menon => FunctionTag::Menon,
            Function::Mbar => FunctionTag::Mbar,
            Function::Mbark => FunctionTag::Mbark,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    Theorem,
    PrimePower,
    Auto,
}

impl From<Strategy> for MenonStrategy {
    fn from(s: Strategy) -> Self {
        match s {
            Strategy::Theorem => MenonStrategy::Theorem,
            Strategy::PrimePower => MenonStrategy::PrimePower,
            Strategy::Auto => MenonStrategy::Auto,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print one exact value.
    Compute {
        function: Function,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: Option<u64>,
        /// Evaluation route for mbar/mbark.
        #[arg(long, value_enum)]
        strategy: Option<Strategy>,
    },
    /// Emit the values at n = 1..=n_max.
    Table {
        function: Function,
        #[arg(long)]
        n_max: u64,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long, value_enum)]
        strategy: Option<Strategy>,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check every closed form against the oracles.
    Verify {
        #[arg(long, default_value_t = 16)]
        n_max_enum: u64,
        #[arg(long, default_value_t = 300)]
        n_max_formula: u64,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        k_set: Vec<u64>,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
        enumeration_limit: u64,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
        /// Corrupt μ(n) in the sieve before verifying; exercises the failure path.
        #[arg(long, hide = true)]
        corrupt_mu_at: Option<u64>,
    },
    /// Time evaluation strategies against each other.
    Bench {
        function: Function,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: Option<u64>,
        /// theorem, prime-power, gcd-class (mbar/mbark) or direct, blocked (f/fk).
        #[arg(long, value_delimiter = ',', default_value = "theorem")]
        strategies: Vec<String>,
        #[arg(long, default_value_t = 1)]
        repetitions: u32,
    },
}

enum Failure {
    Usage(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute {
            function,
            n,
            k,
            strategy,
        } => compute(function.into(), n, k, strategy),
        Command::Table {
            function,
            n_max,
            k,
            format,
            strategy,
            out,
        } => table(function.into(), n_max, k, format, strategy, out),
        Command::Verify {
            n_max_enum,
            n_max_formula,
            k_set,
            enumeration_limit,
            json,
            corrupt_mu_at,
        } => {
            let config = VerifyConfig {
                n_max_enum,
                n_max_formula,
                k_set,
                enumeration_limit,
            };
            verify(&config, json, corrupt_mu_at)
        }
        Command::Bench {
            function,
            n,
            k,
            strategies,
            repetitions,
        } => bench(function.into(), n, k, &strategies, repetitions),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Mismatch(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_MISMATCH)
        }
    }
}

fn menon_strategy(tag: FunctionTag, strategy: Option<Strategy>) -> Result<MenonStrategy, Failure> {
    match strategy {
        Some(_) if !tag.takes_strategy() => Err(Failure::Usage(format!(
            "--strategy only applies to mbar and mbark, not `{tag}`"
        ))),
        Some(s) => Ok(s.into()),
        None => Ok(MenonStrategy::Auto),
    }
}

fn compute(
    tag: FunctionTag,
    n: u64,
    k: Option<u64>,
    strategy: Option<Strategy>,
) -> Result<(), Failure> {
    let strategy = menon_strategy(tag, strategy)?;
    check_k(tag, k)?;
    if n == 0 {
        return Err(Failure::Usage("n must be at least 1".into()));
    }
    let sieve = SieveTables::build(n)?;
    let mut cache = MemoCache::new();
    let value = table::evaluate(tag, n, k, strategy, &sieve, &mut cache)?;
    println!("{value}");
    Ok(())
}

fn table(
    tag: FunctionTag,
    n_max: u64,
    k: Option<u64>,
    format: Format,
    strategy: Option<Strategy>,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let strategy = menon_strategy(tag, strategy)?;
    let format = match format {
        Format::Csv => TableFormat::Csv,
        Format::Json => TableFormat::Json,
    };
    let text = SequenceTable::compute(tag, k, n_max, strategy)?.render(format);
    match out {
        Some(path) => fs::write(&path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verify(config: &VerifyConfig, json: bool, corrupt_mu_at: Option<u64>) -> Result<(), Failure> {
    let limit = config.n_max_formula.max(config.n_max_enum).max(6);
    let mut sieve = SieveTables::build(limit)?;
    if let Some(n) = corrupt_mu_at.filter(|&n| n >= 1 && n <= limit) {
        let flipped = if sieve.mu(n) == 1 { -1 } else { 1 };
        sieve = sieve.corrupt_mu(n, flipped);
    }
    let report = verify::run_with_sieve(config, &sieve)?;
    if json {
        println!("{}", report.to_json());
    } else {
        println!("{report}");
    }
    if report.overall {
        Ok(())
    } else {
        Err(Failure::Mismatch("verification failed".into()))
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum BenchRoute {
    Menon(MenonStrategy),
    GcdClass,
    Count(CountStrategy),
}

fn parse_route(tag: FunctionTag, n: u64, name: &str) -> Result<BenchRoute, Failure> {
    let route = match (tag, name) {
        (FunctionTag::Mbar | FunctionTag::Mbark, "gcd-class") => BenchRoute::GcdClass,
        (FunctionTag::Mbar | FunctionTag::Mbark, s) => BenchRoute::Menon(s.parse()?),
        (FunctionTag::F | FunctionTag::Fk, s) => BenchRoute::Count(s.parse()?),
        _ => {
            return Err(Failure::Usage(format!(
                "`{tag}` has no strategies to compare"
            )))
        }
    };
    if route == BenchRoute::Menon(MenonStrategy::PrimePower) && prime_power(n).is_none() {
        return Err(Failure::Usage(format!(
            "prime-power strategy needs a prime power, got {n}"
        )));
    }
    Ok(route)
}

fn run_route(
    n: u64,
    k: Option<u64>,
    route: BenchRoute,
    sieve: &SieveTables,
) -> menon_core::Result<(Count, u64)> {
    let mut cache = match route {
        BenchRoute::Count(s) => MemoCache::with_strategy(s),
        _ => MemoCache::new(),
    };
    let value = match (route, k) {
        (BenchRoute::Menon(s), _) => MenonParams::new(n, k, s).evaluate(sieve, &mut cache)?,
        (BenchRoute::GcdClass, None) => oracle::gcd_class_mbar(n, sieve, &mut cache)?,
        (BenchRoute::GcdClass, Some(k)) => oracle::gcd_class_mbar_k(n, k, sieve, &mut cache)?,
        (BenchRoute::Count(s), None) => counts::f_with(n, sieve, s)?,
        (BenchRoute::Count(s), Some(k)) => counts::f_k_with(n, k, sieve, s)?,
    };
    let evaluations = match route {
        BenchRoute::Count(_) => 1,
        _ => cache.evaluations(),
    };
    Ok((value, evaluations))
}

fn bench(
    tag: FunctionTag,
    n: u64,
    k: Option<u64>,
    strategies: &[String],
    repetitions: u32,
) -> Result<(), Failure> {
    check_k(tag, k)?;
    if n == 0 || repetitions == 0 {
        return Err(Failure::Usage(
            "n and repetitions must be at least 1".into(),
        ));
    }
    let mut routes = strategies
        .iter()
        .map(|s| Ok((s.as_str(), parse_route(tag, n, s)?)))
        .collect::<Result<Vec<_>, Failure>>()?;
    // mbar timings are always cross-checked against the gcd-class oracle
    if tag.takes_strategy() && !routes.iter().any(|(_, r)| *r == BenchRoute::GcdClass) {
        routes.push(("gcd-class", BenchRoute::GcdClass));
    }
    let sieve = SieveTables::build(n)?;

    let mut rows = Vec::new();
    for (name, route) in routes {
        let mut best = f64::INFINITY;
        let mut last = None;
        for _ in 0..repetitions {
            let start = Instant::now();
            let result = run_route(n, k, route, &sieve)?;
            best = best.min(start.elapsed().as_secs_f64());
            last = Some(result);
        }
        let (value, evaluations) = last.expect("at least one repetition");
        rows.push((name, best, evaluations, value));
    }

    let reference = &rows[0].3;
    if let Some((name, ..)) = rows.iter().find(|r| &r.3 != reference) {
        return Err(Failure::Mismatch(format!(
            "strategy `{name}` disagrees with `{}`; timings withheld",
            rows[0].0
        )));
    }
    let k_label = k.map(|k| format!(" k={k}")).unwrap_or_default();
    println!("{tag} n={n}{k_label} value={reference}");
    for (name, secs, evaluations, _) in &rows {
        println!(
            "{name:<12} {:>12.3} ms  {evaluations} f-evaluations",
            secs * 1e3
        );
    }
    Ok(())
}
