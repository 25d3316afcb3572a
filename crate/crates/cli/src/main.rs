use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use revcf::exactlin::{NormKind, SimplexPoint};
use revcf::lyapunov_bounds::spectrum::DEFAULT_SEED;
use revcf::lyapunov_bounds::bounds::{sorted_prefactor, unsorted_prefactor};
use revcf::lyapunov_bounds::{bound_report, mass, mc_spectrum, McConfig, PrefixSums, Variant};
use revcf::reverse_cfa::orbit;
use revcf::sadic::language::{DEFAULT_FACTOR_CAP, DEFAULT_FACTOR_WINDOW};
use revcf::sadic::{
    balance_report, generate_language, parse_pattern, DirectiveSequence,
};
use revcf::verify::{
    balance_growth_checks, billiard_checks, cocycle_checks, lemma_constant_checks, measure_checks, renyi_checks, Check,
};

/// Reverse continued fractions: Lyapunov bounds and the associated S-adic system.
#[derive(Debug, Parser, Serialize)]
#[command(name = "revcf", version = revcf::VERSION)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for every randomised computation.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads for the cylinder enumeration (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the JSON record here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Matrix norm used for log‖D‖: row, induced (column sum) or entrywise.
    #[arg(long, global = true, default_value = "row", value_parser = parse_norm)]
    #[serde(serialize_with = "ser_norm")]
    norm: NormKind,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Upper bound L1(n) + L2(n) for the Reverse algorithm.
    Bound(BoundArgs),
    /// Upper bound L1'(n) + L2'(n) for the sorted variant.
    BoundSorted(BoundArgs),
    /// Monte-Carlo Lyapunov spectrum.
    Mc(McArgs),
    /// Iterate the map from a point of the simplex.
    Orbit(OrbitArgs),
    /// Generate the words τ_[0,n)(i) of a directive sequence.
    Language(SeqArgs),
    /// Balance constants of a directive sequence.
    Balance(BalanceArgs),
    /// Run the lemma, cocycle and measure checks.
    VerifyLemmas(VerifyArgs),
    /// Total mass of the invariant measure.
    Mass(MassArgs),
}

#[derive(Debug, Args, Serialize)]
struct BoundArgs {
    #[arg(long)]
    n: usize,
    /// Write per-prefix partial sums as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct McArgs {
    #[arg(long, default_value_t = 10_000_000)]
    iterations: u64,
    #[arg(long, default_value_t = 1000)]
    burn_in: u64,
    #[arg(long, default_value_t = 100)]
    batches: u64,
}

#[derive(Debug, Args, Serialize)]
struct OrbitArgs {
    /// Starting point "x0,x1,x2" (default: the barycenter).
    #[arg(long)]
    x: Option<String>,
    #[arg(long, default_value_t = 20)]
    steps: usize,
}

#[derive(Debug, Args, Serialize)]
struct SeqArgs {
    #[arg(long, default_value_t = 12)]
    depth: usize,
    /// Longest word kept, in letters.
    #[arg(long, default_value_t = 200)]
    cap: usize,
    /// Periodic directive pattern such as "1234"; random symbols otherwise.
    #[arg(long)]
    pattern: Option<String>,
    /// Fraction of 27-symbol chunks replaced by the block (σ1σ2σ3)^9.
    #[arg(long, default_value_t = 0.05)]
    inject_rate: f64,
}

#[derive(Debug, Args, Serialize)]
struct BalanceArgs {
    #[command(flatten)]
    seq: SeqArgs,
    #[arg(long, default_value_t = DEFAULT_FACTOR_CAP)]
    factor_cap: usize,
    #[arg(long, default_value_t = DEFAULT_FACTOR_WINDOW)]
    factor_window: usize,
}

#[derive(Debug, Args, Serialize)]
struct VerifyArgs {
    /// Sample count for the randomised checks.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
}

#[derive(Debug, Args, Serialize)]
struct MassArgs {
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

fn parse_norm(s: &str) -> Result<NormKind, String> {
    s.parse().map_err(|e: revcf::Error| e.to_string())
}

fn ser_norm<S: serde::Serializer>(n: &NormKind, s: S) -> Result<S::Ok, S::Error> {
    n.serialize(s)
}

fn sequence(cli: &Cli, a: &SeqArgs) -> anyhow::Result<DirectiveSequence> {
    Ok(match &a.pattern {
        Some(p) => DirectiveSequence::periodic(parse_pattern(p)?, a.inject_rate)?,
        None => DirectiveSequence::random(cli.seed, a.inject_rate)?,
    })
}

fn parse_point(s: &str) -> anyhow::Result<SimplexPoint<f64>> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .with_context(|| format!("bad point {s:?}"))?;
    if v.len() != 3 {
        bail!("point needs three coordinates, got {}", v.len());
    }
    Ok(SimplexPoint::new(v[0], v[1], v[2])?)
}

/// Per-prefix contributions to L2(n), already multiplied by the prefactor.
fn write_csv(path: &Path, rows: &[PrefixSums<f64>], c: f64) -> anyhow::Result<()> {
    let mut f = io::BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    writeln!(f, "prefix,count,positive,negative,total,swapped_positive,swapped_negative")?;
    for r in rows {
        let prefix: String = r.prefix.iter().map(|i| char::from(b'1' + *i as u8)).collect();
        let s = &r.sums;
        writeln!(
            f,
            "{prefix},{},{:e},{:e},{:e},{:e},{:e}",
            s.count,
            c * s.positive,
            c * s.negative,
            c * (s.positive + s.negative),
            c * s.swapped_positive,
            c * s.swapped_negative
        )?;
    }
    Ok(f.flush()?)
}

fn checks_value(checks: &[Check]) -> (bool, Value) {
    (checks.iter().all(|c| c.passed), json!(checks))
}

fn run(cli: &Cli) -> anyhow::Result<(bool, Value)> {
    match &cli.command {
        Command::Bound(a) | Command::BoundSorted(a) => {
            let (variant, c) = match cli.command {
                Command::Bound(_) => (Variant::Unsorted, unsorted_prefactor::<f64>(a.n)),
                _ => (Variant::Sorted, sorted_prefactor::<f64>(a.n)),
            };
            let (report, prefixes) = bound_report(variant, a.n, cli.norm, cli.threads)?;
            if let Some(p) = &a.csv {
                write_csv(p, &prefixes, c)?;
            }
            Ok((true, json!(report)))
        }
        Command::Mc(a) => {
            let cfg = McConfig {
                iterations: a.iterations,
                burn_in: a.burn_in,
                batches: a.batches,
                seed: cli.seed,
                ..McConfig::default()
            };
            let e = mc_spectrum(&cfg)?;
            Ok((e.lambda1 >= e.lambda2 && e.lambda2 >= e.lambda3, json!(e)))
        }
        Command::Orbit(a) => {
            let x = match &a.x {
                Some(s) => parse_point(s)?,
                None => SimplexPoint::barycenter(),
            };
            let (y, word) = orbit(&x, a.steps)?;
            Ok((true, json!({ "start": x.to_f64(), "end": y.to_f64(), "word": word.to_string() })))
        }
        Command::Language(a) => {
            let d = sequence(cli, a)?;
            let s = generate_language(&d, a.depth, a.cap)?;
            let images: Vec<Value> = s
                .images
                .iter()
                .map(|w| json!({ "len": w.len(), "word": revcf::sadic::word_string(w) }))
                .collect();
            Ok((
                true,
                json!({
                    "directive": d.prefix(a.depth)?,
                    "images": images,
                    "words": s.words.len(),
                    "letters": s.total_len(),
                    "factors": s.factors.len(),
                }),
            ))
        }
        Command::Balance(a) => {
            let d = sequence(cli, &a.seq)?;
            let r = balance_report(&d, a.seq.depth, a.seq.cap, a.factor_cap, a.factor_window)?;
            Ok((r.two_c_holds, json!(r)))
        }
        Command::VerifyLemmas(a) => {
            let n = a.samples;
            let s = cli.seed;
            let mut all = renyi_checks(10 * n, 25, s)?;
            all.extend(lemma_constant_checks(n, 10, 100, s)?);
            all.push(balance_growth_checks(n, 60, s)?);
            all.push(billiard_checks(n, 50, s)?);
            all.extend(cocycle_checks(n / 10, 10, s)?);
            all.extend(measure_checks()?);
            Ok(checks_value(&all))
        }
        Command::Mass(a) => {
            let m = mass::<f64>(a.tol)?;
            Ok(((m.value - 1.0).abs() < 1e-6, json!(m)))
        }
    }
}

fn emit(cli: &Cli, record: &Value) -> anyhow::Result<()> {
    let line = serde_json::to_string(record)?;
    match &cli.out {
        Some(p) => {
            let mut f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            writeln!(f, "{line}")?;
        }
        None => {
            if let Err(e) = writeln!(io::stdout().lock(), "{line}") {
                if e.kind() != io::ErrorKind::BrokenPipe {
                    return Err(e.into());
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli);
    let (passed, record) = match outcome {
        Ok((passed, result)) => (passed, json!({ "passed": passed, "result": result })),
        Err(e) => (false, json!({ "passed": false, "error": format!("{e:#}") })),
    };
    let mut record = record;
    record["config"] = json!(cli);
    record["version"] = json!(revcf::VERSION);
    if let Err(e) = emit(&cli, &record) {
        eprintln!("revcf: {e:#}");
        return ExitCode::FAILURE;
    }
    if let Some(err) = record.get("error") {
        eprintln!("revcf: {}", err.as_str().unwrap_or_default());
    }
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
