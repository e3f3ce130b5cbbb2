//! `diffop`: verification sweeps, block/operation counting, and
//! benchmark reports for the operator-arithmetic library, plus a
//! converter between the `θ` and `∂` JSON operator documents.

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use diffop::bench::{self, BenchConfig, BenchRecord, OutputFormat, ALGO_NAMES};
use diffop::conversions::{laurent_theta_to_partial, partial_to_theta, theta_to_partial};
use diffop::json::{laurent_to_value, operator_to_value, parse_operator, AnyOperator};
use diffop::ore::Var;

#[derive(Parser)]
#[command(name = "diffop", version, about = "Exact products of linear differential operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Multiply seeded random pairs with each named algorithm and check
    /// every product against the naive expansion. Exit code 0 iff all
    /// verifications pass.
    Verify(RunArgs),
    /// Time the named algorithms on seeded random pairs and report a
    /// table or CSV; optionally count block products and verify.
    Bench(RunArgs),
    /// Rewrite an operator document between the θ and ∂ forms.
    Convert(ConvertArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Table,
}

#[derive(Args)]
struct RunArgs {
    /// Comma-separated algorithm names; defaults to every algorithm.
    #[arg(long, value_delimiter = ',')]
    algos: Option<Vec<String>>,
    /// Comma-separated bidegrees n (operators are random of bidegree (n, n)).
    #[arg(long, value_delimiter = ',', default_value = "8")]
    sizes: Vec<usize>,
    /// Coefficient characteristic; 0 selects the rationals.
    #[arg(long, default_value_t = 65521)]
    prime: u64,
    /// Independent random pairs per size.
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Seed for the random operator generator.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Route matrix products through the blocked counter and report tallies.
    #[arg(long)]
    count_blocks: bool,
    /// Block size for the counters; defaults to the operator bidegree n.
    #[arg(long)]
    block_size: Option<usize>,
    /// Per-run wall-clock budget in seconds; overruns are flagged, not killed.
    #[arg(long, default_value_t = 60)]
    timeout: u64,
    /// Check each product against the naive expansion (always on for `verify`).
    #[arg(long)]
    verify: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetVar {
    Theta,
    Partial,
}

#[derive(Args)]
struct ConvertArgs {
    /// Target operator form.
    #[arg(long, value_enum)]
    to: TargetVar,
    /// Input JSON document; reads standard input when omitted.
    input: Option<PathBuf>,
    /// Output path; writes to standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify(args) => run_sweep(args, true),
        Command::Bench(args) => run_sweep(args, false),
        Command::Convert(args) => convert(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run_sweep(args: RunArgs, force_verify: bool) -> Result<ExitCode, String> {
    let config = BenchConfig {
        algos: args
            .algos
            .unwrap_or_else(|| ALGO_NAMES.iter().map(|s| s.to_string()).collect()),
        sizes: args.sizes,
        p: args.prime,
        trials: args.trials,
        seed: args.seed,
        format: match args.format {
            Format::Csv => OutputFormat::Csv,
            Format::Table => OutputFormat::Table,
        },
        verify: force_verify || args.verify,
        count_blocks: args.count_blocks,
        block_size: args.block_size,
        timeout_secs: args.timeout,
        ..BenchConfig::default()
    };
    let (records, rendered) = bench::run(&config).map_err(|e| e.to_string())?;
    print!("{rendered}");
    Ok(if all_verified(&records) { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn all_verified(records: &[BenchRecord]) -> bool {
    records.iter().all(|r| r.verified.unwrap_or(true) && !r.timed_out)
}

fn convert(args: ConvertArgs) -> Result<ExitCode, String> {
    let text = match &args.input {
        Some(path) => fs::read_to_string(path).map_err(|e| e.to_string())?,
        None => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf).map_err(|e| e.to_string())?;
            buf
        }
    };
    let parsed = parse_operator(&text).map_err(|e| e.to_string())?;
    let value = match parsed {
        AnyOperator::PrimeOp(op) => convert_op(op, args.to),
        AnyOperator::RatOp(op) => convert_op(op, args.to),
        AnyOperator::PrimeLaurent(l) => convert_laurent(l, args.to),
        AnyOperator::RatLaurent(l) => convert_laurent(l, args.to),
    };
    let doc = value.to_string();
    match &args.output {
        Some(path) => fs::write(path, doc + "\n").map_err(|e| e.to_string())?,
        None => println!("{doc}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn convert_op<F: diffop::domain::Field>(
    op: diffop::ore::OrePoly<F>,
    to: TargetVar,
) -> serde_json::Value {
    match (op.var(), to) {
        (Var::Theta, TargetVar::Partial) => operator_to_value(&theta_to_partial(&op)),
        (Var::Partial, TargetVar::Theta) => {
            let l = partial_to_theta(&op);
            match l.to_theta() {
                Some(t) => operator_to_value(&t),
                None => laurent_to_value(&l),
            }
        }
        _ => operator_to_value(&op),
    }
}

fn convert_laurent<F: diffop::domain::Field>(
    l: diffop::conversions::LaurentThetaPoly<F>,
    to: TargetVar,
) -> serde_json::Value {
    match to {
        TargetVar::Partial => operator_to_value(&laurent_theta_to_partial(&l)),
        TargetVar::Theta => laurent_to_value(&l),
    }
}
