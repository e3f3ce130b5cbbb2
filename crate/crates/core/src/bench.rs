//! Benchmark and verification harness behind the command-line tool.
//!
//! One run multiplies seeded random operator pairs of bidegree `(n, n)`
//! with every requested algorithm, optionally verifying each product
//! against the naive expansion, counting coefficient operations and
//! `n x n` block products, and rendering the records as CSV or an
//! aligned table. Wall times are recorded but nothing is asserted on
//! them; the operation counts are the machine-independent signal.

use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::charp::mul_theta_p;
use crate::dmul::mul_partial_vdh;
use crate::domain::{Field, PrimeField, Rationals};
use crate::matrix::BlockCounter;
use crate::opcount;
use crate::ore::{self, OrePoly, Var};
use crate::theta::{mul_theta_vdh, Blocking, Variant};
use crate::weyl::mul_weyl;
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OutputFormat {
    Csv,
    Table,
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    /// Algorithm names; see [`Algo::parse`] for the vocabulary.
    pub algos: Vec<String>,
    /// Bidegrees: each `n` means operators of bidegree `(n, n)`.
    pub sizes: Vec<usize>,
    /// Characteristic: `0` for the rationals, a prime otherwise.
    pub p: u64,
    pub trials: usize,
    pub seed: u64,
    pub format: OutputFormat,
    /// Check every product against the naive expansion.
    pub verify: bool,
    /// Route the matrix products through counted block decompositions.
    pub count_blocks: bool,
    /// Block size for the counters; defaults to the current `n`.
    pub block_size: Option<usize>,
    /// Runs longer than this are flagged in the records.
    pub timeout_secs: u64,
    /// Test hook: perturb one coefficient of each product before
    /// verification, so that verify must report a failure.
    pub fault_inject: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            algos: vec!["naive".into()],
            sizes: vec![8],
            p: 65521,
            trials: 1,
            seed: 0,
            format: OutputFormat::Table,
            verify: false,
            count_blocks: false,
            block_size: None,
            timeout_secs: 60,
            fault_inject: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchRecord {
    pub algorithm: String,
    pub n: usize,
    pub p: u64,
    pub trial: usize,
    pub seed: u64,
    pub elapsed_ns: u128,
    pub coeff_ops: u64,
    pub blocks: Option<BlockCounter>,
    /// `Some` exactly when verification ran.
    pub verified: Option<bool>,
    /// Reason the run was skipped (characteristic precondition).
    pub skipped: Option<String>,
    pub timed_out: bool,
}

/// The algorithm vocabulary of the harness.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Algo {
    Naive,
    IterDx,
    IterX,
    Iter,
    Takayama,
    /// Laurent evaluation-interpolation in `∂`, Vandermonde products.
    Vdh,
    /// Same with fast multipoint evaluation/interpolation.
    Ivdh,
    MulWeyl,
    ThetaNaive,
    /// Evaluation-interpolation in `θ`, Vandermonde products.
    ThetaVdh,
    /// Same with fast multipoint evaluation/interpolation.
    ThetaIvdh,
    /// Positive-characteristic product through `K[X^p, θ]`.
    ThetaP,
}

pub const ALGO_NAMES: &[&str] = &[
    "naive", "iter-dx", "iter-x", "iter", "takayama", "vdh", "ivdh", "mulweyl", "theta-naive",
    "theta-vdh", "theta-ivdh", "theta-p",
];

impl Algo {
    pub fn parse(name: &str) -> Result<Algo> {
        Ok(match name {
            "naive" => Algo::Naive,
            "iter-dx" => Algo::IterDx,
            "iter-x" => Algo::IterX,
            "iter" => Algo::Iter,
            "takayama" => Algo::Takayama,
            "vdh" => Algo::Vdh,
            "ivdh" => Algo::Ivdh,
            "mulweyl" => Algo::MulWeyl,
            "theta-naive" => Algo::ThetaNaive,
            "theta-vdh" => Algo::ThetaVdh,
            "theta-ivdh" => Algo::ThetaIvdh,
            "theta-p" => Algo::ThetaP,
            _ => return Err(Error::UnknownAlgorithm(name.to_string())),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Algo::Naive => "naive",
            Algo::IterDx => "iter-dx",
            Algo::IterX => "iter-x",
            Algo::Iter => "iter",
            Algo::Takayama => "takayama",
            Algo::Vdh => "vdh",
            Algo::Ivdh => "ivdh",
            Algo::MulWeyl => "mulweyl",
            Algo::ThetaNaive => "theta-naive",
            Algo::ThetaVdh => "theta-vdh",
            Algo::ThetaIvdh => "theta-ivdh",
            Algo::ThetaP => "theta-p",
        }
    }

    pub fn var(&self) -> Var {
        match self {
            Algo::Naive
            | Algo::IterDx
            | Algo::IterX
            | Algo::Iter
            | Algo::Takayama
            | Algo::Vdh
            | Algo::Ivdh
            | Algo::MulWeyl => Var::Partial,
            Algo::ThetaNaive | Algo::ThetaVdh | Algo::ThetaIvdh | Algo::ThetaP => Var::Theta,
        }
    }

    fn run<F: Field>(
        &self,
        b: &OrePoly<F>,
        a: &OrePoly<F>,
        blocking: Blocking,
        counter: Option<&mut BlockCounter>,
    ) -> Result<OrePoly<F>> {
        match self {
            Algo::Naive | Algo::ThetaNaive => ore::mul_naive(b, a),
            Algo::IterDx => ore::mul_iter_dx(b, a),
            Algo::IterX => ore::mul_iter_x(b, a),
            Algo::Iter => ore::mul_iter(b, a),
            Algo::Takayama => ore::mul_takayama(b, a),
            Algo::Vdh => mul_partial_vdh(b, a, Variant::Vandermonde, blocking, counter),
            Algo::Ivdh => mul_partial_vdh(b, a, Variant::Fast, blocking, counter),
            Algo::MulWeyl => mul_weyl(b, a, blocking, counter),
            Algo::ThetaVdh => mul_theta_vdh(b, a, Variant::Vandermonde, blocking, counter),
            Algo::ThetaIvdh => mul_theta_vdh(b, a, Variant::Fast, blocking, counter),
            Algo::ThetaP => mul_theta_p(b, a),
        }
    }
}

/// Seeded random operator of exact bidegree `(d, r)`: coefficients are
/// 16-bit integers mapped into the domain, the corner coefficient
/// resampled until nonzero.
pub fn random_op<F: Field>(
    var: Var,
    domain: F,
    d: usize,
    r: usize,
    rng: &mut ChaCha8Rng,
) -> OrePoly<F> {
    let mut sample = |nonzero: bool| loop {
        let c = domain.from_i64(rng.gen_range(-32768..=32767i64));
        if !nonzero || !domain.is_zero(&c) {
            return c;
        }
    };
    let grid = (0..=d)
        .map(|i| (0..=r).map(|j| sample(i == d && j == r)).collect())
        .collect();
    OrePoly::new(var, domain, grid)
}

fn validate(config: &BenchConfig) -> Result<Vec<Algo>> {
    if config.sizes.is_empty() {
        return Err(Error::InvalidConfig("size list is empty".into()));
    }
    if config.sizes.iter().any(|&n| n == 0) {
        return Err(Error::InvalidConfig("sizes must be positive".into()));
    }
    if config.trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    if config.algos.is_empty() {
        return Err(Error::InvalidConfig("algorithm list is empty".into()));
    }
    config.algos.iter().map(|s| Algo::parse(s)).collect()
}

fn run_domain<F: Field>(
    domain: F,
    algos: &[Algo],
    config: &BenchConfig,
) -> Result<Vec<BenchRecord>> {
    let mut records = Vec::new();
    for &n in &config.sizes {
        for trial in 0..config.trials {
            // One shared pair per (n, trial), derived from a stream
            // independent of the algorithm list.
            let pair_seed = config
                .seed
                .wrapping_add((n as u64).wrapping_mul(0x9e3779b97f4a7c15))
                .wrapping_add(trial as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(pair_seed);
            let b_partial = random_op(Var::Partial, domain, n, n, &mut rng);
            let a_partial = random_op(Var::Partial, domain, n, n, &mut rng);
            let b_theta = random_op(Var::Theta, domain, n, n, &mut rng);
            let a_theta = random_op(Var::Theta, domain, n, n, &mut rng);
            let mut oracle_partial: Option<OrePoly<F>> = None;
            let mut oracle_theta: Option<OrePoly<F>> = None;
            for algo in algos {
                let (b, a) = match algo.var() {
                    Var::Partial => (&b_partial, &a_partial),
                    Var::Theta => (&b_theta, &a_theta),
                };
                let blocking = if config.count_blocks {
                    Blocking::Blocked(config.block_size.unwrap_or(n))
                } else {
                    Blocking::None
                };
                let mut counter = BlockCounter::new(config.block_size.unwrap_or(n));
                let start = Instant::now();
                let (outcome, ops) = opcount::measure(|| {
                    algo.run(b, a, blocking, if config.count_blocks { Some(&mut counter) } else { None })
                });
                let elapsed_ns = start.elapsed().as_nanos();
                let mut record = BenchRecord {
                    algorithm: algo.name().to_string(),
                    n,
                    p: config.p,
                    trial,
                    seed: pair_seed,
                    elapsed_ns,
                    coeff_ops: ops,
                    blocks: config.count_blocks.then(|| counter.clone()),
                    verified: None,
                    skipped: None,
                    timed_out: elapsed_ns > config.timeout_secs as u128 * 1_000_000_000,
                };
                match outcome {
                    Ok(mut product) => {
                        if config.fault_inject {
                            let one = OrePoly::one(algo.var(), domain);
                            product = product.add(&one)?;
                        }
                        if config.verify {
                            let oracle = match algo.var() {
                                Var::Partial => oracle_partial
                                    .get_or_insert_with(|| ore::mul_naive(b, a).unwrap()),
                                Var::Theta => oracle_theta
                                    .get_or_insert_with(|| ore::mul_naive(b, a).unwrap()),
                            };
                            record.verified = Some(product == *oracle);
                        }
                    }
                    Err(
                        e @ (Error::CharacteristicTooSmall { .. } | Error::ZeroCharacteristic),
                    ) => {
                        record.skipped = Some(e.to_string());
                    }
                    Err(e) => return Err(e),
                }
                records.push(record);
            }
        }
    }
    Ok(records)
}

/// Runs the configured sweep and renders the records in the configured
/// format. For a fixed seed and config the rendering is deterministic
/// except for the time column.
pub fn run(config: &BenchConfig) -> Result<(Vec<BenchRecord>, String)> {
    let algos = validate(config)?;
    let records = if config.p == 0 {
        run_domain(Rationals, &algos, config)?
    } else {
        run_domain(PrimeField::new(config.p)?, &algos, config)?
    };
    let rendered = match config.format {
        OutputFormat::Csv => render_csv(&records),
        OutputFormat::Table => render_table(&records),
    };
    Ok((records, rendered))
}

fn record_cells(r: &BenchRecord) -> Vec<String> {
    let (blocks, naive, strassen, skipped_blocks) = match &r.blocks {
        Some(c) => (
            c.performed().to_string(),
            c.naive.to_string(),
            c.strassen.to_string(),
            c.skipped.to_string(),
        ),
        None => ("-".into(), "-".into(), "-".into(), "-".into()),
    };
    vec![
        r.algorithm.clone(),
        r.n.to_string(),
        r.p.to_string(),
        r.trial.to_string(),
        r.seed.to_string(),
        if r.skipped.is_some() { "-".into() } else { r.coeff_ops.to_string() },
        blocks,
        naive,
        strassen,
        skipped_blocks,
        r.elapsed_ns.to_string(),
        if r.timed_out { "yes" } else { "no" }.to_string(),
        match (&r.skipped, r.verified) {
            (Some(_), _) => "skip".into(),
            (None, Some(true)) => "pass".into(),
            (None, Some(false)) => "FAIL".into(),
            (None, None) => "-".into(),
        },
    ]
}

const HEADER: [&str; 13] = [
    "algorithm",
    "n",
    "p",
    "trial",
    "seed",
    "ops",
    "blocks",
    "blocks_naive",
    "blocks_strassen",
    "blocks_skipped",
    "time_ns",
    "timeout",
    "status",
];

pub fn render_csv(records: &[BenchRecord]) -> String {
    let mut out = String::new();
    out.push_str(&HEADER.join(","));
    out.push('\n');
    for r in records {
        out.push_str(&record_cells(r).join(","));
        out.push('\n');
    }
    out
}

pub fn render_table(records: &[BenchRecord]) -> String {
    let rows: Vec<Vec<String>> = std::iter::once(HEADER.iter().map(|s| s.to_string()).collect())
        .chain(records.iter().map(record_cells))
        .collect();
    let widths: Vec<usize> = (0..HEADER.len())
        .map(|i| rows.iter().map(|r| r[i].len()).max().unwrap())
        .collect();
    let mut out = String::new();
    for row in &rows {
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            let _ = write!(out, "{cell:>width$}", width = widths[i]);
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ore::Bidegree;

    fn fp() -> PrimeField {
        PrimeField::new(65521).unwrap()
    }

    #[test]
    fn random_op_is_deterministic_and_exact() {
        let f = fp();
        let mut r1 = ChaCha8Rng::seed_from_u64(42);
        let mut r2 = ChaCha8Rng::seed_from_u64(42);
        let a = random_op(Var::Partial, f, 5, 3, &mut r1);
        let b = random_op(Var::Partial, f, 5, 3, &mut r2);
        assert_eq!(a, b);
        assert_eq!(a.bidegree(), Bidegree::Deg { d: 5, r: 3 });
    }

    #[test]
    fn residue_frequencies_look_uniform() {
        let f5 = PrimeField::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut counts = [0u32; 5];
        use crate::domain::Field;
        for _ in 0..10_000 {
            counts[f5.from_i64(rng.gen_range(-32768..=32767i64)) as usize] += 1;
        }
        // 5 sigma around the uniform expectation 2000, sigma = sqrt(n p (1-p)) = 40.
        for c in counts {
            assert!((1800..=2200).contains(&c), "counts {counts:?}");
        }
    }

    #[test]
    fn verify_sweep_passes() {
        let config = BenchConfig {
            algos: vec!["mulweyl".into(), "naive".into()],
            sizes: vec![8],
            verify: true,
            ..Default::default()
        };
        let (records, _) = run(&config).unwrap();
        assert_eq!(records.len(), 2);
        assert!(records.iter().all(|r| r.verified == Some(true)));
    }

    #[test]
    fn count_blocks_reports_table_entries() {
        for (algo, want) in [
            ("theta-vdh", 37),
            ("theta-ivdh", 24),
            ("vdh", 96),
            ("ivdh", 48),
            ("mulweyl", 12),
        ] {
            let config = BenchConfig {
                algos: vec![algo.into()],
                sizes: vec![8],
                count_blocks: true,
                verify: true,
                ..Default::default()
            };
            let (records, _) = run(&config).unwrap();
            assert_eq!(records.len(), 1);
            assert_eq!(records[0].verified, Some(true), "{algo}");
            assert_eq!(records[0].blocks.as_ref().unwrap().performed(), want, "{algo}");
        }
    }

    #[test]
    fn small_characteristic_records_skips() {
        let config = BenchConfig {
            algos: vec!["theta-p".into(), "mulweyl".into(), "naive".into()],
            sizes: vec![6],
            p: 2,
            verify: true,
            ..Default::default()
        };
        let (records, _) = run(&config).unwrap();
        let by_name = |name: &str| records.iter().find(|r| r.algorithm == name).unwrap();
        assert_eq!(by_name("theta-p").verified, Some(true));
        assert!(by_name("mulweyl").skipped.is_some());
        assert_eq!(by_name("naive").verified, Some(true));
    }

    #[test]
    fn fault_injection_never_passes() {
        let config = BenchConfig {
            algos: vec!["naive".into(), "mulweyl".into()],
            sizes: vec![4],
            verify: true,
            fault_inject: true,
            ..Default::default()
        };
        let (records, _) = run(&config).unwrap();
        assert!(records.iter().all(|r| r.verified == Some(false)));
    }

    #[test]
    fn csv_is_deterministic_modulo_time() {
        let config = BenchConfig {
            algos: vec!["iter".into(), "takayama".into()],
            sizes: vec![4, 6],
            trials: 2,
            format: OutputFormat::Csv,
            verify: true,
            ..Default::default()
        };
        let strip_time = |s: &str| -> String {
            s.lines()
                .map(|l| {
                    let cells: Vec<&str> = l.split(',').collect();
                    let mut cells = cells;
                    cells[10] = "t";
                    cells.join(",")
                })
                .collect::<Vec<_>>()
                .join("\n")
        };
        let (_, out1) = run(&config).unwrap();
        let (_, out2) = run(&config).unwrap();
        assert_eq!(strip_time(&out1), strip_time(&out2));
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let bad_sizes = BenchConfig { sizes: vec![], ..Default::default() };
        assert!(matches!(run(&bad_sizes), Err(Error::InvalidConfig(_))));
        let bad_algo = BenchConfig { algos: vec!["nope".into()], ..Default::default() };
        assert!(matches!(run(&bad_algo), Err(Error::UnknownAlgorithm(_))));
    }
}
