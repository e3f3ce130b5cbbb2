//! End-to-end acceptance gate: one test per criterion, each printing a
//! single pass/fail line (visible with `cargo test -- --nocapture`).

use std::time::Instant;

use diffop::bench::random_op;
use diffop::charp::mul_theta_p;
use diffop::conversions::theta_to_partial;
use diffop::dmul::mul_partial_vdh;
use diffop::domain::{Field, PrimeField, Rationals};
use diffop::matrix::{mat_mul, BlockCounter, DenseMatrix, Strategy};
use diffop::opcount;
use diffop::ore::{
    mul_iter, mul_iter_dx, mul_iter_x, mul_naive, mul_takayama, OrePoly, Var,
};
use diffop::poly::{
    binomial, bivar_mul, eval_arith_prog, falling_factorial_value, from_falling_factorial,
    interp_arith_prog, schoolbook_mul, taylor_shift, to_falling_factorial, DensePoly,
};
use diffop::reductions::{mat_mul_via_tri, tri_mul_via_ops};
use diffop::theta::{mul_theta_vdh, Blocking, Variant};
use diffop::weyl::{eval_matrix, interpol_matrix, mul_weyl, mul_weyl_counted, PartialEvalMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const P: u64 = 65521;

fn gate(num: usize, label: &str, check: impl FnOnce() -> Result<(), String>) {
    match check() {
        Ok(()) => println!("criterion {num} ({label}): pass"),
        Err(msg) => {
            println!("criterion {num} ({label}): fail -- {msg}");
            panic!("criterion {num} ({label}) failed: {msg}");
        }
    }
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !($cond) {
            return Err(format!($($msg)+));
        }
    };
}

fn fp() -> PrimeField {
    PrimeField::new(P).unwrap()
}

/// Closed form of `(X^a ∂^b)(X^c ∂^d)` by the Leibniz rule:
/// `∂^b X^c = Σ_k C(b,k) (c)_k X^(c-k) ∂^(b-k)`.
fn monomial_product<F: Field>(domain: F, a: usize, b: usize, c: usize, d: usize) -> OrePoly<F> {
    let mut grid = vec![vec![domain.zero(); b + d + 1]; a + c + 1];
    for k in 0..=b.min(c) {
        let coeff = domain.mul(
            &binomial(domain, b as u64, k as u64),
            &falling_factorial_value(domain, &domain.from_u64(c as u64), k),
        );
        grid[a + c - k][b + d - k] = coeff;
    }
    OrePoly::new(Var::Partial, domain, grid)
}

fn partial_products<F: Field>(
    b: &OrePoly<F>,
    a: &OrePoly<F>,
) -> Result<Vec<(&'static str, OrePoly<F>)>, String> {
    let run = |name: &'static str, r: diffop::Result<OrePoly<F>>| {
        r.map(|p| (name, p)).map_err(|e| format!("{name}: {e}"))
    };
    Ok(vec![
        run("naive", mul_naive(b, a))?,
        run("iter-dx", mul_iter_dx(b, a))?,
        run("iter-x", mul_iter_x(b, a))?,
        run("iter", mul_iter(b, a))?,
        run("takayama", mul_takayama(b, a))?,
        run("vdh", mul_partial_vdh(b, a, Variant::Vandermonde, Blocking::None, None))?,
        run("ivdh", mul_partial_vdh(b, a, Variant::Fast, Blocking::None, None))?,
        run("mulweyl", mul_weyl(b, a, Blocking::None, None))?,
    ])
}

#[test]
fn criterion_1_monomial_ground_truth() {
    gate(1, "monomial ground truth", || {
        let f = fp();
        for a in 0..=4usize {
            for b in 0..=4usize {
                for c in 0..=4usize {
                    for d in 0..=4usize {
                        let left = OrePoly::monomial(Var::Partial, f, f.one(), a, b);
                        let right = OrePoly::monomial(Var::Partial, f, f.one(), c, d);
                        let expected = monomial_product(f, a, b, c, d);
                        for (name, got) in partial_products(&left, &right)? {
                            ensure!(
                                got == expected,
                                "{name} disagrees on X^{a}d^{b} * X^{c}d^{d}"
                            );
                        }
                    }
                }
            }
        }
        Ok(())
    });
}

fn agreement_sweep<F: Field>(
    domain: F,
    pairs: usize,
    seed: u64,
    with_theta_p: bool,
) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..pairs {
        let (db, rb) = (rng.gen_range(0..=16), rng.gen_range(0..=16));
        let (da, ra) = (rng.gen_range(0..=16), rng.gen_range(0..=16));
        let b = random_op(Var::Partial, domain, db, rb, &mut rng);
        let a = random_op(Var::Partial, domain, da, ra, &mut rng);
        let products = partial_products(&b, &a)?;
        let oracle = &products[0].1;
        for (name, got) in &products[1..] {
            ensure!(got == oracle, "partial case {case}: {name} disagrees with naive");
        }

        let bt = random_op(Var::Theta, domain, db, rb, &mut rng);
        let at = random_op(Var::Theta, domain, da, ra, &mut rng);
        let oracle_t = mul_naive(&bt, &at).map_err(|e| e.to_string())?;
        for variant in [Variant::Vandermonde, Variant::Fast] {
            let got = mul_theta_vdh(&bt, &at, variant, Blocking::None, None)
                .map_err(|e| e.to_string())?;
            ensure!(got == oracle_t, "theta case {case}: {variant:?} disagrees with naive");
        }
        if with_theta_p {
            let got = mul_theta_p(&bt, &at).map_err(|e| e.to_string())?;
            ensure!(got == oracle_t, "theta case {case}: theta-p disagrees with naive");
        }
        // Cross-representation consistency: converting the θ product to
        // ∂ must match the ∂ product of the converted operands.
        let via_theta = theta_to_partial(&oracle_t);
        let direct = mul_naive(&theta_to_partial(&bt), &theta_to_partial(&at))
            .map_err(|e| e.to_string())?;
        ensure!(via_theta == direct, "theta case {case}: conversion mismatch");
    }
    Ok(())
}

#[test]
fn criterion_2_cross_algorithm_agreement() {
    gate(2, "cross-algorithm agreement", || {
        agreement_sweep(fp(), 100, 0xA2, true)?;
        agreement_sweep(Rationals, 20, 0xB2, false)
    });
}

#[test]
fn criterion_3_interpolation_theorem() {
    gate(3, "interpolation inverts evaluation", || {
        let f = fp();
        let mut rng = ChaCha8Rng::seed_from_u64(0xA3);
        for case in 0..200 {
            let (d, r) = (rng.gen_range(0..=20), rng.gen_range(0..=20));
            let p = random_op(Var::Partial, f, d, r, &mut rng);
            let w = eval_matrix(&p, d, r).map_err(|e| e.to_string())?;
            let back = interpol_matrix(&w, d, r).map_err(|e| e.to_string())?;
            ensure!(back == p, "case {case}: round trip lost the operator");
        }
        let z = PartialEvalMatrix::from_matrix(DenseMatrix::zeros(f, 8, 5));
        let back = interpol_matrix(&z, 7, 4).map_err(|e| e.to_string())?;
        ensure!(back.is_zero(), "zero matrix did not interpolate to zero");
        Ok(())
    });
}

#[test]
fn criterion_4_block_count_table() {
    gate(4, "block-count table", || {
        let f = fp();
        for n in [16usize, 32] {
            let mut rng = ChaCha8Rng::seed_from_u64(0xA4 + n as u64);
            let bt = random_op(Var::Theta, f, n, n, &mut rng);
            let at = random_op(Var::Theta, f, n, n, &mut rng);
            let bp = random_op(Var::Partial, f, n, n, &mut rng);
            let ap = random_op(Var::Partial, f, n, n, &mut rng);

            let theta_count = |variant, blocking| -> Result<BlockCounter, String> {
                let mut c = BlockCounter::new(n);
                mul_theta_vdh(&bt, &at, variant, blocking, Some(&mut c))
                    .map_err(|e| e.to_string())?;
                Ok(c)
            };
            let partial_count = |variant| -> Result<BlockCounter, String> {
                let mut c = BlockCounter::new(n);
                mul_partial_vdh(&bp, &ap, variant, Blocking::Blocked(n), Some(&mut c))
                    .map_err(|e| e.to_string())?;
                Ok(c)
            };

            let c = theta_count(Variant::Vandermonde, Blocking::Blocked(n))?;
            ensure!(c.performed() == 37, "n={n}: theta-vdh counted {}", c.performed());
            let c = theta_count(Variant::Fast, Blocking::Blocked(n))?;
            ensure!(c.performed() == 24, "n={n}: theta-ivdh counted {}", c.performed());
            let c = partial_count(Variant::Vandermonde)?;
            ensure!(c.performed() == 96, "n={n}: vdh counted {}", c.performed());
            let c = partial_count(Variant::Fast)?;
            ensure!(c.performed() == 48, "n={n}: ivdh counted {}", c.performed());
            let mut c = BlockCounter::new(n);
            mul_weyl(&bp, &ap, Blocking::Blocked(n), Some(&mut c)).map_err(|e| e.to_string())?;
            ensure!(c.performed() == 12, "n={n}: mulweyl counted {}", c.performed());

            let mut c = BlockCounter::new(n);
            mul_weyl(&bp, &ap, Blocking::ZeroStrassen(n), Some(&mut c))
                .map_err(|e| e.to_string())?;
            ensure!(c.performed() == 8, "n={n}: mulweyl strassen counted {}", c.performed());
            let c = theta_count(Variant::Fast, Blocking::ZeroStrassen(n))?;
            ensure!(c.performed() == 8, "n={n}: theta-ivdh strassen counted {}", c.performed());
            let c = theta_count(Variant::Vandermonde, Blocking::ZeroStrassen(n))?;
            ensure!(c.performed() <= 20, "n={n}: theta-vdh strassen counted {}", c.performed());
        }
        Ok(())
    });
}

#[test]
fn criterion_5_characteristic_p_correctness() {
    gate(5, "characteristic-p correctness", || {
        for p in [2u64, 3, 5] {
            let f = PrimeField::new(p).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(0xA5 + p);
            for case in 0..50 {
                let (db, rb) = (rng.gen_range(0..=12), rng.gen_range(0..=12));
                let (da, ra) = (rng.gen_range(0..=12), rng.gen_range(0..=12));
                let b = random_op(Var::Theta, f, db, rb, &mut rng);
                let a = random_op(Var::Theta, f, da, ra, &mut rng);
                let got = mul_theta_p(&b, &a).map_err(|e| e.to_string())?;
                let want = mul_naive(&b, &a).map_err(|e| e.to_string())?;
                ensure!(got == want, "p={p} case {case}: theta-p disagrees with naive");
            }
        }
        for p in [2u64, 3] {
            let f = PrimeField::new(p).unwrap();
            for a in 0..=4usize {
                for b in 0..=4usize {
                    for c in 0..=4usize {
                        for d in 0..=4usize {
                            let left = OrePoly::monomial(Var::Theta, f, f.one(), a, b);
                            let right = OrePoly::monomial(Var::Theta, f, f.one(), c, d);
                            let got = mul_theta_p(&left, &right).map_err(|e| e.to_string())?;
                            let want = mul_naive(&left, &right).map_err(|e| e.to_string())?;
                            ensure!(got == want, "p={p}: X^{a}t^{b} * X^{c}t^{d}");
                        }
                    }
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_6_characteristic_p_scaling() {
    gate(6, "characteristic-p scaling", || {
        let f = PrimeField::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0xA6);
        let ops_at = |n: usize, rng: &mut ChaCha8Rng| -> Result<u64, String> {
            let b = random_op(Var::Theta, f, n, n, rng);
            let a = random_op(Var::Theta, f, n, n, rng);
            let (r, ops) = opcount::measure(|| mul_theta_p(&b, &a));
            r.map_err(|e| e.to_string())?;
            Ok(ops)
        };
        let o64 = ops_at(64, &mut rng)?;
        let o128 = ops_at(128, &mut rng)?;
        let o256 = ops_at(256, &mut rng)?;
        let r1 = o128 as f64 / o64 as f64;
        let r2 = o256 as f64 / o128 as f64;
        ensure!(r1 <= 5.0, "ops(128)/ops(64) = {r1:.2} exceeds 5.0");
        ensure!(r2 <= 5.0, "ops(256)/ops(128) = {r2:.2} exceeds 5.0");
        Ok(())
    });
}

#[test]
fn criterion_7_reductions() {
    gate(7, "matrix-product reductions", || {
        let f = fp();
        let mut rng = ChaCha8Rng::seed_from_u64(0xA7);
        for case in 0..25 {
            let s = rng.gen_range(1..=25);
            let mut tri = || {
                DenseMatrix::from_fn(f, s, s, |i, j| {
                    if i >= j {
                        f.from_u64(rng.gen_range(0..P))
                    } else {
                        f.zero()
                    }
                })
            };
            let l1 = tri();
            let l2 = tri();
            let got = tri_mul_via_ops(&l1, &l2).map_err(|e| e.to_string())?;
            let want = mat_mul(&l1, &l2, Strategy::Naive, None).map_err(|e| e.to_string())?;
            ensure!(got == want, "case {case}: triangular product mismatch (size {s})");
        }
        for case in 0..10 {
            let mut full = || DenseMatrix::from_fn(f, 8, 8, |_, _| f.from_u64(rng.gen_range(0..P)));
            let m = full();
            let n = full();
            let got = mat_mul_via_tri(&m, &n).map_err(|e| e.to_string())?;
            let want = mat_mul(&n, &m, Strategy::Naive, None).map_err(|e| e.to_string())?;
            ensure!(got == want, "case {case}: general product mismatch");
        }
        // 1x1 blocks M = (2), N = (3): the squared embedding is
        // [[1,0,0],[4,1,0],[6,6,1]].
        let mut t = DenseMatrix::identity(f, 3);
        t.set(1, 0, f.from_u64(2));
        t.set(2, 1, f.from_u64(3));
        let sq = tri_mul_via_ops(&t, &t).map_err(|e| e.to_string())?;
        ensure!(*sq.get(1, 0) == f.from_u64(4), "2M block is {:?}", sq.get(1, 0));
        ensure!(*sq.get(2, 0) == f.from_u64(6), "NM block is {:?}", sq.get(2, 0));
        ensure!(*sq.get(2, 1) == f.from_u64(6), "2N block is {:?}", sq.get(2, 1));
        Ok(())
    });
}

fn random_poly<F: Field>(domain: F, deg: usize, rng: &mut ChaCha8Rng) -> DensePoly<F> {
    DensePoly::new(
        domain,
        (0..=deg).map(|_| domain.from_i64(rng.gen_range(-32768..=32767i64))).collect(),
    )
}

fn substrate_in_char<F: Field>(domain: F, seed: u64, cases: usize) -> Result<(), String> {
    let ch = domain.characteristic();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Taylor shift against the naive binomial expansion.
    for case in 0..cases {
        let deg = rng.gen_range(0..=25);
        let p = random_poly(domain, deg, &mut rng);
        let a = domain.from_i64(rng.gen_range(-100..=100i64));
        let lin = DensePoly::new(domain, vec![a.clone(), domain.one()]);
        let mut pow = DensePoly::one(domain);
        let mut want = DensePoly::zero(domain);
        for c in p.coeffs() {
            want = want.add(&pow.scale(c));
            pow = pow.mul(&lin).map_err(|e| e.to_string())?;
        }
        ensure!(taylor_shift(&p, &a) == want, "char {ch} case {case}: taylor shift mismatch");
    }
    // Falling-factorial round trip, past the base-case threshold.
    for case in 0..cases {
        let deg = rng.gen_range(0..=60);
        let p = random_poly(domain, deg, &mut rng);
        let back = from_falling_factorial(&to_falling_factorial(&p));
        ensure!(back == p, "char {ch} case {case}: falling-factorial round trip mismatch");
    }
    Ok(())
}

#[test]
fn criterion_8_polynomial_substrate() {
    gate(8, "polynomial substrate", || {
        let f = fp();
        let mut rng = ChaCha8Rng::seed_from_u64(0xA8);
        for case in 0..200 {
            let deg = rng.gen_range(0..=40);
            let p = random_poly(f, deg, &mut rng);
            let a = f.from_i64(rng.gen_range(-1000..=1000i64));
            let n = deg + rng.gen_range(0..=5);
            let vals = eval_arith_prog(&p, &a, n).map_err(|e| e.to_string())?;
            let q = interp_arith_prog(&vals, &a, f).map_err(|e| e.to_string())?;
            ensure!(q == p, "case {case}: eval/interp round trip mismatch");
        }
        substrate_in_char(Rationals, 0xB8, 67)?;
        substrate_in_char(PrimeField::new(3).unwrap(), 0xC8, 67)?;
        substrate_in_char(f, 0xD8, 67)?;
        substrate_in_char(PrimeField::new(2).unwrap(), 0xE8, 67)?;
        for case in 0..100 {
            let (ra, ca) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
            let (rb, cb) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
            let mut grid = |rows: usize, cols: usize| -> Vec<Vec<_>> {
                (0..rows)
                    .map(|_| (0..cols).map(|_| f.from_u64(rng.gen_range(0..P))).collect())
                    .collect()
            };
            let ga = grid(ra, ca);
            let gb = grid(rb, cb);
            let got = bivar_mul(f, &ga, &gb);
            // Schoolbook bivariate product, row by row.
            let mut want = vec![vec![f.zero(); ca + cb - 1]; ra + rb - 1];
            for (i, rowa) in ga.iter().enumerate() {
                for (j, rowb) in gb.iter().enumerate() {
                    let conv = schoolbook_mul(&f, rowa, rowb);
                    for (k, c) in conv.into_iter().enumerate() {
                        want[i + j][k] = f.add(&want[i + j][k], &c);
                    }
                }
            }
            ensure!(got == want, "case {case}: bivariate product mismatch");
        }
        Ok(())
    });
}

#[test]
fn criterion_9_growth_trend() {
    gate(9, "growth trend", || {
        let f = fp();
        let mut rng = ChaCha8Rng::seed_from_u64(0xA9);
        let mut pairs = Vec::new();
        for n in [64usize, 128, 256] {
            let b = random_op(Var::Partial, f, n, n, &mut rng);
            let a = random_op(Var::Partial, f, n, n, &mut rng);
            pairs.push((n, b, a));
        }
        let mut times = Vec::new();
        let mut nonmatrix_ops_256 = 0u64;
        for (n, b, a) in &pairs {
            let start = Instant::now();
            let (_, nonmatrix) =
                mul_weyl_counted(b, a, Blocking::None, None).map_err(|e| e.to_string())?;
            times.push(start.elapsed().as_secs_f64());
            if *n == 256 {
                nonmatrix_ops_256 = nonmatrix;
            }
        }
        // Wall-clock half: informational only (machine variance).
        for (i, n) in [64usize, 128].iter().enumerate() {
            let ratio = times[i + 1] / times[i];
            if !(2.5..=10.0).contains(&ratio) {
                println!(
                    "criterion 9 note: wall-time ratio T({})/T({n}) = {ratio:.2} \
                     outside [2.5, 10.0] (informational)",
                    2 * n
                );
            }
        }
        // Counter half: strict.
        let (n, b, a) = &pairs[2];
        assert_eq!(*n, 256);
        let (r, takayama_ops) = opcount::measure(|| mul_takayama(b, a));
        r.map_err(|e| e.to_string())?;
        ensure!(
            takayama_ops > nonmatrix_ops_256,
            "takayama ops {takayama_ops} not above mulweyl non-matrix ops {nonmatrix_ops_256}"
        );
        Ok(())
    });
}
