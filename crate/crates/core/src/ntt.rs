//! Number-theoretic transforms for dense polynomial products over
//! prime fields.
//!
//! Two transform routes exist behind [`prime_poly_mul`]:
//!
//! * a direct transform modulo the coefficient prime itself, when
//!   `p - 1` carries enough powers of two for the requested length;
//! * an exact multi-modulus route: the integer convolution is computed
//!   modulo one to three fixed transform-friendly primes and
//!   reconstructed by the Chinese remainder theorem before reduction
//!   modulo `p`.
//!
//! Small products fall through to the schoolbook/Karatsuba dispatch in
//! [`crate::poly`]. Transform kernels work on raw `u64` slices and
//! report their coefficient-operation counts in bulk to
//! [`crate::opcount`].

use crate::domain::{is_prime, PrimeField};
use crate::opcount;
use crate::poly::generic_poly_mul;

/// Degree threshold (product length) above which transforms are tried.
pub const NTT_THRESHOLD: usize = 512;

/// Fixed CRT moduli: transform-friendly primes with generators.
const CRT_PRIMES: [(u64, u64); 3] = [(998244353, 3), (754974721, 11), (167772161, 3)];

#[inline]
fn add_mod(a: u64, b: u64, q: u64) -> u64 {
    let s = a + b;
    if s >= q {
        s - q
    } else {
        s
    }
}

#[inline]
fn sub_mod(a: u64, b: u64, q: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + q - b
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, q: u64) -> u64 {
    let mut acc = 1u64;
    b %= q;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, q);
        }
        b = mul_mod(b, b, q);
        e >>= 1;
    }
    acc
}

/// Precomputed Shoup constant for `w`: floor(w * 2^64 / q).
#[inline]
fn shoup(w: u64, q: u64) -> u64 {
    (((w as u128) << 64) / q as u128) as u64
}

/// `w * a mod q` with the Shoup trick; needs `q < 2^63`.
#[inline]
fn shoup_mul(a: u64, w: u64, w_shoup: u64, q: u64) -> u64 {
    let hi = ((a as u128 * w_shoup as u128) >> 64) as u64;
    let r = w.wrapping_mul(a).wrapping_sub(hi.wrapping_mul(q));
    if r >= q {
        r - q
    } else {
        r
    }
}

fn bit_reverse(a: &mut [u64]) {
    let n = a.len();
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
}

/// In-place transform of power-of-two length with twiddle table
/// `tw[k] = (w^k, shoup(w^k))` for `k < n/2`, `w` a primitive n-th root.
fn ntt_in_place(a: &mut [u64], q: u64, tw: &[(u64, u64)]) {
    let n = a.len();
    bit_reverse(a);
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let step = n / len;
        let mut blk = 0;
        while blk < n {
            for j in 0..half {
                let (w, ws) = tw[j * step];
                let y = shoup_mul(a[blk + j + half], w, ws, q);
                let x = a[blk + j];
                a[blk + j] = add_mod(x, y, q);
                a[blk + j + half] = sub_mod(x, y, q);
            }
            blk += len;
        }
        len <<= 1;
    }
}

fn twiddle_table(n: usize, root: u64, q: u64) -> Vec<(u64, u64)> {
    let mut tw = Vec::with_capacity(n / 2);
    let mut w = 1u64;
    for _ in 0..n / 2 {
        tw.push((w, shoup(w, q)));
        w = mul_mod(w, root, q);
    }
    tw
}

/// Cyclic-free convolution of `a` and `b` modulo `q`; result length
/// `a.len() + b.len() - 1`. `g` generates the multiplicative group.
fn conv_mod(a: &[u64], b: &[u64], q: u64, g: u64) -> Vec<u64> {
    let need = a.len() + b.len() - 1;
    let n = need.next_power_of_two();
    debug_assert_eq!((q - 1) % n as u64, 0);
    let root = pow_mod(g, (q - 1) / n as u64, q);
    let root_inv = pow_mod(root, q - 2, q);
    let tw = twiddle_table(n, root, q);
    let itw = twiddle_table(n, root_inv, q);

    let mut fa = vec![0u64; n];
    fa[..a.len()].copy_from_slice(a);
    let mut fb = vec![0u64; n];
    fb[..b.len()].copy_from_slice(b);
    ntt_in_place(&mut fa, q, &tw);
    ntt_in_place(&mut fb, q, &tw);
    for i in 0..n {
        fa[i] = mul_mod(fa[i], fb[i], q);
    }
    ntt_in_place(&mut fa, q, &itw);
    let n_inv = pow_mod(n as u64, q - 2, q);
    let n_inv_sh = shoup(n_inv, q);
    for x in fa.iter_mut() {
        *x = shoup_mul(*x, n_inv, n_inv_sh, q);
    }
    fa.truncate(need);

    let log = n.trailing_zeros() as u64;
    // 3 transforms of n/2*log butterflies (3 ops each), table build,
    // pointwise products and the final scaling.
    opcount::add(3 * (n as u64 / 2) * log * 3 + 2 * n as u64 + n as u64 + n as u64);
    fa
}

/// 2-adic valuation of `p - 1` bounds the direct transform length.
fn max_direct_len(p: u64) -> usize {
    let v = (p - 1).trailing_zeros();
    if v >= 40 {
        1 << 40
    } else {
        1usize << v
    }
}

/// Finds a generator of `(Z/pZ)*`, or `None` when `p - 1` resists the
/// cheap factorization attempted here.
fn find_generator(p: u64) -> Option<u64> {
    let mut m = p - 1;
    let mut factors = Vec::new();
    let mut d = 2u64;
    while d * d <= m && d < 100_000 {
        if m % d == 0 {
            factors.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        if is_prime(m) {
            factors.push(m);
        } else {
            return None;
        }
    }
    'cand: for g in 2..p.min(200) {
        for &f in &factors {
            if pow_mod(g, (p - 1) / f, p) == 1 {
                continue 'cand;
            }
        }
        return Some(g);
    }
    None
}

/// Picks the smallest CRT prime subset whose product exceeds the
/// worst-case convolution coefficient `min_len * (p-1)^2`.
fn crt_prime_count(p: u64, min_len: usize) -> Option<usize> {
    let bound = (min_len as u128)
        .checked_mul((p as u128 - 1) * (p as u128 - 1))?
        .checked_add(1)?;
    let mut prod: u128 = 1;
    for (k, (q, _)) in CRT_PRIMES.iter().enumerate() {
        prod *= *q as u128;
        if prod >= bound {
            return Some(k + 1);
        }
    }
    None
}

fn crt_combine(residues: &[Vec<u64>], p: u64) -> Vec<u64> {
    let n = residues[0].len();
    let mut out = Vec::with_capacity(n);
    match residues.len() {
        1 => {
            for i in 0..n {
                out.push(residues[0][i] % p);
            }
        }
        2 => {
            let (q1, _) = CRT_PRIMES[0];
            let (q2, _) = CRT_PRIMES[1];
            let inv_q1 = pow_mod(q1 % q2, q2 - 2, q2);
            for i in 0..n {
                let r1 = residues[0][i];
                let r2 = residues[1][i];
                let t = mul_mod(sub_mod(r2 % q2, r1 % q2, q2), inv_q1, q2);
                let x = r1 as u128 + q1 as u128 * t as u128;
                out.push((x % p as u128) as u64);
            }
        }
        3 => {
            let (q1, _) = CRT_PRIMES[0];
            let (q2, _) = CRT_PRIMES[1];
            let (q3, _) = CRT_PRIMES[2];
            let inv_q1 = pow_mod(q1 % q2, q2 - 2, q2);
            let q12 = q1 as u128 * q2 as u128;
            let q12_mod_q3 = (q12 % q3 as u128) as u64;
            let inv_q12 = pow_mod(q12_mod_q3, q3 - 2, q3);
            for i in 0..n {
                let r1 = residues[0][i];
                let r2 = residues[1][i];
                let r3 = residues[2][i];
                let t = mul_mod(sub_mod(r2 % q2, r1 % q2, q2), inv_q1, q2);
                let x12 = r1 as u128 + q1 as u128 * t as u128;
                let x12_mod_q3 = (x12 % q3 as u128) as u64;
                let t3 = mul_mod(sub_mod(r3, x12_mod_q3, q3), inv_q12, q3);
                let x = x12 + q12 * t3 as u128;
                out.push((x % p as u128) as u64);
            }
        }
        _ => unreachable!(),
    }
    opcount::add(3 * residues.len() as u64 * n as u64);
    out
}

/// Dense product of prime-field coefficient slices: schoolbook below
/// the Karatsuba threshold, Karatsuba in the mid range, transforms when
/// the prime (or the CRT moduli) support the needed roots of unity.
pub fn prime_poly_mul(field: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let need = a.len() + b.len() - 1;
    let p = field.modulus();
    if need < NTT_THRESHOLD || a.len().min(b.len()) < 32 {
        return generic_poly_mul(field, a, b);
    }
    let n = need.next_power_of_two();
    if n > 1 << 22 {
        return generic_poly_mul(field, a, b);
    }
    // Direct transform modulo p itself.
    if n <= max_direct_len(p) {
        if let Some(g) = find_generator(p) {
            return conv_mod(a, b, p, g);
        }
    }
    // Exact integer convolution via CRT moduli.
    if let Some(k) = crt_prime_count(p, a.len().min(b.len())) {
        let residues: Vec<Vec<u64>> = CRT_PRIMES[..k]
            .iter()
            .map(|&(q, g)| {
                let ra: Vec<u64> = a.iter().map(|&x| x % q).collect();
                let rb: Vec<u64> = b.iter().map(|&x| x % q).collect();
                conv_mod(&ra, &rb, q, g)
            })
            .collect();
        return crt_combine(&residues, p);
    }
    generic_poly_mul(field, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::PrimeField;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn schoolbook(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + (x as u128 * y as u128 % p as u128) as u64) % p;
            }
        }
        out
    }

    #[test]
    fn direct_transform_matches_schoolbook() {
        // 65537 = 2^16 + 1 supports direct transforms up to 2^16.
        let f = PrimeField::new(65537).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a: Vec<u64> = (0..700).map(|_| rng.gen_range(0..65537)).collect();
        let b: Vec<u64> = (0..650).map(|_| rng.gen_range(0..65537)).collect();
        assert_eq!(prime_poly_mul(&f, &a, &b), schoolbook(&a, &b, 65537));
    }

    #[test]
    fn crt_route_matches_schoolbook() {
        // 65521 - 1 = 2^4 * 3^2 * 5 * 7 * 13: no long direct transform.
        let f = PrimeField::new(65521).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a: Vec<u64> = (0..900).map(|_| rng.gen_range(0..65521)).collect();
        let b: Vec<u64> = (0..411).map(|_| rng.gen_range(0..65521)).collect();
        assert_eq!(prime_poly_mul(&f, &a, &b), schoolbook(&a, &b, 65521));
    }

    #[test]
    fn crt_route_32bit_prime() {
        let p = 4294967291;
        let f = PrimeField::new(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a: Vec<u64> = (0..600).map(|_| rng.gen_range(0..p)).collect();
        let b: Vec<u64> = (0..600).map(|_| rng.gen_range(0..p)).collect();
        assert_eq!(prime_poly_mul(&f, &a, &b), schoolbook(&a, &b, p));
    }

    #[test]
    fn tiny_characteristic() {
        let f = PrimeField::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a: Vec<u64> = (0..1024).map(|_| rng.gen_range(0..2)).collect();
        let b: Vec<u64> = (0..1024).map(|_| rng.gen_range(0..2)).collect();
        assert_eq!(prime_poly_mul(&f, &a, &b), schoolbook(&a, &b, 2));
    }

    #[test]
    fn generator_search() {
        assert_eq!(find_generator(998244353), Some(3));
        assert_eq!(find_generator(65537), Some(3));
    }
}
