//! Exact coefficient arithmetic: word-sized prime fields and
//! arbitrary-precision rationals.
//!
//! Every other module is generic over [`Field`]. Elements are plain
//! values (`u64` residues reduced into `[0, p)`, or `BigRational`);
//! the domain descriptor itself is a small `Copy` value that is passed
//! alongside them. No floating point is used anywhere.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::opcount;
use crate::{Error, Result};

/// An exact field, together with its element type.
///
/// The two implementations are [`PrimeField`] (characteristic `p`) and
/// [`Rationals`] (characteristic 0). All operations are closed and
/// exact; each one tallies a coefficient operation in [`opcount`].
pub trait Field: Copy + Eq + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync + 'static;

    /// 0 for the rationals, `p` for `Z/pZ`.
    fn characteristic(&self) -> u64;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn from_u64(&self, n: u64) -> Self::Elem;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        let ib = self.inv(b)?;
        Ok(self.mul(a, &ib))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool;

    /// Serialized form used by the shared operator JSON format.
    fn elem_to_string(&self, a: &Self::Elem) -> String;
    fn elem_from_str(&self, s: &str) -> Result<Self::Elem>;

    /// Dense univariate product of coefficient slices. The default is a
    /// schoolbook/Karatsuba dispatch; prime fields override it with a
    /// transform-based path for large sizes.
    fn poly_mul(&self, a: &[Self::Elem], b: &[Self::Elem]) -> Vec<Self::Elem> {
        crate::poly::generic_poly_mul(self, a, b)
    }

    /// Checks that elements may be mixed; prime fields of different
    /// moduli are distinct domains.
    fn same_domain(&self, other: &Self) -> bool {
        self == other
    }
}

/// `Z/pZ` for a word-sized prime `p < 2^62`.
///
/// Elements are residues stored reduced into `[0, p)`. Primality is
/// verified at construction (deterministic Miller-Rabin).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 62 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce_i64(&self, n: i64) -> u64 {
        let m = n.rem_euclid(self.p as i64);
        m as u64
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.p
    }

    fn from_i64(&self, n: i64) -> u64 {
        self.reduce_i64(n)
    }

    fn from_u64(&self, n: u64) -> u64 {
        n % self.p
    }

    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        opcount::tick();
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        opcount::tick();
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        opcount::tick();
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        opcount::tick();
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }

    fn inv(&self, a: &u64) -> Result<u64> {
        opcount::tick();
        if *a == 0 {
            return Err(Error::ZeroInverse);
        }
        // Extended Euclid on (a, p); p prime so the gcd is 1.
        let (mut r0, mut r1) = (*a as i128, self.p as i128);
        let (mut s0, mut s1) = (1i128, 0i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Ok(s0.rem_euclid(self.p as i128) as u64)
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn is_one(&self, a: &u64) -> bool {
        *a == 1 % self.p
    }

    fn elem_to_string(&self, a: &u64) -> String {
        a.to_string()
    }

    fn elem_from_str(&self, s: &str) -> Result<u64> {
        let v: u64 = s
            .parse()
            .map_err(|_| Error::BadFormat(format!("bad residue: {s:?}")))?;
        if v >= self.p {
            return Err(Error::BadFormat(format!("residue {v} out of range for p={}", self.p)));
        }
        Ok(v)
    }

    fn poly_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        crate::ntt::prime_poly_mul(self, a, b)
    }
}

/// The rationals, with `BigRational` elements (always reduced).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn characteristic(&self) -> u64 {
        0
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_u64(&self, n: u64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        opcount::tick();
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        opcount::tick();
        a - b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        opcount::tick();
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        opcount::tick();
        a * b
    }

    fn inv(&self, a: &BigRational) -> Result<BigRational> {
        opcount::tick();
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(a.recip())
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }

    fn elem_to_string(&self, a: &BigRational) -> String {
        format!("{}/{}", a.numer(), a.denom())
    }

    fn elem_from_str(&self, s: &str) -> Result<BigRational> {
        let bad = || Error::BadFormat(format!("bad rational: {s:?}"));
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let n: BigInt = num.parse().map_err(|_| bad())?;
        let d: BigInt = den.parse().map_err(|_| bad())?;
        if d.is_zero() || d.is_negative() {
            return Err(bad());
        }
        Ok(BigRational::new(n, d))
    }
}

/// `x^e` by binary powering.
pub fn elem_pow<F: Field>(domain: &F, x: &F::Elem, e: u64) -> F::Elem {
    let mut acc = domain.one();
    let mut base = x.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = domain.mul(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = domain.mul(&base, &base);
        }
    }
    acc
}

/// Deterministic Miller-Rabin for `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let pow = |b: u64, mut e: u64| -> u64 {
        let m = n as u128;
        let mut acc = 1u128;
        let mut bb = b as u128 % m;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * bb % m;
            }
            bb = bb * bb % m;
            e >>= 1;
        }
        acc as u64
    };
    'w: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'w;
            }
        }
        return false;
    }
    true
}

/// The factorials `0!, ..., n!` in a domain, with inverse factorials
/// whenever they exist (characteristic 0, or `n < p`).
#[derive(Clone, Debug)]
pub struct FactorialTable<F: Field> {
    domain: F,
    values: Vec<F::Elem>,
    inverses: Option<Vec<F::Elem>>,
}

impl<F: Field> FactorialTable<F> {
    /// Builds the table up to `n!`. Inverse factorials are filled in
    /// exactly when the characteristic permits.
    pub fn new(domain: F, n: usize) -> Self {
        let mut values = Vec::with_capacity(n + 1);
        values.push(domain.one());
        for k in 1..=n {
            let k_el = domain.from_u64(k as u64);
            let prev = values.last().unwrap().clone();
            values.push(domain.mul(&prev, &k_el));
        }
        let p = domain.characteristic();
        let inverses = if p == 0 || (n as u64) < p {
            // n! is then a unit, and so are all smaller factorials.
            let mut inv = vec![domain.one(); n + 1];
            inv[n] = domain.inv(&values[n]).expect("n! is a unit");
            for k in (1..=n).rev() {
                let k_el = domain.from_u64(k as u64);
                inv[k - 1] = domain.mul(&inv[k], &k_el);
            }
            Some(inv)
        } else {
            None
        };
        FactorialTable { domain, values, inverses }
    }

    /// As [`new`](Self::new) but fails when inverse factorials are
    /// requested in characteristic `0 < p <= n`.
    pub fn with_inverses(domain: F, n: usize) -> Result<Self> {
        let t = Self::new(domain, n);
        if t.inverses.is_none() {
            return Err(Error::CharacteristicTooSmall {
                p: domain.characteristic(),
                needed: n as u64,
            });
        }
        Ok(t)
    }

    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn factorial(&self, k: usize) -> &F::Elem {
        &self.values[k]
    }

    pub fn has_inverses(&self) -> bool {
        self.inverses.is_some()
    }

    pub fn inv_factorial(&self, k: usize) -> Result<&F::Elem> {
        match &self.inverses {
            Some(inv) => Ok(&inv[k]),
            None => Err(Error::CharacteristicTooSmall {
                p: self.domain.characteristic(),
                needed: k as u64,
            }),
        }
    }

    /// `exp(X) mod X^(n+1)` when inverse factorials exist; with `sign`
    /// flipped, `exp(-X)`.
    pub fn exp_series(&self, n: usize, negate: bool) -> Result<Vec<F::Elem>> {
        let inv = self
            .inverses
            .as_ref()
            .ok_or(Error::CharacteristicTooSmall {
                p: self.domain.characteristic(),
                needed: n as u64,
            })?;
        let mut out = Vec::with_capacity(n + 1);
        for (k, item) in inv.iter().take(n + 1).enumerate() {
            if negate && k % 2 == 1 {
                out.push(self.domain.neg(item));
            } else {
                out.push(item.clone());
            }
        }
        Ok(out)
    }
}
