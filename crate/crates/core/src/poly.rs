//! Dense univariate polynomial arithmetic, plus the Kronecker-packed
//! bivariate product.
//!
//! Coefficients are stored constant term first; the zero polynomial is
//! the empty list and the leading coefficient is nonzero after
//! normalization. The module provides the building blocks the operator
//! algorithms lean on: products with threshold dispatch, Taylor shifts
//! valid in any characteristic, multipoint evaluation/interpolation on
//! arithmetic progressions, and base changes to the falling factorial
//! basis `(X)_k = X(X-1)...(X-k+1)`.

use crate::domain::{FactorialTable, Field};
use crate::{Error, Result};

/// Schoolbook threshold; below this (in either operand) the quadratic
/// product is used.
pub const KARATSUBA_THRESHOLD: usize = 32;

/// A dense univariate polynomial over `F`.
#[derive(Clone, PartialEq, Debug)]
pub struct DensePoly<F: Field> {
    domain: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> DensePoly<F> {
    pub fn new(domain: F, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| domain.is_zero(c)) {
            coeffs.pop();
        }
        DensePoly { domain, coeffs }
    }

    pub fn zero(domain: F) -> Self {
        DensePoly { domain, coeffs: Vec::new() }
    }

    pub fn one(domain: F) -> Self {
        DensePoly { domain, coeffs: vec![domain.one()] }
    }

    pub fn constant(domain: F, c: F::Elem) -> Self {
        Self::new(domain, vec![c])
    }

    /// `X^k`.
    pub fn x_power(domain: F, k: usize) -> Self {
        let mut coeffs = vec![domain.zero(); k + 1];
        coeffs[k] = domain.one();
        DensePoly { domain, coeffs }
    }

    pub fn domain(&self) -> F {
        self.domain
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F::Elem> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Coefficient of `X^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> F::Elem {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.domain.zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let d = self.domain;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(d.add(&self.coeff(k), &other.coeff(k)));
        }
        Self::new(d, out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let d = self.domain;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(d.sub(&self.coeff(k), &other.coeff(k)));
        }
        Self::new(d, out)
    }

    pub fn neg(&self) -> Self {
        let d = self.domain;
        Self::new(d, self.coeffs.iter().map(|c| d.neg(c)).collect())
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let d = self.domain;
        Self::new(d, self.coeffs.iter().map(|x| d.mul(x, c)).collect())
    }

    /// Exact product; dispatches schoolbook / Karatsuba / transform
    /// according to size and domain (see [`crate::ntt`]).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if !self.domain.same_domain(&other.domain) {
            return Err(Error::DomainMismatch);
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.domain));
        }
        let out = self.domain.poly_mul(&self.coeffs, &other.coeffs);
        Ok(Self::new(self.domain, out))
    }

    /// Multiplication by `X^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.domain.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        DensePoly { domain: self.domain, coeffs }
    }

    /// Coefficients truncated to degree `< k`.
    pub fn truncate(&self, k: usize) -> Self {
        Self::new(self.domain, self.coeffs.iter().take(k).cloned().collect())
    }

    pub fn derivative(&self) -> Self {
        let d = self.domain;
        let mut out = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(d.mul(c, &d.from_u64(k as u64)));
        }
        Self::new(d, out)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &F::Elem) -> F::Elem {
        let d = self.domain;
        let mut acc = d.zero();
        for c in self.coeffs.iter().rev() {
            acc = d.add(&d.mul(&acc, x), c);
        }
        acc
    }
}

/// Schoolbook product on raw coefficient slices.
pub fn schoolbook_mul<F: Field>(domain: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![domain.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if domain.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = domain.add(&out[i + j], &domain.mul(x, y));
        }
    }
    out
}

fn karatsuba<F: Field>(domain: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.len().min(b.len()) < KARATSUBA_THRESHOLD {
        return schoolbook_mul(domain, a, b);
    }
    let m = a.len().max(b.len()).div_ceil(2);
    let (a0, a1) = a.split_at(m.min(a.len()));
    let (b0, b1) = b.split_at(m.min(b.len()));
    let z0 = karatsuba(domain, a0, b0);
    let z2 = karatsuba(domain, a1, b1);
    let sa = slice_add(domain, a0, a1);
    let sb = slice_add(domain, b0, b1);
    let mut z1 = karatsuba(domain, &sa, &sb);
    sub_assign(domain, &mut z1, &z0);
    sub_assign(domain, &mut z1, &z2);

    // The subtractions can leave high zero coefficients on z1 (its
    // buffer was grown to max(len) by sub_assign), so size the scratch
    // buffer to fit them and trim to the true product length at the end.
    let len = (a.len() + b.len() - 1).max(m + z1.len());
    let mut out = vec![domain.zero(); len];
    add_at(domain, &mut out, &z0, 0);
    add_at(domain, &mut out, &z1, m);
    add_at(domain, &mut out, &z2, 2 * m);
    out.truncate(a.len() + b.len() - 1);
    out
}

fn slice_add<F: Field>(domain: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let x = a.get(k);
        let y = b.get(k);
        out.push(match (x, y) {
            (Some(x), Some(y)) => domain.add(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        });
    }
    out
}

fn sub_assign<F: Field>(domain: &F, a: &mut Vec<F::Elem>, b: &[F::Elem]) {
    if a.len() < b.len() {
        a.resize(b.len(), domain.zero());
    }
    for (x, y) in a.iter_mut().zip(b.iter()) {
        *x = domain.sub(x, y);
    }
}

fn add_at<F: Field>(domain: &F, out: &mut [F::Elem], src: &[F::Elem], off: usize) {
    for (k, c) in src.iter().enumerate() {
        out[off + k] = domain.add(&out[off + k], c);
    }
}

/// Default product dispatch used by [`Field::poly_mul`]: schoolbook
/// below the threshold, Karatsuba above.
pub fn generic_poly_mul<F: Field>(domain: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    karatsuba(domain, a, b)
}

/// Power-series inverse of `f` modulo `X^k`; `f[0]` must be a unit.
fn series_inv<F: Field>(domain: &F, f: &[F::Elem], k: usize) -> Result<Vec<F::Elem>> {
    let f0 = f.first().ok_or(Error::ZeroInverse)?;
    let mut g = vec![domain.inv(f0)?];
    let mut t = 1usize;
    while t < k {
        t = (2 * t).min(k);
        // g <- g * (2 - f g) mod X^t
        let ft: Vec<_> = f.iter().take(t).cloned().collect();
        let mut fg = domain.poly_mul(&ft, &g);
        fg.truncate(t);
        let mut corr = vec![domain.zero(); fg.len().max(1)];
        corr[0] = domain.add(&domain.one(), &domain.one());
        for (c, x) in corr.iter_mut().zip(fg.iter()) {
            *c = domain.sub(c, x);
        }
        let mut ng = domain.poly_mul(&g, &corr);
        ng.truncate(t);
        g = ng;
    }
    g.truncate(k);
    Ok(g)
}

/// Euclidean division by a monic divisor: `p = q * w + r`, `deg r < deg w`.
pub fn div_rem_monic<F: Field>(p: &DensePoly<F>, w: &DensePoly<F>) -> (DensePoly<F>, DensePoly<F>) {
    let domain = p.domain();
    let dw = w.degree().expect("divisor must be nonzero");
    assert!(domain.is_one(&w.coeff(dw)), "divisor must be monic");
    let dp = match p.degree() {
        Some(d) if d >= dw => d,
        _ => return (DensePoly::zero(domain), p.clone()),
    };
    let k = dp - dw + 1;
    // Reverse-and-invert: rev(q) = rev(p) * rev(w)^{-1} mod X^k.
    let rev = |c: &[F::Elem]| -> Vec<F::Elem> { c.iter().rev().cloned().collect() };
    let rp = rev(p.coeffs());
    let rw = rev(w.coeffs());
    let inv = series_inv(&domain, &rw, k).expect("monic divisor has unit leading coefficient");
    let mut rq = domain.poly_mul(&rp[..k.min(rp.len())], &inv);
    rq.truncate(k);
    while rq.len() < k {
        rq.push(domain.zero());
    }
    let q = DensePoly::new(domain, rev(&rq));
    let qw = q.mul(w).expect("same domain");
    let r = p.sub(&qw);
    (q, r)
}

/// The monic polynomial `(X)_m = X(X-1)...(X-m+1)` via a product tree.
pub fn falling_factorial_poly<F: Field>(domain: F, m: usize) -> DensePoly<F> {
    if m == 0 {
        return DensePoly::one(domain);
    }
    if m == 1 {
        return DensePoly::new(domain, vec![domain.zero(), domain.one()]);
    }
    let half = m / 2;
    let lo = falling_factorial_poly(domain, half);
    // (X)_m = (X)_h * (X - h)_(m - h); the second factor is the shifted tail.
    let hi = shifted_falling_factorial_poly(domain, half, m - half);
    lo.mul(&hi).expect("same domain")
}

/// `(X - s)(X - s - 1)...(X - s - k + 1)`.
fn shifted_falling_factorial_poly<F: Field>(domain: F, s: usize, k: usize) -> DensePoly<F> {
    if k == 0 {
        return DensePoly::one(domain);
    }
    if k == 1 {
        return DensePoly::new(domain, vec![domain.from_i64(-(s as i64)), domain.one()]);
    }
    let half = k / 2;
    let lo = shifted_falling_factorial_poly(domain, s, half);
    let hi = shifted_falling_factorial_poly(domain, s + half, k - half);
    lo.mul(&hi).expect("same domain")
}

/// Taylor shift `P(X + a)`, valid in any characteristic.
///
/// When the characteristic is zero or exceeds the degree the
/// factorial-convolution method is used; otherwise the radix-`p`
/// divide and conquer below, which only relies on `(X+a)^p = X^p + a^p`.
pub fn taylor_shift<F: Field>(p: &DensePoly<F>, a: &F::Elem) -> DensePoly<F> {
    let domain = p.domain();
    let deg = match p.degree() {
        None => return p.clone(),
        Some(0) => return p.clone(),
        Some(d) => d,
    };
    if domain.is_zero(a) {
        return p.clone();
    }
    let ch = domain.characteristic();
    if ch == 0 || ch > deg as u64 {
        shift_by_convolution(p, a, deg)
    } else {
        shift_radix_p(p, a, ch as usize)
    }
}

fn shift_by_convolution<F: Field>(p: &DensePoly<F>, a: &F::Elem, deg: usize) -> DensePoly<F> {
    let domain = p.domain();
    let facts = FactorialTable::with_inverses(domain, deg).expect("checked characteristic");
    // q_k = (1/k!) sum_j (j! c_j) a^(j-k)/(j-k)!  -- one correlation.
    let mut u: Vec<F::Elem> = Vec::with_capacity(deg + 1);
    for j in 0..=deg {
        u.push(domain.mul(&p.coeff(j), facts.factorial(j)));
    }
    u.reverse();
    let mut pow = domain.one();
    let mut e: Vec<F::Elem> = Vec::with_capacity(deg + 1);
    for i in 0..=deg {
        e.push(domain.mul(&pow, facts.inv_factorial(i).expect("checked")));
        pow = domain.mul(&pow, a);
    }
    let conv = domain.poly_mul(&u, &e);
    let mut out = Vec::with_capacity(deg + 1);
    for k in 0..=deg {
        out.push(domain.mul(&conv[deg - k], facts.inv_factorial(k).expect("checked")));
    }
    DensePoly::new(domain, out)
}

fn shift_radix_p<F: Field>(p: &DensePoly<F>, a: &F::Elem, ch: usize) -> DensePoly<F> {
    let domain = p.domain();
    let deg = p.degree().expect("nonzero here");
    if deg < ch {
        // Degree below the characteristic: factorials are units again.
        return shift_by_convolution(p, a, deg);
    }
    // Split by residues: P = sum_i X^i P_i(X^ch). Then
    // P(X+a) = sum_i (X+a)^i Q_i(X^ch) with Q_i the shift of P_i by a^ch.
    let mut parts: Vec<Vec<F::Elem>> = vec![Vec::new(); ch];
    for (k, c) in p.coeffs().iter().enumerate() {
        parts[k % ch].push(c.clone());
    }
    let mut a_pow_p = domain.one();
    for _ in 0..ch {
        a_pow_p = domain.mul(&a_pow_p, a);
    }
    let shifted: Vec<DensePoly<F>> = parts
        .into_iter()
        .map(|c| taylor_shift(&DensePoly::new(domain, c), &a_pow_p))
        .collect();
    // (X+a)^i for i < ch, built incrementally.
    let lin = DensePoly::new(domain, vec![a.clone(), domain.one()]);
    let mut xa_pow = DensePoly::one(domain);
    let mut acc = DensePoly::zero(domain);
    for q in shifted {
        if !q.is_zero() {
            // q(X^ch) spread out, times (X+a)^i.
            let mut spread = vec![domain.zero(); (q.coeffs().len() - 1) * ch + 1];
            for (k, c) in q.coeffs().iter().enumerate() {
                spread[k * ch] = c.clone();
            }
            let spread = DensePoly::new(domain, spread);
            acc = acc.add(&spread.mul(&xa_pow).expect("same domain"));
        }
        xa_pow = xa_pow.mul(&lin).expect("same domain");
    }
    acc
}

/// Coefficients on the falling factorial basis `(X)_k`.
#[derive(Clone, PartialEq, Debug)]
pub struct FallingFactorialCoeffs<F: Field> {
    domain: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> FallingFactorialCoeffs<F> {
    pub fn new(domain: F, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| domain.is_zero(c)) {
            coeffs.pop();
        }
        FallingFactorialCoeffs { domain, coeffs }
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> F::Elem {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.domain.zero())
    }
}

const FF_BASE_CASE: usize = 32;

/// Base change monomial -> falling factorial, any characteristic.
pub fn to_falling_factorial<F: Field>(p: &DensePoly<F>) -> FallingFactorialCoeffs<F> {
    let domain = p.domain();
    FallingFactorialCoeffs::new(domain, to_ff_rec(p))
}

fn to_ff_rec<F: Field>(p: &DensePoly<F>) -> Vec<F::Elem> {
    let domain = p.domain();
    let deg = match p.degree() {
        None => return Vec::new(),
        Some(d) => d,
    };
    if deg < FF_BASE_CASE {
        // Synthetic division by X, X-1, X-2, ...: Newton coefficients
        // at the nodes 0, 1, 2, ...
        let mut work = p.coeffs().to_vec();
        let mut out = Vec::with_capacity(deg + 1);
        let mut node = 0i64;
        while !work.is_empty() {
            let c = domain.from_i64(node);
            // divide by (X - node): Horner from the top.
            let mut rem = domain.zero();
            for x in work.iter_mut().rev() {
                let t = domain.add(&domain.mul(&rem, &c), x);
                *x = rem.clone();
                rem = t;
            }
            out.push(rem);
            // The quotient now occupies the low positions of `work`;
            // drop the stale top slot.
            work.pop();
            node += 1;
        }
        return out;
    }
    let m = deg.div_ceil(2);
    let w = falling_factorial_poly(domain, m);
    let (q, r) = div_rem_monic(p, &w);
    let mut out = to_ff_rec(&r);
    out.resize(m, domain.zero());
    let q_shifted = taylor_shift(&q, &domain.from_i64(m as i64));
    out.extend(to_ff_rec(&q_shifted));
    out
}

/// Base change falling factorial -> monomial, any characteristic.
pub fn from_falling_factorial<F: Field>(f: &FallingFactorialCoeffs<F>) -> DensePoly<F> {
    from_ff_rec(f.domain, f.coeffs())
}

fn from_ff_rec<F: Field>(domain: F, coeffs: &[F::Elem]) -> DensePoly<F> {
    if coeffs.is_empty() {
        return DensePoly::zero(domain);
    }
    if coeffs.len() <= FF_BASE_CASE {
        // Accumulate f_k (X)_k with the incremental product.
        let mut acc = DensePoly::constant(domain, coeffs[0].clone());
        let mut basis = DensePoly::one(domain);
        for (k, c) in coeffs.iter().enumerate().skip(1) {
            let lin = DensePoly::new(domain, vec![domain.from_i64(-((k as i64) - 1)), domain.one()]);
            basis = basis.mul(&lin).expect("same domain");
            acc = acc.add(&basis.scale(c));
        }
        return acc;
    }
    let m = coeffs.len() / 2;
    let low = from_ff_rec(domain, &coeffs[..m]);
    let up = from_ff_rec(domain, &coeffs[m..]);
    let up_shifted = taylor_shift(&up, &domain.from_i64(-(m as i64)));
    let w = falling_factorial_poly(domain, m);
    low.add(&w.mul(&up_shifted).expect("same domain"))
}

/// `[P(a), P(a+1), ..., P(a+n)]` by the factorial-convolution scheme.
///
/// Needs characteristic 0 or `> n` so the points stay distinct and the
/// factorials up to `n!` are units.
pub fn eval_arith_prog<F: Field>(p: &DensePoly<F>, a: &F::Elem, n: usize) -> Result<Vec<F::Elem>> {
    let domain = p.domain();
    let ch = domain.characteristic();
    if ch != 0 && ch <= n as u64 {
        return Err(Error::CharacteristicTooSmall { p: ch, needed: n as u64 });
    }
    let facts = FactorialTable::with_inverses(domain, n)?;
    let q = taylor_shift(p, a);
    let f = to_falling_factorial(&q);
    // P(m) = m! * sum_k f_k / (m-k)!  for m = 0..n.
    let fk: Vec<F::Elem> = (0..=n).map(|k| f.coeff(k)).collect();
    let e = facts.exp_series(n, false)?;
    let conv = domain.poly_mul(&fk, &e);
    let mut out = Vec::with_capacity(n + 1);
    for m in 0..=n {
        out.push(domain.mul(&conv[m], facts.factorial(m)));
    }
    Ok(out)
}

/// The unique `P` of degree `< values.len()` with `P(a+m) = values[m]`.
pub fn interp_arith_prog<F: Field>(values: &[F::Elem], a: &F::Elem, domain: F) -> Result<DensePoly<F>> {
    assert!(!values.is_empty(), "need at least one value");
    let n = values.len() - 1;
    let ch = domain.characteristic();
    if ch != 0 && ch <= n as u64 {
        return Err(Error::CharacteristicTooSmall { p: ch, needed: n as u64 });
    }
    let facts = FactorialTable::with_inverses(domain, n)?;
    let mut h = Vec::with_capacity(n + 1);
    for (m, v) in values.iter().enumerate() {
        h.push(domain.mul(v, facts.inv_factorial(m)?));
    }
    let em = facts.exp_series(n, true)?;
    let mut f = domain.poly_mul(&h, &em);
    f.truncate(n + 1);
    let p0 = from_falling_factorial(&FallingFactorialCoeffs::new(domain, f));
    Ok(taylor_shift(&p0, &domain.neg(a)))
}

/// Bivariate product of coefficient grids (`grid[i][j]` is the
/// coefficient of `X^i Y^j`) by Kronecker substitution
/// `Y <- X^(dXf + dXg + 1)` and one univariate product.
pub fn bivar_mul<F: Field>(
    domain: F,
    f: &[Vec<F::Elem>],
    g: &[Vec<F::Elem>],
) -> Vec<Vec<F::Elem>> {
    let fx = f.len();
    let gx = g.len();
    if fx == 0 || gx == 0 {
        return Vec::new();
    }
    let fy = f.iter().map(|r| r.len()).max().unwrap();
    let gy = g.iter().map(|r| r.len()).max().unwrap();
    if fy == 0 || gy == 0 {
        return Vec::new();
    }
    let stride = fx + gx - 1;
    let pack = |grid: &[Vec<F::Elem>], ylen: usize| -> Vec<F::Elem> {
        let mut out = vec![domain.zero(); (ylen - 1) * stride + grid.len()];
        for (i, row) in grid.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                out[j * stride + i] = c.clone();
            }
        }
        out
    };
    let pf = pack(f, fy);
    let pg = pack(g, gy);
    let conv = domain.poly_mul(&pf, &pg);
    let ylen = fy + gy - 1;
    let mut out = vec![vec![domain.zero(); ylen]; stride];
    for (idx, c) in conv.into_iter().enumerate() {
        let j = idx / stride;
        let i = idx % stride;
        if j < ylen {
            out[i][j] = c;
        }
    }
    out
}

/// `(l)_k = l (l-1) ... (l-k+1)` by the product recurrence.
pub fn falling_factorial_value<F: Field>(domain: F, l: &F::Elem, k: usize) -> F::Elem {
    let mut acc = domain.one();
    let mut cur = l.clone();
    for s in 0..k {
        acc = domain.mul(&acc, &cur);
        let _ = s;
        cur = domain.sub(&cur, &domain.one());
    }
    acc
}

/// Binomial coefficient `C(i, k)` as a domain element.
///
/// Characteristic zero (or large enough) uses the multiplicative
/// recurrence; small characteristic reduces digit by digit (Lucas).
pub fn binomial<F: Field>(domain: F, i: u64, k: u64) -> F::Elem {
    if k > i {
        return domain.zero();
    }
    let ch = domain.characteristic();
    if ch == 0 || ch > i {
        let mut acc = domain.one();
        for s in 0..k {
            // C(i, s+1) = C(i, s) * (i - s) / (s + 1)
            acc = domain.mul(&acc, &domain.from_u64(i - s));
            let inv = domain
                .inv(&domain.from_u64(s + 1))
                .expect("s + 1 < characteristic");
            acc = domain.mul(&acc, &inv);
        }
        acc
    } else {
        let (mut i, mut k) = (i, k);
        let mut acc = domain.one();
        while i > 0 || k > 0 {
            let (di, dk) = (i % ch, k % ch);
            if dk > di {
                return domain.zero();
            }
            acc = domain.mul(&acc, &binomial(domain, di, dk));
            i /= ch;
            k /= ch;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{PrimeField, Rationals};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn random_poly<R: Rng>(rng: &mut R, f: PrimeField, deg: usize) -> DensePoly<PrimeField> {
        let coeffs = (0..=deg).map(|_| rng.gen_range(0..f.modulus())).collect();
        DensePoly::new(f, coeffs)
    }

    #[test]
    fn mul_basics() {
        let q = Rationals;
        use crate::domain::Field;
        let one_plus_x = DensePoly::new(q, vec![q.one(), q.one()]);
        let one_minus_x = DensePoly::new(q, vec![q.one(), q.from_i64(-1)]);
        let prod = one_plus_x.mul(&one_minus_x).unwrap();
        assert_eq!(prod, DensePoly::new(q, vec![q.one(), q.zero(), q.from_i64(-1)]));

        let f = random_poly(&mut ChaCha8Rng::seed_from_u64(0), fp(65521), 20);
        assert_eq!(f.mul(&DensePoly::one(fp(65521))).unwrap(), f);
    }

    #[test]
    fn mul_dispatch_matches_schoolbook() {
        use crate::domain::Field;
        let f = fp(65521);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..500 {
            let da = rng.gen_range(0..=256);
            let db = rng.gen_range(0..=256);
            let a = random_poly(&mut rng, f, da);
            let b = random_poly(&mut rng, f, db);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let fast = f.poly_mul(a.coeffs(), b.coeffs());
            let slow = schoolbook_mul(&f, a.coeffs(), b.coeffs());
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn taylor_shift_basics() {
        use crate::domain::Field;
        let q = Rationals;
        let p = DensePoly::new(q, vec![q.zero(), q.zero(), q.one()]); // X^2
        let s = taylor_shift(&p, &q.one());
        assert_eq!(s, DensePoly::new(q, vec![q.one(), q.from_i64(2), q.one()]));
        assert_eq!(taylor_shift(&p, &q.zero()), p);
    }

    // Naive oracle: expand sum c_j (X+a)^j by repeated multiplication.
    fn shift_oracle<F: crate::domain::Field>(p: &DensePoly<F>, a: &F::Elem) -> DensePoly<F> {
        let domain = p.domain();
        let lin = DensePoly::new(domain, vec![a.clone(), domain.one()]);
        let mut acc = DensePoly::zero(domain);
        let mut pow = DensePoly::one(domain);
        for c in p.coeffs() {
            acc = acc.add(&pow.scale(c));
            pow = pow.mul(&lin).expect("same domain");
        }
        acc
    }

    #[test]
    fn taylor_shift_small_characteristic() {
        use crate::domain::Field;
        let f = fp(3);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let coeffs: Vec<u64> = (0..=10).map(|_| rng.gen_range(0..3)).collect();
        let p = DensePoly::new(f, coeffs);
        let a = f.from_u64(2);
        assert_eq!(taylor_shift(&p, &a), shift_oracle(&p, &a));
    }

    #[test]
    fn taylor_shift_round_trip_every_characteristic() {
        use crate::domain::Field;
        for p in [2u64, 3, 5, 65521] {
            let f = fp(p);
            let mut rng = ChaCha8Rng::seed_from_u64(p);
            for _ in 0..20 {
                let poly = { let dg = rng.gen_range(0..40); random_poly(&mut rng, f, dg) };
                let a = f.from_u64(rng.gen_range(0..p));
                let back = taylor_shift(&taylor_shift(&poly, &a), &f.neg(&a));
                assert_eq!(back, poly);
                assert_eq!(taylor_shift(&poly, &a), shift_oracle(&poly, &a));
            }
        }
    }

    #[test]
    fn eval_arith_prog_basics() {
        use crate::domain::Field;
        let q = Rationals;
        let p = DensePoly::new(q, vec![q.zero(), q.zero(), q.one()]);
        let vals = eval_arith_prog(&p, &q.zero(), 2).unwrap();
        assert_eq!(vals, vec![q.zero(), q.one(), q.from_i64(4)]);

        let c = DensePoly::constant(q, q.from_i64(9));
        let vals = eval_arith_prog(&c, &q.from_i64(5), 3).unwrap();
        assert!(vals.iter().all(|v| *v == q.from_i64(9)));
    }

    #[test]
    fn eval_matches_horner_oracle() {
        use crate::domain::Field;
        let f = fp(65521);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let p = { let dg = rng.gen_range(0..32); random_poly(&mut rng, f, dg) };
            let a = f.from_u64(rng.gen_range(0..65521));
            let n = rng.gen_range(0..=64);
            let vals = eval_arith_prog(&p, &a, n).unwrap();
            for (m, v) in vals.iter().enumerate() {
                let x = f.add(&a, &f.from_u64(m as u64));
                assert_eq!(*v, p.eval(&x));
            }
        }
    }

    #[test]
    fn interp_basics_and_round_trip() {
        use crate::domain::Field;
        let q = Rationals;
        let p = interp_arith_prog(&[q.from_i64(7)], &q.zero(), q).unwrap();
        assert_eq!(p, DensePoly::constant(q, q.from_i64(7)));

        let p = interp_arith_prog(&[q.zero(), q.one(), q.from_i64(4)], &q.zero(), q).unwrap();
        assert_eq!(p, DensePoly::new(q, vec![q.zero(), q.zero(), q.one()]));

        let f = fp(65521);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let deg = rng.gen_range(0..48);
            let p = random_poly(&mut rng, f, deg);
            let a = f.from_u64(rng.gen_range(0..65521));
            let n = deg.max(1) + rng.gen_range(0..4);
            let vals = eval_arith_prog(&p, &a, n).unwrap();
            let back = interp_arith_prog(&vals, &a, f).unwrap();
            assert_eq!(back, p);
        }
    }

    // Oracle: Stirling numbers of the second kind, X^n = sum_k S(n,k) (X)_k.
    fn stirling2(n: usize, k: usize) -> u64 {
        if n == 0 && k == 0 {
            return 1;
        }
        if k == 0 || k > n {
            return 0;
        }
        stirling2(n - 1, k - 1) + (k as u64) * stirling2(n - 1, k)
    }

    #[test]
    fn falling_factorial_conversion() {
        use crate::domain::Field;
        let q = Rationals;
        let x = DensePoly::new(q, vec![q.zero(), q.one()]);
        let ff = to_falling_factorial(&x);
        assert_eq!(ff.coeffs(), &[q.zero(), q.one()]);

        let x3 = DensePoly::x_power(q, 3);
        let ff = to_falling_factorial(&x3);
        for k in 0..=3 {
            assert_eq!(ff.coeff(k), q.from_u64(stirling2(3, k)));
        }
        // X^3 = (X)_3 + 3 (X)_2 + (X)_1
        assert_eq!(ff.coeff(3), q.one());
        assert_eq!(ff.coeff(2), q.from_i64(3));
        assert_eq!(ff.coeff(1), q.one());

        // Larger degrees against the recurrence oracle.
        for n in 0..=9 {
            let xn = DensePoly::x_power(q, n);
            let ff = to_falling_factorial(&xn);
            for k in 0..=n {
                assert_eq!(ff.coeff(k), q.from_u64(stirling2(n, k)));
            }
        }
    }

    #[test]
    fn falling_factorial_round_trip() {
        for p in [0u64, 2, 65521] {
            let mut rng = ChaCha8Rng::seed_from_u64(100 + p);
            for _ in 0..200 {
                if p == 0 {
                    use crate::domain::Field;
                    let q = Rationals;
                    let deg = rng.gen_range(0..40);
                    let coeffs: Vec<_> =
                        (0..=deg).map(|_| q.from_i64(rng.gen_range(-50..50))).collect();
                    let poly = DensePoly::new(q, coeffs);
                    assert_eq!(from_falling_factorial(&to_falling_factorial(&poly)), poly);
                } else {
                    let f = fp(p);
                    let deg = rng.gen_range(0..70);
                    let poly = random_poly(&mut rng, f, deg);
                    assert_eq!(from_falling_factorial(&to_falling_factorial(&poly)), poly);
                }
            }
        }
    }

    #[test]
    fn bivar_mul_examples() {
        use crate::domain::Field;
        let q = Rationals;
        // (X + Y)(X - Y) = X^2 - Y^2
        let f = vec![vec![q.zero(), q.one()], vec![q.one(), q.zero()]];
        let g = vec![vec![q.zero(), q.from_i64(-1)], vec![q.one(), q.zero()]];
        let h = bivar_mul(q, &f, &g);
        assert_eq!(h[2][0], q.one());
        assert_eq!(h[0][2], q.from_i64(-1));
        assert_eq!(h[1][1], q.zero());
        assert_eq!(h[0][0], q.zero());

        // f * 1 = f
        let one = vec![vec![q.one()]];
        let h = bivar_mul(q, &f, &one);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(h[i][j], f[i][j]);
            }
        }
    }

    #[test]
    fn bivar_mul_matches_schoolbook() {
        let f = fp(65521);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let (dx1, dy1) = (rng.gen_range(0..=8), rng.gen_range(0..=8));
            let (dx2, dy2) = (rng.gen_range(0..=8), rng.gen_range(0..=8));
            let grid = |rng: &mut ChaCha8Rng, dx: usize, dy: usize| -> Vec<Vec<u64>> {
                (0..=dx)
                    .map(|_| (0..=dy).map(|_| rng.gen_range(0..65521)).collect())
                    .collect()
            };
            let a = grid(&mut rng, dx1, dy1);
            let b = grid(&mut rng, dx2, dy2);
            let fast = bivar_mul(f, &a, &b);
            // double-loop oracle
            let mut slow = vec![vec![0u64; dy1 + dy2 + 1]; dx1 + dx2 + 1];
            use crate::domain::Field;
            for i1 in 0..=dx1 {
                for j1 in 0..=dy1 {
                    for i2 in 0..=dx2 {
                        for j2 in 0..=dy2 {
                            let t = f.mul(&a[i1][j1], &b[i2][j2]);
                            slow[i1 + i2][j1 + j2] = f.add(&slow[i1 + i2][j1 + j2], &t);
                        }
                    }
                }
            }
            for (i, row) in slow.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    let got = fast.get(i).and_then(|r| r.get(j)).copied().unwrap_or(0);
                    assert_eq!(got, *v);
                }
            }
        }
    }

    #[test]
    fn falling_and_binomial_values() {
        use crate::domain::Field;
        let q = Rationals;
        assert_eq!(falling_factorial_value(q, &q.from_i64(2), 2), q.from_i64(2));
        assert_eq!(falling_factorial_value(q, &q.from_i64(9), 0), q.one());
        assert_eq!(falling_factorial_value(q, &q.from_i64(7), 3), q.from_i64(210));
        assert_eq!(binomial(q, 5, 2), q.from_i64(10));

        // Lucas path against a Pascal-triangle oracle.
        let f = fp(3);
        let mut pascal = vec![vec![1u64]];
        for n in 1..=20 {
            let prev = &pascal[n - 1];
            let mut row = vec![1u64];
            for k in 1..n {
                row.push((prev[k - 1] + prev[k]) % 3);
            }
            row.push(1);
            pascal.push(row);
        }
        for n in 0..=20u64 {
            for k in 0..=n {
                assert_eq!(binomial(f, n, k), pascal[n as usize][k as usize] % 3);
            }
        }
    }

    #[test]
    fn division_by_monic() {
        let f = fp(65521);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let p = { let dg = rng.gen_range(0..60); random_poly(&mut rng, f, dg) };
            let m = rng.gen_range(1..20);
            let w = falling_factorial_poly(f, m);
            let (quo, rem) = div_rem_monic(&p, &w);
            assert!(rem.degree().map_or(true, |d| d < m));
            assert_eq!(quo.mul(&w).unwrap().add(&rem), p);
        }
    }
}
