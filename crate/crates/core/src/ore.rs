//! Canonical operator forms and the classical multiplication schemes.
//!
//! An operator is stored as a coefficient grid `c[i][j]` for
//! `X^i D^j`, with `X` powers on the left and the derivation on the
//! right. The variable tag picks the commutation law: `∂X = X∂ + 1`
//! for the Weyl form, `θX = X(θ + 1)` for the Euler form.

use crate::domain::{elem_pow, FactorialTable, Field};
use crate::poly::{binomial, bivar_mul, falling_factorial_value, DensePoly};
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Var {
    /// `∂ = d/dX`.
    Partial,
    /// `θ = X∂`.
    Theta,
}

impl Var {
    pub fn symbol(&self) -> &'static str {
        match self {
            Var::Partial => "partial",
            Var::Theta => "theta",
        }
    }
}

/// Bidegree `(d, r)` of a nonzero operator; the zero operator carries a
/// distinct marker rather than sentinel integers.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Bidegree {
    Zero,
    Deg { d: usize, r: usize },
}

impl Bidegree {
    pub fn d(&self) -> Option<usize> {
        match self {
            Bidegree::Zero => None,
            Bidegree::Deg { d, .. } => Some(*d),
        }
    }

    pub fn r(&self) -> Option<usize> {
        match self {
            Bidegree::Zero => None,
            Bidegree::Deg { r, .. } => Some(*r),
        }
    }
}

/// An operator in canonical form over the tagged algebra.
#[derive(Clone, PartialEq, Debug)]
pub struct OrePoly<F: Field> {
    var: Var,
    domain: F,
    /// Rectangular `(d+1) x (r+1)` grid; empty for the zero operator.
    /// Normalized: the last row and the last column each hold a nonzero.
    grid: Vec<Vec<F::Elem>>,
}

impl<F: Field> OrePoly<F> {
    /// Builds an operator from an arbitrary (possibly ragged,
    /// unnormalized) grid.
    pub fn new(var: Var, domain: F, grid: Vec<Vec<F::Elem>>) -> Self {
        let mut d: Option<usize> = None;
        let mut r: Option<usize> = None;
        for (i, row) in grid.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if !domain.is_zero(c) {
                    d = Some(d.map_or(i, |v| v.max(i)));
                    r = Some(r.map_or(j, |v| v.max(j)));
                }
            }
        }
        let (d, r) = match (d, r) {
            (Some(d), Some(r)) => (d, r),
            _ => return OrePoly { var, domain, grid: Vec::new() },
        };
        let mut out = vec![vec![domain.zero(); r + 1]; d + 1];
        for (i, row) in grid.into_iter().enumerate().take(d + 1) {
            for (j, c) in row.into_iter().enumerate().take(r + 1) {
                out[i][j] = c;
            }
        }
        OrePoly { var, domain, grid: out }
    }

    pub fn zero(var: Var, domain: F) -> Self {
        OrePoly { var, domain, grid: Vec::new() }
    }

    pub fn one(var: Var, domain: F) -> Self {
        OrePoly { var, domain, grid: vec![vec![domain.one()]] }
    }

    /// `c X^i D^j`.
    pub fn monomial(var: Var, domain: F, c: F::Elem, i: usize, j: usize) -> Self {
        if domain.is_zero(&c) {
            return Self::zero(var, domain);
        }
        let mut grid = vec![vec![domain.zero(); j + 1]; i + 1];
        grid[i][j] = c;
        OrePoly { var, domain, grid }
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn domain(&self) -> F {
        self.domain
    }

    pub fn grid(&self) -> &[Vec<F::Elem>] {
        &self.grid
    }

    pub fn is_zero(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn bidegree(&self) -> Bidegree {
        if self.grid.is_empty() {
            Bidegree::Zero
        } else {
            Bidegree::Deg { d: self.grid.len() - 1, r: self.grid[0].len() - 1 }
        }
    }

    /// Coefficient of `X^i D^j` (zero outside the grid).
    pub fn coeff(&self, i: usize, j: usize) -> F::Elem {
        self.grid
            .get(i)
            .and_then(|row| row.get(j))
            .cloned()
            .unwrap_or_else(|| self.domain.zero())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let d = self.domain;
        let rows = self.grid.len().max(other.grid.len());
        let cols = self
            .grid
            .first()
            .map_or(0, |r| r.len())
            .max(other.grid.first().map_or(0, |r| r.len()));
        let mut grid = vec![vec![d.zero(); cols]; rows];
        for (i, row) in grid.iter_mut().enumerate() {
            for (j, c) in row.iter_mut().enumerate() {
                *c = d.add(&self.coeff(i, j), &other.coeff(i, j));
            }
        }
        Ok(Self::new(self.var, d, grid))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.add(&other.scale(&self.domain.neg(&self.domain.one())))?)
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let d = self.domain;
        let grid = self
            .grid
            .iter()
            .map(|row| row.iter().map(|x| d.mul(x, c)).collect())
            .collect();
        Self::new(self.var, d, grid)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.var != other.var {
            return Err(Error::TagMismatch);
        }
        if !self.domain.same_domain(&other.domain) {
            return Err(Error::DomainMismatch);
        }
        Ok(())
    }

    /// Column `j` of the grid as a polynomial in `X`.
    pub fn x_coeff_of_order(&self, j: usize) -> DensePoly<F> {
        let coeffs = self.grid.iter().map(|row| row[j].clone()).collect();
        DensePoly::new(self.domain, coeffs)
    }

    /// Row `i` of the grid as a polynomial in the derivation.
    pub fn d_coeff_of_degree(&self, i: usize) -> DensePoly<F> {
        DensePoly::new(self.domain, self.grid[i].clone())
    }
}

/// Formal derivative along the `X` index of the canonical grid.
pub fn d_dx<F: Field>(l: &OrePoly<F>) -> OrePoly<F> {
    let dom = l.domain();
    let mut grid = Vec::new();
    for (i, row) in l.grid().iter().enumerate().skip(1) {
        let fac = dom.from_u64(i as u64);
        grid.push(row.iter().map(|c| dom.mul(c, &fac)).collect());
    }
    OrePoly::new(l.var(), dom, grid)
}

/// Formal derivative along the derivation index of the canonical grid.
pub fn d_dd<F: Field>(l: &OrePoly<F>) -> OrePoly<F> {
    let dom = l.domain();
    let grid = l
        .grid()
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| dom.mul(c, &dom.from_u64(j as u64)))
                .collect()
        })
        .collect();
    OrePoly::new(l.var(), dom, grid)
}

/// Applies the operator to a polynomial. The `θ` tag uses
/// `θ(X^k) = k X^k`; the `∂` tag differentiates.
pub fn apply<F: Field>(p: &OrePoly<F>, f: &DensePoly<F>) -> Result<DensePoly<F>> {
    if !p.domain().same_domain(&f.domain()) {
        return Err(Error::DomainMismatch);
    }
    let dom = p.domain();
    let mut acc = DensePoly::zero(dom);
    if p.is_zero() {
        return Ok(acc);
    }
    let r = p.grid()[0].len() - 1;
    match p.var() {
        Var::Partial => {
            let mut deriv = f.clone();
            for j in 0..=r {
                let col = p.x_coeff_of_order(j);
                acc = acc.add(&col.mul(&deriv)?);
                deriv = deriv.derivative();
            }
        }
        Var::Theta => {
            let mut tf = f.clone();
            for j in 0..=r {
                let col = p.x_coeff_of_order(j);
                acc = acc.add(&col.mul(&tf)?);
                // θ applied once more: X^k picks up a factor k.
                let coeffs = tf
                    .coeffs()
                    .iter()
                    .enumerate()
                    .map(|(k, c)| dom.mul(c, &dom.from_u64(k as u64)))
                    .collect();
                tf = DensePoly::new(dom, coeffs);
            }
        }
    }
    Ok(acc)
}

/// Canonical form of `∂^i X^l` from Leibniz's formula
/// `∂^i X^l = Σ_k (l)_k C(i,k) X^(l-k) ∂^(i-k)`.
pub fn leibniz_monomial<F: Field>(domain: F, i: usize, l: usize) -> OrePoly<F> {
    let mut grid = vec![vec![domain.zero(); i + 1]; l + 1];
    for k in 0..=i.min(l) {
        let fall = falling_factorial_value(domain, &domain.from_u64(l as u64), k);
        let bin = binomial(domain, i as u64, k as u64);
        grid[l - k][i - k] = domain.mul(&fall, &bin);
    }
    OrePoly::new(Var::Partial, domain, grid)
}

/// Naive product by expanding every `D^j X^k` monomial pair; the
/// reference implementation the other schemes are checked against.
pub fn mul_naive<F: Field>(b: &OrePoly<F>, a: &OrePoly<F>) -> Result<OrePoly<F>> {
    b.check_compatible(a)?;
    let dom = b.domain();
    let var = b.var();
    if b.is_zero() || a.is_zero() {
        return Ok(OrePoly::zero(var, dom));
    }
    let (db, rb) = (b.grid().len() - 1, b.grid()[0].len() - 1);
    let (da, ra) = (a.grid().len() - 1, a.grid()[0].len() - 1);
    let mut grid = vec![vec![dom.zero(); rb + ra + 1]; db + da + 1];
    for i in 0..=db {
        for j in 0..=rb {
            let bc = b.coeff(i, j);
            if dom.is_zero(&bc) {
                continue;
            }
            for k in 0..=da {
                for l in 0..=ra {
                    let ac = a.coeff(k, l);
                    if dom.is_zero(&ac) {
                        continue;
                    }
                    let c = dom.mul(&bc, &ac);
                    match var {
                        Var::Partial => {
                            // X^i (∂^j X^k) ∂^l by Leibniz.
                            let lb = leibniz_monomial(dom, j, k);
                            for (u, row) in lb.grid().iter().enumerate() {
                                for (v, w) in row.iter().enumerate() {
                                    if !dom.is_zero(w) {
                                        grid[i + u][v + l] =
                                            dom.add(&grid[i + u][v + l], &dom.mul(&c, w));
                                    }
                                }
                            }
                        }
                        Var::Theta => {
                            // θ^j X^k = X^k (θ + k)^j, expanded binomially.
                            let kf = dom.from_u64(k as u64);
                            for m in 0..=j {
                                let term = dom.mul(
                                    &binomial(dom, j as u64, m as u64),
                                    &elem_pow(&dom, &kf, (j - m) as u64),
                                );
                                grid[i + k][m + l] =
                                    dom.add(&grid[i + k][m + l], &dom.mul(&c, &term));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(OrePoly::new(var, dom, grid))
}

/// `∂T = T∂ + dT/dX`: one application of `∂` on the left.
fn partial_times<F: Field>(t: &OrePoly<F>) -> OrePoly<F> {
    let dom = t.domain();
    let mut grid: Vec<Vec<F::Elem>> = t
        .grid()
        .iter()
        .map(|row| {
            let mut r = vec![dom.zero()];
            r.extend(row.iter().cloned());
            r
        })
        .collect();
    let dt = d_dx(t);
    for (i, row) in dt.grid().iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            grid[i][j] = dom.add(&grid[i][j], c);
        }
    }
    OrePoly::new(t.var(), dom, grid)
}

/// `TX = XT + dT/d∂`: one multiplication by `X` on the right.
fn times_x<F: Field>(t: &OrePoly<F>) -> OrePoly<F> {
    let dom = t.domain();
    let mut grid: Vec<Vec<F::Elem>> = Vec::with_capacity(t.grid().len() + 1);
    grid.push(vec![dom.zero(); t.grid().first().map_or(1, |r| r.len())]);
    grid.extend(t.grid().iter().cloned());
    let dt = d_dd(t);
    for (i, row) in dt.grid().iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            grid[i][j] = dom.add(&grid[i][j], c);
        }
    }
    OrePoly::new(t.var(), dom, grid)
}

/// Iterative product `BA = Σ_j b_j(X) (∂^j A)`, building `∂^j A` by the
/// recurrence `∂T = T∂ + dT/dX`.
pub fn mul_iter_dx<F: Field>(b: &OrePoly<F>, a: &OrePoly<F>) -> Result<OrePoly<F>> {
    b.check_compatible(a)?;
    if b.var() != Var::Partial {
        return Err(Error::TagMismatch);
    }
    let dom = b.domain();
    if b.is_zero() || a.is_zero() {
        return Ok(OrePoly::zero(Var::Partial, dom));
    }
    let rb = b.grid()[0].len() - 1;
    let mut t = a.clone();
    let mut acc = OrePoly::zero(Var::Partial, dom);
    for j in 0..=rb {
        let bj = b.x_coeff_of_order(j);
        if !bj.is_zero() {
            // b_j(X) * T: each column of T is multiplied by b_j.
            let cols = t.grid()[0].len();
            let rows = t.grid().len() + bj.coeffs().len() - 1;
            let mut grid = vec![vec![dom.zero(); cols]; rows];
            for jj in 0..cols {
                let col = t.x_coeff_of_order(jj);
                let prod = bj.mul(&col)?;
                for (i, c) in prod.coeffs().iter().enumerate() {
                    grid[i][jj] = c.clone();
                }
            }
            acc = acc.add(&OrePoly::new(Var::Partial, dom, grid))?;
        }
        if j < rb {
            t = partial_times(&t);
        }
    }
    Ok(acc)
}

/// Iterative product `BA = Σ_k (B X^k) a_k(∂)`, building `B X^k` by the
/// recurrence `TX = XT + dT/d∂`.
pub fn mul_iter_x<F: Field>(b: &OrePoly<F>, a: &OrePoly<F>) -> Result<OrePoly<F>> {
    b.check_compatible(a)?;
    if b.var() != Var::Partial {
        return Err(Error::TagMismatch);
    }
    let dom = b.domain();
    if b.is_zero() || a.is_zero() {
        return Ok(OrePoly::zero(Var::Partial, dom));
    }
    let da = a.grid().len() - 1;
    let mut t = b.clone();
    let mut acc = OrePoly::zero(Var::Partial, dom);
    for k in 0..=da {
        let ak = a.d_coeff_of_degree(k);
        if !ak.is_zero() {
            // T * a_k(∂): each row of T is convolved with a_k.
            let rows = t.grid().len();
            let cols = t.grid()[0].len() + ak.coeffs().len() - 1;
            let mut grid = vec![vec![dom.zero(); cols]; rows];
            for (i, row) in t.grid().iter().enumerate() {
                let prod = dom.poly_mul(row, ak.coeffs());
                for (j, c) in prod.into_iter().enumerate() {
                    grid[i][j] = c;
                }
            }
            acc = acc.add(&OrePoly::new(Var::Partial, dom, grid))?;
        }
        if k < da {
            t = times_x(&t);
        }
    }
    Ok(acc)
}

/// Runs whichever of the two iterative schemes loops fewer times,
/// comparing the order of `B` with the degree of `A`.
pub fn mul_iter<F: Field>(b: &OrePoly<F>, a: &OrePoly<F>) -> Result<OrePoly<F>> {
    let rb = b.bidegree().r().unwrap_or(0);
    let da = a.bidegree().d().unwrap_or(0);
    if rb <= da {
        mul_iter_dx(b, a)
    } else {
        mul_iter_x(b, a)
    }
}

/// Takayama's formula
/// `BA = Σ_k (1/k!) (d^k B / d∂^k) ∗ (d^k A / dX^k)`
/// with `∗` the commutative bivariate grid product.
pub fn mul_takayama<F: Field>(b: &OrePoly<F>, a: &OrePoly<F>) -> Result<OrePoly<F>> {
    b.check_compatible(a)?;
    if b.var() != Var::Partial {
        return Err(Error::TagMismatch);
    }
    let dom = b.domain();
    if b.is_zero() || a.is_zero() {
        return Ok(OrePoly::zero(Var::Partial, dom));
    }
    let rb = b.grid()[0].len() - 1;
    let da = a.grid().len() - 1;
    let kmax = rb.min(da);
    let facts = FactorialTable::with_inverses(dom, kmax)?;
    let mut bb = b.clone();
    let mut aa = a.clone();
    let mut grid: Vec<Vec<F::Elem>> = Vec::new();
    for k in 0..=kmax {
        if !bb.is_zero() && !aa.is_zero() {
            let prod = bivar_mul(dom, bb.grid(), aa.grid());
            let scale = facts.inv_factorial(k)?;
            for (i, row) in prod.into_iter().enumerate() {
                if grid.len() <= i {
                    grid.push(Vec::new());
                }
                for (j, c) in row.into_iter().enumerate() {
                    while grid[i].len() <= j {
                        grid[i].push(dom.zero());
                    }
                    grid[i][j] = dom.add(&grid[i][j], &dom.mul(&c, scale));
                }
            }
        }
        if k < kmax {
            bb = d_dd(&bb);
            aa = d_dx(&aa);
        }
    }
    Ok(OrePoly::new(Var::Partial, dom, grid))
}
