//! Basis conversions between the `θ` and `∂` canonical forms.
//!
//! The bridge is the identity `X^k ∂^k = θ(θ-1)...(θ-k+1) = (θ)_k`:
//! converting a `θ`-operator to `∂` is a falling-factorial base change
//! row by row, and the reverse direction runs diagonal by diagonal of
//! the `∂` grid, producing an operator over `K[X, X^-1]<θ>` with
//! valuation at least `-r`. Both directions work in any characteristic.

use crate::domain::Field;
use crate::matrix::DenseMatrix;
use crate::ore::{OrePoly, Var};
use crate::poly::{
    from_falling_factorial, taylor_shift, to_falling_factorial, DensePoly, FallingFactorialCoeffs,
};

/// An operator `Σ_e X^e β_e(θ)` with `e` running from `-v` to `d`.
///
/// `grid[e + v][j]` is the coefficient of `X^e θ^j`. Normalized at both
/// X-extremes; `v = 0` is an ordinary `θ`-operator.
#[derive(Clone, PartialEq, Debug)]
pub struct LaurentThetaPoly<F: Field> {
    domain: F,
    v: usize,
    grid: Vec<Vec<F::Elem>>,
}

impl<F: Field> LaurentThetaPoly<F> {
    pub fn new(domain: F, v: usize, grid: Vec<Vec<F::Elem>>) -> Self {
        // Find the occupied rectangle.
        let mut lo: Option<usize> = None;
        let mut hi = 0usize;
        let mut r: Option<usize> = None;
        for (i, row) in grid.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if !domain.is_zero(c) {
                    lo = Some(lo.map_or(i, |v| v.min(i)));
                    hi = hi.max(i);
                    r = Some(r.map_or(j, |v| v.max(j)));
                }
            }
        }
        let (lo, r) = match (lo, r) {
            (Some(lo), Some(r)) => (lo, r),
            _ => return LaurentThetaPoly { domain, v: 0, grid: Vec::new() },
        };
        let mut out = vec![vec![domain.zero(); r + 1]; hi - lo + 1];
        for (i, row) in grid.into_iter().enumerate() {
            if i < lo || i > hi {
                continue;
            }
            for (j, c) in row.into_iter().enumerate().take(r + 1) {
                out[i - lo][j] = c;
            }
        }
        // The valuation only shrinks; when every nonzero row sits at a
        // nonnegative X-power, pad back down to X^0 like a plain grid.
        let new_v = v as isize - lo as isize;
        if new_v <= 0 {
            let mut g = vec![vec![domain.zero(); r + 1]; (-new_v) as usize];
            g.extend(out);
            LaurentThetaPoly { domain, v: 0, grid: g }
        } else {
            LaurentThetaPoly { domain, v: new_v as usize, grid: out }
        }
    }

    pub fn zero(domain: F) -> Self {
        LaurentThetaPoly { domain, v: 0, grid: Vec::new() }
    }

    pub fn from_theta(op: &OrePoly<F>) -> Self {
        assert_eq!(op.var(), Var::Theta);
        LaurentThetaPoly { domain: op.domain(), v: 0, grid: op.grid().to_vec() }
    }

    /// The plain `θ`-operator, available when the valuation is zero.
    pub fn to_theta(&self) -> Option<OrePoly<F>> {
        if self.v == 0 {
            Some(OrePoly::new(Var::Theta, self.domain, self.grid.clone()))
        } else {
            None
        }
    }

    pub fn domain(&self) -> F {
        self.domain
    }

    pub fn is_zero(&self) -> bool {
        self.grid.is_empty()
    }

    /// Valuation `v`: the lowest X-power present is `-v`.
    pub fn valuation(&self) -> usize {
        self.v
    }

    /// Highest X-power `d`, for a nonzero operator.
    pub fn degree(&self) -> Option<isize> {
        if self.grid.is_empty() {
            None
        } else {
            Some(self.grid.len() as isize - 1 - self.v as isize)
        }
    }

    /// θ-degree, for a nonzero operator.
    pub fn theta_degree(&self) -> Option<usize> {
        self.grid.first().map(|r| r.len() - 1)
    }

    /// Coefficient of `X^e θ^j`.
    pub fn coeff(&self, e: isize, j: usize) -> F::Elem {
        let i = e + self.v as isize;
        if i < 0 {
            return self.domain.zero();
        }
        self.grid
            .get(i as usize)
            .and_then(|row| row.get(j))
            .cloned()
            .unwrap_or_else(|| self.domain.zero())
    }

    pub fn grid(&self) -> &[Vec<F::Elem>] {
        &self.grid
    }

    /// `β_e(θ)` for `e = row - v`.
    pub fn row_poly(&self, row: usize) -> DensePoly<F> {
        DensePoly::new(self.domain, self.grid[row].clone())
    }
}

/// `θ`-form to `∂`-form: per X-row falling-factorial base change, using
/// `(θ)_k = X^k ∂^k`.
pub fn theta_to_partial<F: Field>(a: &OrePoly<F>) -> OrePoly<F> {
    assert_eq!(a.var(), Var::Theta);
    let dom = a.domain();
    if a.is_zero() {
        return OrePoly::zero(Var::Partial, dom);
    }
    let d = a.grid().len() - 1;
    let r = a.grid()[0].len() - 1;
    let mut grid = vec![vec![dom.zero(); r + 1]; d + r + 1];
    for i in 0..=d {
        let f = to_falling_factorial(&a.d_coeff_of_degree(i));
        for (k, c) in f.coeffs().iter().enumerate() {
            grid[i + k][k] = dom.add(&grid[i + k][k], c);
        }
    }
    OrePoly::new(Var::Partial, dom, grid)
}

/// `∂`-form to Laurent `θ`-form: per diagonal `e = i - j` of the grid,
/// `β_e = Σ_j b_(e+j,j) (θ)_j` read back off the falling-factorial basis.
pub fn partial_to_theta<F: Field>(b: &OrePoly<F>) -> LaurentThetaPoly<F> {
    assert_eq!(b.var(), Var::Partial);
    let dom = b.domain();
    if b.is_zero() {
        return LaurentThetaPoly::zero(dom);
    }
    let d = b.grid().len() - 1;
    let r = b.grid()[0].len() - 1;
    let v = r;
    let mut grid = Vec::with_capacity(d + v + 1);
    for e in -(v as isize)..=(d as isize) {
        let mut f = Vec::with_capacity(r + 1);
        for j in 0..=r {
            let i = e + j as isize;
            if i < 0 || i > d as isize {
                f.push(dom.zero());
            } else {
                f.push(b.coeff(i as usize, j));
            }
        }
        let beta = from_falling_factorial(&FallingFactorialCoeffs::new(dom, f));
        let mut row = beta.into_coeffs();
        row.resize(r + 1, dom.zero());
        grid.push(row);
    }
    LaurentThetaPoly::new(dom, v, grid)
}

/// Laurent `θ`-form back to `∂`. Rows with negative X-power must cancel
/// against the base change (they do whenever the operand actually is a
/// polynomial operator, e.g. a product of two of them).
pub fn laurent_theta_to_partial<F: Field>(l: &LaurentThetaPoly<F>) -> OrePoly<F> {
    let dom = l.domain();
    if l.is_zero() {
        return OrePoly::zero(Var::Partial, dom);
    }
    let v = l.valuation() as isize;
    let d = l.degree().unwrap();
    let r = l.theta_degree().unwrap();
    let rows = (d + r as isize + 1).max(1) as usize;
    let mut grid = vec![vec![dom.zero(); r + 1]; rows];
    for row in 0..l.grid().len() {
        let e = row as isize - v;
        let f = to_falling_factorial(&l.row_poly(row));
        for (k, c) in f.coeffs().iter().enumerate() {
            let i = e + k as isize;
            if i < 0 {
                assert!(
                    dom.is_zero(c),
                    "operator has a genuine pole: X^{i} ∂^{k} term survives"
                );
                continue;
            }
            let i = i as usize;
            grid[i][k] = dom.add(&grid[i][k], c);
        }
    }
    OrePoly::new(Var::Partial, dom, grid)
}

/// Substitutes `θ <- θ + n`, one polynomial shift per X-power.
pub fn theta_shift<F: Field>(c: &OrePoly<F>, n: i64) -> OrePoly<F> {
    assert_eq!(c.var(), Var::Theta);
    let dom = c.domain();
    let a = dom.from_i64(n);
    let grid = (0..c.grid().len())
        .map(|i| {
            let mut row = taylor_shift(&c.d_coeff_of_degree(i), &a).into_coeffs();
            row.resize(c.grid()[i].len(), dom.zero());
            row
        })
        .collect();
    OrePoly::new(Var::Theta, dom, grid)
}

/// [`theta_shift`] on the Laurent form.
pub fn theta_shift_laurent<F: Field>(c: &LaurentThetaPoly<F>, n: i64) -> LaurentThetaPoly<F> {
    let dom = c.domain();
    let a = dom.from_i64(n);
    let cols = c.grid().first().map_or(0, |r| r.len());
    let grid = (0..c.grid().len())
        .map(|i| {
            let mut row = taylor_shift(&c.row_poly(i), &a).into_coeffs();
            row.resize(cols, dom.zero());
            row
        })
        .collect();
    LaurentThetaPoly::new(dom, c.valuation(), grid)
}

/// Naive product of Laurent `θ`-operators through the commutation rule
/// `C(X,θ) X^(-n) = X^(-n) C(X, θ-n)`; reference for the matrix route.
pub fn laurent_mul_naive<F: Field>(
    b: &LaurentThetaPoly<F>,
    a: &LaurentThetaPoly<F>,
) -> LaurentThetaPoly<F> {
    let dom = b.domain();
    if b.is_zero() || a.is_zero() {
        return LaurentThetaPoly::zero(dom);
    }
    let (vb, va) = (b.valuation(), a.valuation());
    // X^(-vb) B~ X^(-va) A~ = X^(-vb-va) B~(X, θ - va) A~.
    let bt = OrePoly::new(Var::Theta, dom, b.grid().to_vec());
    let at = OrePoly::new(Var::Theta, dom, a.grid().to_vec());
    let bs = theta_shift(&bt, -(va as i64));
    let prod = crate::ore::mul_naive(&bs, &at).expect("same tag and domain");
    LaurentThetaPoly::new(dom, vb + va, prod.grid().to_vec())
}

/// Signed Stirling numbers of the first kind, `(X)_j = Σ_k s(j,k) X^k`,
/// as a lower-triangular `(n+1) x (n+1)` matrix. Test fixture for the
/// base changes.
pub fn stirling_first_matrix<F: Field>(domain: F, n: usize) -> DenseMatrix<F> {
    let mut m = DenseMatrix::zeros(domain, n + 1, n + 1);
    m.set(0, 0, domain.one());
    for j in 1..=n {
        for k in 0..=j {
            // s(j,k) = s(j-1,k-1) - (j-1) s(j-1,k)
            let prev = if k > 0 { m.get(j - 1, k - 1).clone() } else { domain.zero() };
            let t = domain.mul(&domain.from_u64(j as u64 - 1), m.get(j - 1, k));
            m.set(j, k, domain.sub(&prev, &t));
        }
    }
    m
}

/// Stirling numbers of the second kind, `X^j = Σ_k S(j,k) (X)_k`.
pub fn stirling_second_matrix<F: Field>(domain: F, n: usize) -> DenseMatrix<F> {
    let mut m = DenseMatrix::zeros(domain, n + 1, n + 1);
    m.set(0, 0, domain.one());
    for j in 1..=n {
        for k in 1..=j {
            // S(j,k) = S(j-1,k-1) + k S(j-1,k)
            let t = domain.mul(&domain.from_u64(k as u64), m.get(j - 1, k));
            m.set(j, k, domain.add(m.get(j - 1, k - 1), &t));
        }
    }
    m
}
