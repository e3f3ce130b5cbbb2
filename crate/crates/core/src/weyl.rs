//! Direct evaluation-interpolation in `K[X]<∂>`.
//!
//! An operator `P` of bidegree `(d, r)` is encoded by the window
//! `M~^P_{m,n}` whose column `k` holds the coefficients of
//! `P(X^k) mod X^(m+1)`. The window is banded: entry `(k+l, k)` on
//! diagonal `l` equals `k! (S_l)_k` where `S_l` is a single truncated
//! product of the grid diagonal `l` with the exponential series. The
//! product `BA` is one rectangular matrix product between such windows,
//! and the canonical form is read back by the inverse convolutions
//! (multiplying by `exp(-X)` instead).

use crate::domain::{FactorialTable, Field};
use crate::matrix::{
    mat_mul, strassen_one_level, BandDiagonal, BandMetadata, BlockCounter, DenseMatrix, Strategy,
};
use crate::opcount;
use crate::ore::{OrePoly, Var};
use crate::poly::{
    from_falling_factorial, to_falling_factorial, DensePoly, FallingFactorialCoeffs,
};
use crate::theta::Blocking;
use crate::{Error, Result};

/// A banded window `M~^P_{m,n}` of the infinite evaluation matrix of a
/// `∂`-operator (shape `(m+1) x (n+1)`).
#[derive(Clone, Debug, PartialEq)]
pub struct PartialEvalMatrix<F: Field> {
    matrix: DenseMatrix<F>,
    /// Max row index of the window.
    pub m: usize,
    /// Max column index of the window.
    pub n: usize,
    /// Truncated polynomial products spent building it: exactly one per
    /// nonzero diagonal of the source grid.
    pub products: usize,
}

impl<F: Field> PartialEvalMatrix<F> {
    pub fn matrix(&self) -> &DenseMatrix<F> {
        &self.matrix
    }

    /// Wraps an already-computed window (no band metadata attached).
    pub fn from_matrix(matrix: DenseMatrix<F>) -> Self {
        assert!(matrix.rows() > 0 && matrix.cols() > 0);
        let (m, n) = (matrix.rows() - 1, matrix.cols() - 1);
        PartialEvalMatrix { matrix, m, n, products: 0 }
    }
}

/// The window `M~^P_{m,n}`, built diagonal by diagonal: one truncated
/// product per nonzero diagonal, never a per-entry evaluation.
pub fn eval_matrix<F: Field>(p: &OrePoly<F>, m: usize, n: usize) -> Result<PartialEvalMatrix<F>> {
    if p.var() != Var::Partial {
        return Err(Error::TagMismatch);
    }
    let dom = p.domain();
    if p.is_zero() {
        return Ok(PartialEvalMatrix {
            matrix: DenseMatrix::zeros(dom, m + 1, n + 1),
            m,
            n,
            products: 0,
        });
    }
    let d = p.grid().len() - 1;
    let r = p.grid()[0].len() - 1;
    if m < d || n < r {
        return Err(Error::WindowTooSmall { m, n, d, r });
    }
    let facts = FactorialTable::with_inverses(dom, n)?;
    let exp = DensePoly::new(dom, facts.exp_series(n, false)?);
    let mut matrix = DenseMatrix::zeros(dom, m + 1, n + 1);
    let mut diagonals = Vec::new();
    let mut products = 0usize;
    for l in -(r as isize)..=(d as isize) {
        // Grid diagonal l: coefficient of X^i is the entry for
        // X^(i+l) ∂^i.
        let i0 = 0.max(-l) as usize;
        let i1 = r.min((d as isize - l) as usize);
        let diag = DensePoly::new(
            dom,
            (i0..=i1).map(|i| p.coeff((i as isize + l) as usize, i)).collect::<Vec<_>>(),
        )
        .shift_up(i0);
        if diag.is_zero() {
            continue;
        }
        let t = (m as isize - l).min(n as isize) as usize;
        let s = diag.mul(&exp)?.truncate(t + 1);
        products += 1;
        let kmin = 0.max(-l) as usize;
        for k in kmin..=t {
            matrix.set(
                (k as isize + l) as usize,
                k,
                dom.mul(facts.factorial(k), &s.coeff(k)),
            );
        }
        diagonals.push(BandDiagonal {
            offset: -l,
            first_row: (kmin as isize + l) as usize,
            len: t - kmin + 1,
        });
    }
    let matrix = matrix
        .with_band(BandMetadata { diagonals })
        .expect("band is consistent by construction");
    Ok(PartialEvalMatrix { matrix, m, n, products })
}

/// The unique `P` with `deg_X P <= d`, `ord P <= r` and
/// `M~^P_{d,r}` equal to the given window; inverts the diagonal
/// convolutions with `exp(-X)`.
pub fn interpol_matrix<F: Field>(
    m: &PartialEvalMatrix<F>,
    d: usize,
    r: usize,
) -> Result<OrePoly<F>> {
    let dom = m.matrix.domain();
    if m.matrix.rows() != d + 1 || m.matrix.cols() != r + 1 {
        return Err(Error::DimensionMismatch(format!(
            "window is {}x{}, interpolation target needs {}x{}",
            m.matrix.rows(),
            m.matrix.cols(),
            d + 1,
            r + 1
        )));
    }
    let facts = FactorialTable::with_inverses(dom, r)?;
    let expneg = DensePoly::new(dom, facts.exp_series(r, true)?);
    let mut grid = vec![vec![dom.zero(); r + 1]; d + 1];
    for l in -(r as isize)..=(d as isize) {
        let kmin = 0.max(-l) as usize;
        let kmax = (d as isize - l).min(r as isize) as usize;
        // Column k of the window, divided by k!, read along diagonal l.
        let u = DensePoly::new(
            dom,
            (kmin..=kmax)
                .map(|k| {
                    dom.mul(
                        m.matrix.get((k as isize + l) as usize, k),
                        facts.inv_factorial(k).expect("inverses present"),
                    )
                })
                .collect::<Vec<_>>(),
        )
        .shift_up(kmin);
        if u.is_zero() {
            continue;
        }
        let t = u.mul(&expneg)?.truncate(kmax + 1);
        for i in kmin..=kmax {
            let c = t.coeff(i);
            if !dom.is_zero(&c) {
                grid[(i as isize + l) as usize][i] = dom.add(&grid[(i as isize + l) as usize][i], &c);
            }
        }
    }
    Ok(OrePoly::new(Var::Partial, dom, grid))
}

/// Weight-homogeneous components of a `∂`-operator, each written as a
/// univariate polynomial in `X∂`: the operator is
/// `Σ_s l_neg[s-1](X∂) ∂^s + Σ_t X^t l_pos[t](X∂)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousParts<F: Field> {
    domain: F,
    /// `l_{-s}` at index `s - 1`, for `s = 1..=r`.
    pub neg: Vec<DensePoly<F>>,
    /// `l_t` at index `t`, for `t = 0..=d`.
    pub pos: Vec<DensePoly<F>>,
}

/// Splits `P` along the grid diagonals and rewrites each
/// `Σ_i c_i X^i ∂^i` as a polynomial in `X∂` (the falling-factorial
/// base change `X^i ∂^i = (X∂)(X∂ - 1)...(X∂ - i + 1)`). Works in any
/// characteristic.
pub fn homogeneous_decompose<F: Field>(p: &OrePoly<F>) -> Result<HomogeneousParts<F>> {
    if p.var() != Var::Partial {
        return Err(Error::TagMismatch);
    }
    let dom = p.domain();
    if p.is_zero() {
        return Ok(HomogeneousParts { domain: dom, neg: Vec::new(), pos: Vec::new() });
    }
    let d = p.grid().len() - 1;
    let r = p.grid()[0].len() - 1;
    let mut neg = Vec::with_capacity(r);
    for s in 1..=r {
        let mu = (r - s).min(d);
        let ff = FallingFactorialCoeffs::new(
            dom,
            (0..=mu).map(|j| p.coeff(j, j + s)).collect::<Vec<_>>(),
        );
        neg.push(from_falling_factorial(&ff));
    }
    while neg.last().is_some_and(|l| l.is_zero()) {
        neg.pop();
    }
    let mut pos = Vec::with_capacity(d + 1);
    for t in 0..=d {
        let mu = (d - t).min(r);
        let ff = FallingFactorialCoeffs::new(
            dom,
            (0..=mu).map(|i| p.coeff(t + i, i)).collect::<Vec<_>>(),
        );
        pos.push(from_falling_factorial(&ff));
    }
    Ok(HomogeneousParts { domain: dom, neg, pos })
}

/// Inverse of [`homogeneous_decompose`].
pub fn homogeneous_recompose<F: Field>(parts: &HomogeneousParts<F>) -> OrePoly<F> {
    let dom = parts.domain;
    let mut grid: Vec<Vec<F::Elem>> = Vec::new();
    let mut put = |i: usize, j: usize, c: F::Elem| {
        while grid.len() <= i {
            grid.push(Vec::new());
        }
        while grid[i].len() <= j {
            grid[i].push(dom.zero());
        }
        grid[i][j] = dom.add(&grid[i][j], &c);
    };
    for (idx, l) in parts.neg.iter().enumerate() {
        let s = idx + 1;
        let ff = to_falling_factorial(l);
        for (j, c) in ff.coeffs().iter().enumerate() {
            put(j, j + s, c.clone());
        }
    }
    for (t, l) in parts.pos.iter().enumerate() {
        let ff = to_falling_factorial(l);
        for (i, c) in ff.coeffs().iter().enumerate() {
            put(t + i, i, c.clone());
        }
    }
    OrePoly::new(Var::Partial, dom, grid)
}

/// `C = BA` through the window identity
/// `M~^B_{d_C, d_A+r_C} M~^A_{d_A+r_C, r_C} = M~^C_{d_C, r_C}`,
/// followed by interpolation.
pub fn mul_weyl<F: Field>(
    b: &OrePoly<F>,
    a: &OrePoly<F>,
    blocking: Blocking,
    counter: Option<&mut BlockCounter>,
) -> Result<OrePoly<F>> {
    mul_weyl_counted(b, a, blocking, counter).map(|(c, _)| c)
}

/// As [`mul_weyl`], also reporting the coefficient operations spent in
/// the non-matrix phases (evaluation and interpolation).
pub fn mul_weyl_counted<F: Field>(
    b: &OrePoly<F>,
    a: &OrePoly<F>,
    blocking: Blocking,
    mut counter: Option<&mut BlockCounter>,
) -> Result<(OrePoly<F>, u64)> {
    if b.var() != Var::Partial || a.var() != Var::Partial {
        return Err(Error::TagMismatch);
    }
    if !b.domain().same_domain(&a.domain()) {
        return Err(Error::DomainMismatch);
    }
    let dom = b.domain();
    if b.is_zero() || a.is_zero() {
        return Ok((OrePoly::zero(Var::Partial, dom), 0));
    }
    let (da, ra) = (a.grid().len() - 1, a.grid()[0].len() - 1);
    let (db, rb) = (b.grid().len() - 1, b.grid()[0].len() - 1);
    let rc = ra + rb;
    let dc = da + db; // upper bound; trimmed by normalization
    let ch = dom.characteristic();
    if ch != 0 && ch <= (da + rc) as u64 {
        return Err(Error::CharacteristicTooSmall { p: ch, needed: (da + rc) as u64 });
    }
    let (windows, eval_ops) = opcount::measure(|| -> Result<_> {
        let ma = eval_matrix(a, da + rc, rc)?;
        let mb = eval_matrix(b, dc, da + rc)?;
        Ok((ma, mb))
    });
    let (ma, mb) = windows?;
    let mc = match blocking {
        Blocking::None => mat_mul(mb.matrix(), ma.matrix(), Strategy::Naive, None)?,
        Blocking::Blocked(n) => {
            mat_mul(mb.matrix(), ma.matrix(), Strategy::Blocked(n), counter.as_deref_mut())?
        }
        Blocking::ZeroStrassen(_) => {
            // Split at column s = d_C + 1. The band confines the tail
            // columns of M^B to rows >= s - r_B and the tail rows of
            // M^A to columns >= s - d_A, so the remainder is one core
            // product on top of a single Strassen level for the square
            // head.
            let cols = da + rc + 1;
            let s = (dc + 1).min(cols);
            let head_b = mb.matrix().submatrix((0, dc + 1), (0, s));
            let head_a = ma.matrix().submatrix((0, s), (0, rc + 1));
            let mut out = strassen_one_level(&head_b, &head_a, counter.as_deref_mut())?;
            if s < cols {
                let r0 = s.saturating_sub(rb);
                let c0 = s.saturating_sub(da);
                let core_b = mb.matrix().submatrix((r0, dc + 1), (s, cols));
                let core_a = ma.matrix().submatrix((s, cols), (c0, rc + 1));
                let core = mat_mul(&core_b, &core_a, Strategy::Naive, None)?;
                out.add_at(&core, r0, c0);
                if let Some(c) = counter.as_deref_mut() {
                    c.naive += 1;
                }
            }
            out
        }
    };
    let window = PartialEvalMatrix { matrix: mc, m: dc, n: rc, products: 0 };
    let (res, interp_ops) = opcount::measure(|| interpol_matrix(&window, dc, rc));
    Ok((res?, eval_ops + interp_ops))
}
