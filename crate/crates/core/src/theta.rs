//! Evaluation-interpolation multiplication in `K[X]<θ>`.
//!
//! An operator `A = Σ X^i Ã_i(θ)` acts on `X^k` as
//! `A(X^k) = X^k Σ_i Ã_i(k) X^i`, so the matrix of `A` on the monomial
//! basis is banded with the values `Ã_i(k)` on its diagonals. Products
//! of operators become products of such matrices; evaluation and
//! interpolation on `0, 1, 2, ...` convert between the two views,
//! either through explicit Vandermonde matrix products (the `vdh`
//! variant) or through fast multipoint evaluation on arithmetic
//! progressions (the `fast` variant).

use crate::domain::{elem_pow, FactorialTable, Field};
use crate::matrix::{
    mat_mul, strassen_one_level, BandDiagonal, BandMetadata, BlockCounter, DenseMatrix, Strategy,
};
use crate::ore::{OrePoly, Var};
use crate::poly::{eval_arith_prog, interp_arith_prog, DensePoly};
use crate::{Error, Result};

/// How the evaluation/interpolation tasks are carried out.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Variant {
    /// Explicit Vandermonde (and inverse) matrix products.
    Vandermonde,
    /// Fast multipoint evaluation/interpolation per polynomial.
    Fast,
}

/// Block accounting mode for the matrix products.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Blocking {
    /// Plain products, nothing counted.
    None,
    /// Every product decomposed into blocks of the given size and
    /// fully counted.
    Blocked(usize),
    /// Structurally zero block pairs skipped in the main banded
    /// product, and the square interpolation product run through one
    /// Strassen level.
    ZeroStrassen(usize),
}

/// The rows of the grid as polynomials `Ã_i(θ)`.
pub fn diagonal_form<F: Field>(a: &OrePoly<F>) -> Vec<DensePoly<F>> {
    (0..a.grid().len()).map(|i| a.d_coeff_of_degree(i)).collect()
}

/// Banded evaluation matrix of a `θ`-operator over an explicit window.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaEvalMatrix<F: Field> {
    matrix: DenseMatrix<F>,
    /// X-degree of the source operator (number of band diagonals - 1).
    pub d: usize,
}

impl<F: Field> ThetaEvalMatrix<F> {
    pub fn matrix(&self) -> &DenseMatrix<F> {
        &self.matrix
    }
}

/// The Vandermonde matrix on the nodes `start, start+1, ...`:
/// entry `(k, j) = (start + k)^j`.
pub fn vandermonde<F: Field>(domain: F, start: i64, rows: usize, cols: usize) -> DenseMatrix<F> {
    DenseMatrix::from_fn(domain, rows, cols, |k, j| {
        elem_pow(&domain, &domain.from_i64(start + k as i64), j as u64)
    })
}

/// Inverse of the square Vandermonde on `start, ..., start + n - 1`,
/// built from the Lagrange basis in `O(n^2)` operations.
pub fn inverse_vandermonde<F: Field>(domain: F, start: i64, n: usize) -> Result<DenseMatrix<F>> {
    assert!(n > 0);
    let s = n - 1;
    let facts = FactorialTable::with_inverses(domain, s)?;
    // Master polynomial  Π_k (X - x_k).
    let mut master = vec![domain.one()];
    for k in 0..n {
        let xk = domain.from_i64(start + k as i64);
        let mut next = vec![domain.zero(); master.len() + 1];
        for (j, c) in master.iter().enumerate() {
            next[j + 1] = domain.add(&next[j + 1], c);
            next[j] = domain.sub(&next[j], &domain.mul(c, &xk));
        }
        master = next;
    }
    let mut out = DenseMatrix::zeros(domain, n, n);
    for i in 0..n {
        // q_i = master / (X - x_i) by synthetic division.
        let xi = domain.from_i64(start + i as i64);
        let mut q = vec![domain.zero(); n];
        let mut carry = domain.zero();
        for j in (0..n).rev() {
            carry = domain.add(&master[j + 1], &domain.mul(&carry, &xi));
            q[j] = carry.clone();
        }
        // Π_{k≠i} (x_i - x_k) = (-1)^(s-i) i! (s-i)!
        let mut denom_inv = domain.mul(facts.inv_factorial(i)?, facts.inv_factorial(s - i)?);
        if (s - i) % 2 == 1 {
            denom_inv = domain.neg(&denom_inv);
        }
        for (j, c) in q.iter().enumerate() {
            out.set(j, i, domain.mul(c, &denom_inv));
        }
    }
    Ok(out)
}

/// Values `polys[i](start + k)` as an `npoints x polys.len()` matrix.
pub(crate) fn eval_rows<F: Field>(
    domain: F,
    polys: &[DensePoly<F>],
    deg_bound: usize,
    start: i64,
    npoints: usize,
    variant: Variant,
    strategy: Strategy,
    counter: Option<&mut BlockCounter>,
) -> Result<DenseMatrix<F>> {
    let ch = domain.characteristic();
    if ch != 0 && ch <= (npoints - 1) as u64 {
        return Err(Error::CharacteristicTooSmall { p: ch, needed: (npoints - 1) as u64 });
    }
    match variant {
        Variant::Vandermonde => {
            let v = vandermonde(domain, start, npoints, deg_bound + 1);
            let coeffs = DenseMatrix::from_fn(domain, deg_bound + 1, polys.len(), |j, i| {
                polys[i].coeff(j)
            });
            mat_mul(&v, &coeffs, strategy, counter)
        }
        Variant::Fast => {
            let mut out = DenseMatrix::zeros(domain, npoints, polys.len());
            for (i, p) in polys.iter().enumerate() {
                let vals = eval_arith_prog(p, &domain.from_i64(start), npoints - 1)?;
                for (k, v) in vals.into_iter().enumerate() {
                    out.set(k, i, v);
                }
            }
            Ok(out)
        }
    }
}

/// Interpolates every column of `values` (values on
/// `start, ..., start + npoints - 1`) back to coefficients; the result
/// has the same shape, column `i` holding the coefficients of poly `i`.
pub(crate) fn interp_cols<F: Field>(
    domain: F,
    values: &DenseMatrix<F>,
    start: i64,
    variant: Variant,
    strategy: Strategy,
    counter: Option<&mut BlockCounter>,
) -> Result<DenseMatrix<F>> {
    let npoints = values.rows();
    match variant {
        Variant::Vandermonde => {
            let vinv = inverse_vandermonde(domain, start, npoints)?;
            if let Strategy::Strassen(_) = strategy {
                return strassen_one_level(&vinv, values, counter);
            }
            mat_mul(&vinv, values, strategy, counter)
        }
        Variant::Fast => {
            let mut out = DenseMatrix::zeros(domain, npoints, values.cols());
            for i in 0..values.cols() {
                let col: Vec<F::Elem> = (0..npoints).map(|k| values.get(k, i).clone()).collect();
                let p = interp_arith_prog(&col, &domain.from_i64(start), domain)?;
                for (j, c) in p.coeffs().iter().enumerate() {
                    out.set(j, i, c.clone());
                }
            }
            Ok(out)
        }
    }
}

/// Assembles the banded matrix with `values[k][i]` at entry
/// `(i + k, k)` and attaches the band metadata.
pub(crate) fn assemble_banded<F: Field>(
    domain: F,
    values: &DenseMatrix<F>,
    d: usize,
    rows: usize,
    cols: usize,
) -> DenseMatrix<F> {
    let mut m = DenseMatrix::zeros(domain, rows, cols);
    let mut diagonals = Vec::new();
    for i in 0..=d {
        if i >= rows {
            break;
        }
        let len = cols.min(rows - i);
        for k in 0..len {
            if k < values.rows() {
                m.set(i + k, k, values.get(k, i).clone());
            }
        }
        diagonals.push(BandDiagonal { offset: -(i as isize), first_row: i, len });
    }
    m.with_band(BandMetadata { diagonals }).expect("band is consistent by construction")
}

/// Evaluation matrix of `A` over a `rows x cols` window of the infinite
/// matrix (column `k` holds `A(X^k)`).
pub fn theta_to_matrix<F: Field>(
    a: &OrePoly<F>,
    rows: usize,
    cols: usize,
    variant: Variant,
) -> Result<ThetaEvalMatrix<F>> {
    assert_eq!(a.var(), Var::Theta);
    let domain = a.domain();
    if a.is_zero() {
        return Ok(ThetaEvalMatrix { matrix: DenseMatrix::zeros(domain, rows, cols), d: 0 });
    }
    let polys = diagonal_form(a);
    let d = polys.len() - 1;
    let r = a.grid()[0].len() - 1;
    let values = eval_rows(domain, &polys, r, 0, cols, variant, Strategy::Naive, None)?;
    Ok(ThetaEvalMatrix { matrix: assemble_banded(domain, &values, d, rows, cols), d })
}

/// Recovers the unique bidegree-`(≤d, ≤r)` operator with the given
/// evaluation matrix; inverse of [`theta_to_matrix`] on its image.
pub fn matrix_to_theta<F: Field>(
    m: &DenseMatrix<F>,
    d: usize,
    r: usize,
    variant: Variant,
) -> Result<OrePoly<F>> {
    let domain = m.domain();
    // Off-band entries must vanish.
    for row in 0..m.rows() {
        for col in 0..m.cols() {
            let i = row as isize - col as isize;
            if (i < 0 || i > d as isize) && !domain.is_zero(m.get(row, col)) {
                return Err(Error::InconsistentBand);
            }
        }
    }
    let npoints = r + 1;
    if m.cols() < npoints {
        return Err(Error::DimensionMismatch(format!(
            "window has {} columns, need {} interpolation points",
            m.cols(),
            npoints
        )));
    }
    let values = DenseMatrix::from_fn(domain, npoints, d + 1, |k, i| {
        if i + k < m.rows() {
            m.get(i + k, k).clone()
        } else {
            domain.zero()
        }
    });
    let coeffs = interp_cols(domain, &values, 0, variant, Strategy::Naive, None)?;
    let grid = (0..=d)
        .map(|i| (0..npoints).map(|j| coeffs.get(j, i).clone()).collect())
        .collect();
    Ok(OrePoly::new(Var::Theta, domain, grid))
}

/// `C = BA` by evaluation-interpolation: build the two banded windows,
/// multiply them, read `C` back off the diagonals.
pub fn mul_theta_vdh<F: Field>(
    b: &OrePoly<F>,
    a: &OrePoly<F>,
    variant: Variant,
    blocking: Blocking,
    mut counter: Option<&mut BlockCounter>,
) -> Result<OrePoly<F>> {
    if b.var() != Var::Theta || a.var() != Var::Theta {
        return Err(Error::TagMismatch);
    }
    if !b.domain().same_domain(&a.domain()) {
        return Err(Error::DomainMismatch);
    }
    let domain = b.domain();
    if b.is_zero() || a.is_zero() {
        return Ok(OrePoly::zero(Var::Theta, domain));
    }
    let (da, ra) = (a.grid().len() - 1, a.grid()[0].len() - 1);
    let (db, rb) = (b.grid().len() - 1, b.grid()[0].len() - 1);
    let rc = ra + rb;
    let dc = da + db; // upper bound; trimmed by normalization
    let ch = domain.characteristic();
    if ch != 0 && ch <= (da + rc) as u64 {
        return Err(Error::CharacteristicTooSmall { p: ch, needed: (da + rc) as u64 });
    }
    let (strat_eval, strat_main, strat_interp) = match blocking {
        Blocking::None => (Strategy::Naive, Strategy::Naive, Strategy::Naive),
        Blocking::Blocked(n) => (Strategy::Blocked(n), Strategy::Blocked(n), Strategy::Blocked(n)),
        Blocking::ZeroStrassen(n) => {
            (Strategy::Blocked(n), Strategy::BandedAware(n), Strategy::Strassen(n))
        }
    };
    // Windows of Eq. (7): M^B is (d_C+r_C+1) x (d_A+r_C+1),
    // M^A is (d_A+r_C+1) x (r_C+1).
    let a_vals = eval_rows(
        domain,
        &diagonal_form(a),
        ra,
        0,
        rc + 1,
        variant,
        strat_eval,
        counter.as_deref_mut(),
    )?;
    let b_vals = eval_rows(
        domain,
        &diagonal_form(b),
        rb,
        0,
        da + rc + 1,
        variant,
        strat_eval,
        counter.as_deref_mut(),
    )?;
    let ma = assemble_banded(domain, &a_vals, da, da + rc + 1, rc + 1);
    let mb = assemble_banded(domain, &b_vals, db, dc + rc + 1, da + rc + 1);
    let mc = mat_mul(&mb, &ma, strat_main, counter.as_deref_mut())?;
    // Diagonals of M^C hold C~_i on 0..r_C.
    let values = DenseMatrix::from_fn(domain, rc + 1, dc + 1, |k, i| mc.get(i + k, k).clone());
    let coeffs = interp_cols(domain, &values, 0, variant, strat_interp, counter)?;
    let grid = (0..=dc)
        .map(|i| (0..=rc).map(|j| coeffs.get(j, i).clone()).collect())
        .collect();
    Ok(OrePoly::new(Var::Theta, domain, grid))
}
