//! Evaluation-interpolation multiplication in `K[X]<∂>` through the
//! Laurent `θ`-representation.
//!
//! A `∂`-operator of bidegree `(d, r)` becomes `X^(-v) C(X, θ)` with
//! valuation `v ≤ r`; its action on monomials is again captured by
//! banded matrices, now over windows of evaluation points that may be
//! negative. The product is one banded matrix product (Eq. (8) form
//! `M^C_{0,rC} = M^B_{-vA,dA+rC} M^A_{0,rC}`), framed by conversions
//! `∂ <-> θ` and evaluations/interpolations. The `vandermonde` variant
//! performs every framing task as an (instrumented) matrix product by
//! Stirling and Vandermonde matrices; the `fast` variant uses the base
//! changes from [`crate::conversions`] and fast multipoint routines,
//! leaving the central product as the only counted step.

use crate::conversions::{partial_to_theta, LaurentThetaPoly};
use crate::domain::Field;
use crate::laurent::{laurent_theta_to_partial, stirling_first_matrix, stirling_second_matrix};
use crate::matrix::{mat_mul, BlockCounter, DenseMatrix, Strategy};
use crate::ore::{OrePoly, Var};
use crate::poly::DensePoly;
use crate::theta::{assemble_banded, eval_rows, interp_cols, Blocking, Variant};
use crate::{Error, Result};

/// Banded evaluation matrix `M^L_(α,β)` of a Laurent `θ`-operator:
/// column `γ - α` holds the coefficients of `L(X^γ)` on
/// `X^(-v+α), ..., X^(d+β)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentEvalMatrix<F: Field> {
    matrix: DenseMatrix<F>,
    pub v: usize,
    pub d: isize,
    pub alpha: i64,
    pub beta: i64,
}

impl<F: Field> LaurentEvalMatrix<F> {
    pub fn matrix(&self) -> &DenseMatrix<F> {
        &self.matrix
    }
}

/// Builds `M^L_(α,β)`; the diagonals carry the evaluations of the
/// `L~_i` on the points `α, ..., β`.
pub fn laurent_to_matrix<F: Field>(
    l: &LaurentThetaPoly<F>,
    alpha: i64,
    beta: i64,
    variant: Variant,
) -> Result<LaurentEvalMatrix<F>> {
    assert!(alpha <= beta);
    let domain = l.domain();
    let cols = (beta - alpha) as usize + 1;
    if l.is_zero() {
        return Ok(LaurentEvalMatrix {
            matrix: DenseMatrix::zeros(domain, cols, cols),
            v: 0,
            d: 0,
            alpha,
            beta,
        });
    }
    let v = l.valuation();
    let d = l.degree().unwrap();
    let r = l.theta_degree().unwrap();
    let polys: Vec<DensePoly<F>> = (0..l.grid().len()).map(|t| l.row_poly(t)).collect();
    let values = eval_rows(domain, &polys, r, alpha, cols, variant, Strategy::Naive, None)?;
    let rows = (v as isize + d) as usize + cols;
    let matrix = assemble_banded(domain, &values, (v as isize + d) as usize, rows, cols);
    Ok(LaurentEvalMatrix { matrix, v, d, alpha, beta })
}

/// Counted banded window used inside [`mul_partial_vdh`].
#[allow(clippy::too_many_arguments)]
fn window<F: Field>(
    l: &LaurentThetaPoly<F>,
    alpha: i64,
    beta: i64,
    variant: Variant,
    strategy: Strategy,
    counter: Option<&mut BlockCounter>,
) -> Result<DenseMatrix<F>> {
    let domain = l.domain();
    let cols = (beta - alpha) as usize + 1;
    let v = l.valuation();
    let d = l.degree().unwrap();
    let r = l.theta_degree().unwrap();
    let polys: Vec<DensePoly<F>> = (0..l.grid().len()).map(|t| l.row_poly(t)).collect();
    let values = eval_rows(domain, &polys, r, alpha, cols, variant, strategy, counter)?;
    let rows = (v as isize + d) as usize + cols;
    Ok(assemble_banded(domain, &values, (v as isize + d) as usize, rows, cols))
}

/// `∂ -> θ` conversion as one product by the transposed inverse
/// Stirling matrix, instrumented; the counted shape is
/// `MM(r+1, r+1, d+r+1)`.
fn partial_to_theta_stirling<F: Field>(
    b: &OrePoly<F>,
    strategy: Strategy,
    counter: Option<&mut BlockCounter>,
) -> Result<LaurentThetaPoly<F>> {
    let domain = b.domain();
    let d = b.grid().len() - 1;
    let r = b.grid()[0].len() - 1;
    // Column e+r holds the falling-factorial data of the diagonal e.
    let f = DenseMatrix::from_fn(domain, r + 1, d + r + 1, |j, e_idx| {
        let i = e_idx as isize - r as isize + j as isize;
        if i < 0 || i > d as isize {
            domain.zero()
        } else {
            b.coeff(i as usize, j)
        }
    });
    let s1t = stirling_first_matrix(domain, r).transpose();
    let coeffs = mat_mul(&s1t, &f, strategy, counter)?;
    let grid = (0..d + r + 1)
        .map(|e_idx| (0..=r).map(|k| coeffs.get(k, e_idx).clone()).collect())
        .collect();
    Ok(LaurentThetaPoly::new(domain, r, grid))
}

/// Laurent `θ -> ∂` conversion as one product by the transposed
/// Stirling matrix, instrumented; counted shape
/// `MM(r+1, r+1, v+d+1)`.
fn laurent_to_partial_stirling<F: Field>(
    l: &LaurentThetaPoly<F>,
    strategy: Strategy,
    counter: Option<&mut BlockCounter>,
) -> Result<OrePoly<F>> {
    let domain = l.domain();
    if l.is_zero() {
        return Ok(OrePoly::zero(Var::Partial, domain));
    }
    let v = l.valuation() as isize;
    let d = l.degree().unwrap();
    let r = l.theta_degree().unwrap();
    let ndiag = l.grid().len();
    let c = DenseMatrix::from_fn(domain, r + 1, ndiag, |j, t| l.grid()[t].get(j).cloned().unwrap_or_else(|| domain.zero()));
    let s2t = stirling_second_matrix(domain, r).transpose();
    let ff = mat_mul(&s2t, &c, strategy, counter)?;
    let rows = (d + r as isize + 1).max(1) as usize;
    let mut grid = vec![vec![domain.zero(); r + 1]; rows];
    for t in 0..ndiag {
        let e = t as isize - v;
        for k in 0..=r {
            let coeff = ff.get(k, t);
            let i = e + k as isize;
            if i < 0 {
                assert!(
                    domain.is_zero(coeff),
                    "operator has a genuine pole: X^{i} ∂^{k} term survives"
                );
                continue;
            }
            let i = i as usize;
            grid[i][k] = domain.add(&grid[i][k], coeff);
        }
    }
    Ok(OrePoly::new(Var::Partial, domain, grid))
}

/// `C = BA` in `K[X]<∂>` through the Laurent `θ`-representation.
pub fn mul_partial_vdh<F: Field>(
    b: &OrePoly<F>,
    a: &OrePoly<F>,
    variant: Variant,
    blocking: Blocking,
    mut counter: Option<&mut BlockCounter>,
) -> Result<OrePoly<F>> {
    if b.var() != Var::Partial || a.var() != Var::Partial {
        return Err(Error::TagMismatch);
    }
    if !b.domain().same_domain(&a.domain()) {
        return Err(Error::DomainMismatch);
    }
    let domain = b.domain();
    if b.is_zero() || a.is_zero() {
        return Ok(OrePoly::zero(Var::Partial, domain));
    }
    let ra = a.grid()[0].len() - 1;
    let rb = b.grid()[0].len() - 1;
    let rc = ra + rb;
    let (strat_eval, strat_main, strat_interp) = match blocking {
        Blocking::None => (Strategy::Naive, Strategy::Naive, Strategy::Naive),
        Blocking::Blocked(n) => (Strategy::Blocked(n), Strategy::Blocked(n), Strategy::Blocked(n)),
        Blocking::ZeroStrassen(n) => {
            (Strategy::Blocked(n), Strategy::BandedAware(n), Strategy::Blocked(n))
        }
    };
    // Step 1: conversions into the Laurent θ-representation.
    let (la, lb) = match variant {
        Variant::Fast => (partial_to_theta(a), partial_to_theta(b)),
        Variant::Vandermonde => (
            partial_to_theta_stirling(a, strat_eval, counter.as_deref_mut())?,
            partial_to_theta_stirling(b, strat_eval, counter.as_deref_mut())?,
        ),
    };
    let va = la.valuation();
    let da = la.degree().unwrap();
    // All evaluation points live in -v_A .. d_A + r_C.
    let needed = (va as i64 + da as i64 + rc as i64) as u64;
    let ch = domain.characteristic();
    if ch != 0 && ch <= needed {
        return Err(Error::CharacteristicTooSmall { p: ch, needed });
    }
    // Step 2.1: the two windows of Eq. (8).
    let ma = window(&la, 0, rc as i64, variant, strat_eval, counter.as_deref_mut())?;
    let mb = window(
        &lb,
        -(va as i64),
        da as i64 + rc as i64,
        variant,
        strat_eval,
        counter.as_deref_mut(),
    )?;
    // Step 2.2: the main product.
    let mc = mat_mul(&mb, &ma, strat_main, counter.as_deref_mut())?;
    // Step 2.3: interpolate the diagonals of M^C on 0..r_C.
    let vc = va + lb.valuation();
    let ndiag = mc.rows() - rc;
    let values = DenseMatrix::from_fn(domain, rc + 1, ndiag, |k, t| mc.get(t + k, k).clone());
    let coeffs = interp_cols(domain, &values, 0, variant, strat_interp, counter.as_deref_mut())?;
    let grid = (0..ndiag)
        .map(|t| (0..=rc).map(|j| coeffs.get(j, t).clone()).collect())
        .collect();
    let lc = LaurentThetaPoly::new(domain, vc, grid);
    // Step 3: back to ∂.
    match variant {
        Variant::Fast => Ok(laurent_theta_to_partial(&lc)),
        Variant::Vandermonde => laurent_to_partial_stirling(&lc, strat_interp, counter),
    }
}
