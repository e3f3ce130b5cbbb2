//! Matrix products computed through operator products.
//!
//! A lower-triangular matrix is the top-left window of the evaluation
//! matrix of a `θ`-operator whose grid rows interpolate its diagonals,
//! so triangular matrix multiplication reduces to one operator product.
//! General matrix multiplication in turn reduces to the triangular case
//! by squaring a 3x3 block unitriangular embedding. These procedures
//! exist as executable witnesses of the equivalences, not as fast
//! kernels.

use crate::domain::Field;
use crate::matrix::DenseMatrix;
use crate::ore::{OrePoly, Var};
use crate::poly::{eval_arith_prog, interp_arith_prog};
use crate::theta::{mul_theta_vdh, Blocking, Variant};
use crate::{Error, Result};

fn check_lower_triangular<F: Field>(m: &DenseMatrix<F>) -> Result<()> {
    let dom = m.domain();
    for i in 0..m.rows() {
        for j in i + 1..m.cols() {
            if !dom.is_zero(m.get(i, j)) {
                return Err(Error::NotLowerTriangular);
            }
        }
    }
    Ok(())
}

/// The `θ`-operator whose evaluation-matrix window is the given
/// lower-triangular matrix: row `l` of the grid interpolates the `l`-th
/// lower diagonal on the points `0..=n-l`.
fn triangular_to_operator<F: Field>(t: &DenseMatrix<F>) -> Result<OrePoly<F>> {
    let dom = t.domain();
    let n = t.rows() - 1;
    let mut grid = Vec::with_capacity(n + 1);
    for l in 0..=n {
        let values: Vec<F::Elem> = (0..=n - l).map(|k| t.get(k + l, k).clone()).collect();
        let poly = interp_arith_prog(&values, &dom.zero(), dom)?;
        grid.push(poly.into_coeffs());
    }
    Ok(OrePoly::new(Var::Theta, dom, grid))
}

/// Top-left `(n+1) x (n+1)` window of the evaluation matrix of `c`, by
/// multipoint evaluation of each grid row.
fn operator_window<F: Field>(c: &OrePoly<F>, n: usize) -> Result<DenseMatrix<F>> {
    let dom = c.domain();
    let mut out = DenseMatrix::zeros(dom, n + 1, n + 1);
    for (l, _) in c.grid().iter().enumerate() {
        if l > n {
            break;
        }
        let row = c.d_coeff_of_degree(l);
        if row.is_zero() {
            continue;
        }
        let values = eval_arith_prog(&row, &dom.zero(), n - l)?;
        for (k, v) in values.into_iter().enumerate() {
            out.set(k + l, k, v);
        }
    }
    Ok(out)
}

/// `L1 * L2` for lower-triangular matrices, computed through one
/// operator product in `K[X]<θ>`.
pub fn tri_mul_via_ops<F: Field>(
    l1: &DenseMatrix<F>,
    l2: &DenseMatrix<F>,
) -> Result<DenseMatrix<F>> {
    if l1.rows() != l1.cols() || l2.rows() != l2.cols() || l1.rows() != l2.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} * {}x{}",
            l1.rows(),
            l1.cols(),
            l2.rows(),
            l2.cols()
        )));
    }
    if l1.rows() == 0 {
        return Err(Error::DimensionMismatch("empty matrix".into()));
    }
    check_lower_triangular(l1)?;
    check_lower_triangular(l2)?;
    let n = l1.rows() - 1;
    let a1 = triangular_to_operator(l1)?;
    let a2 = triangular_to_operator(l2)?;
    if a1.is_zero() || a2.is_zero() {
        return Ok(DenseMatrix::zeros(l1.domain(), n + 1, n + 1));
    }
    let c = mul_theta_vdh(&a1, &a2, Variant::Fast, Blocking::None, None)?;
    operator_window(&c, n)
}

/// `N * M` for arbitrary square matrices, read off the square of the
/// block lower-triangular embedding
/// `[[I,0,0],[M,I,0],[0,N,I]]^2 = [[I,0,0],[2M,I,0],[NM,2N,I]]`,
/// the squaring itself routed through [`tri_mul_via_ops`].
pub fn mat_mul_via_tri<F: Field>(
    m: &DenseMatrix<F>,
    n: &DenseMatrix<F>,
) -> Result<DenseMatrix<F>> {
    if m.rows() != m.cols() || n.rows() != n.cols() || m.rows() != n.rows() {
        return Err(Error::DimensionMismatch(format!(
            "embedding needs square equal sizes, got {}x{} and {}x{}",
            m.rows(),
            m.cols(),
            n.rows(),
            n.cols()
        )));
    }
    let s = m.rows();
    let dom = m.domain();
    let mut t = DenseMatrix::identity(dom, 3 * s);
    for i in 0..s {
        for j in 0..s {
            t.set(s + i, j, m.get(i, j).clone());
            t.set(2 * s + i, s + j, n.get(i, j).clone());
        }
    }
    let sq = tri_mul_via_ops(&t, &t)?;
    Ok(sq.submatrix((2 * s, 3 * s), (0, s)))
}
