//! Multiplication in `K[X]<θ>` over a field of characteristic `p > 0`.
//!
//! The scheme rests on the commutation of `θ` with `X^p`: writing the
//! X-powers as `X^(v + pq)`, an operator splits into `p` families of
//! bivariate polynomials in the commuting pair `(X^p, θ)`. The product
//! reduces to the `p^2` commutative bivariate products of the families,
//! followed by `θ`-shifts to put the result back in canonical form.
//! Unlike the evaluation-interpolation schemes, this works for every
//! positive `p`, however small.

use crate::domain::Field;
use crate::ore::{OrePoly, Var};
use crate::poly::{bivar_mul, taylor_shift, DensePoly};
use crate::{Error, Result};

/// Which side the residue power `X^v` sits on in the decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `P = Σ_u X^u P_u(X^p, θ)` — no shifts needed.
    Left,
    /// `P = Σ_v P_v(X^p, θ) X^v` — rows shifted by `θ -> θ - v`.
    Right,
}

/// An operator rewritten over the commutative pair `(X^p, θ)`: one
/// bivariate grid per residue `v` of the X-power mod `p`. Grid layout:
/// `parts[v][q][j]` is the coefficient of `(X^p)^q θ^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct PCommutativeForm<F: Field> {
    domain: F,
    p: usize,
    pub side: Side,
    pub parts: Vec<Vec<Vec<F::Elem>>>,
}

impl<F: Field> PCommutativeForm<F> {
    pub fn characteristic(&self) -> usize {
        self.p
    }

    /// Back to canonical form; inverse of [`split_p`].
    pub fn recompose(&self) -> OrePoly<F> {
        let dom = self.domain;
        let mut grid: Vec<Vec<F::Elem>> = Vec::new();
        let mut put = |i: usize, j: usize, c: &F::Elem| {
            while grid.len() <= i {
                grid.push(Vec::new());
            }
            while grid[i].len() <= j {
                grid[i].push(dom.zero());
            }
            grid[i][j] = dom.add(&grid[i][j], c);
        };
        for (v, part) in self.parts.iter().enumerate() {
            for (q, row) in part.iter().enumerate() {
                // On the right side the stored row is in θ - v shifted
                // form; passing X^v to the left undoes the shift.
                let row = match self.side {
                    Side::Left => DensePoly::new(dom, row.clone()),
                    Side::Right => {
                        taylor_shift(&DensePoly::new(dom, row.clone()), &dom.from_u64(v as u64))
                    }
                };
                for (j, c) in row.coeffs().iter().enumerate() {
                    put(v + self.p * q, j, c);
                }
            }
        }
        OrePoly::new(Var::Theta, dom, grid)
    }
}

/// Splits a `θ`-operator by the residue of the X-power mod `p`. The
/// right-side split moves each `X^v` across its coefficients, which by
/// `θ^j X^v = X^v (θ+v)^j` amounts to the shift `θ -> θ - v` on every
/// row (done with the characteristic-safe Taylor shift).
pub fn split_p<F: Field>(op: &OrePoly<F>, side: Side) -> Result<PCommutativeForm<F>> {
    if op.var() != Var::Theta {
        return Err(Error::TagMismatch);
    }
    let dom = op.domain();
    let p = dom.characteristic();
    if p == 0 {
        return Err(Error::ZeroCharacteristic);
    }
    let p = p as usize;
    let mut parts = vec![Vec::new(); p];
    for (x, row) in op.grid().iter().enumerate() {
        let (v, q) = (x % p, x / p);
        let row = match side {
            Side::Left => row.clone(),
            Side::Right => {
                taylor_shift(&DensePoly::new(dom, row.clone()), &dom.from_i64(-(v as i64)))
                    .into_coeffs()
            }
        };
        while parts[v].len() <= q {
            parts[v].push(Vec::new());
        }
        parts[v][q] = row;
    }
    Ok(PCommutativeForm { domain: dom, p, side, parts })
}

/// `C = BA` in `K[X]<θ>` over characteristic `p > 0`: split both
/// factors, take the `p^2` commutative bivariate products, shift each
/// result back and recombine.
pub fn mul_theta_p<F: Field>(b: &OrePoly<F>, a: &OrePoly<F>) -> Result<OrePoly<F>> {
    if b.var() != Var::Theta || a.var() != Var::Theta {
        return Err(Error::TagMismatch);
    }
    if !b.domain().same_domain(&a.domain()) {
        return Err(Error::DomainMismatch);
    }
    let dom = b.domain();
    if dom.characteristic() == 0 {
        return Err(Error::ZeroCharacteristic);
    }
    let p = dom.characteristic() as usize;
    if b.is_zero() || a.is_zero() {
        return Ok(OrePoly::zero(Var::Theta, dom));
    }
    let bs = split_p(b, Side::Left)?;
    let asplit = split_p(a, Side::Right)?;
    let mut grid: Vec<Vec<F::Elem>> = Vec::new();
    let mut put = |i: usize, j: usize, c: &F::Elem| {
        while grid.len() <= i {
            grid.push(Vec::new());
        }
        while grid[i].len() <= j {
            grid[i].push(dom.zero());
        }
        grid[i][j] = dom.add(&grid[i][j], c);
    };
    for (u, bu) in bs.parts.iter().enumerate() {
        if bu.iter().all(|row| row.is_empty()) {
            continue;
        }
        for (v, av) in asplit.parts.iter().enumerate() {
            if av.iter().all(|row| row.is_empty()) {
                continue;
            }
            // X^u B_u(X^p,θ) A_v(X^p,θ) X^v with B_u A_v commutative.
            let cuv = bivar_mul(dom, bu, av);
            for (q, row) in cuv.into_iter().enumerate() {
                // Passing X^v to the left shifts θ by +v.
                let row = taylor_shift(&DensePoly::new(dom, row), &dom.from_u64(v as u64));
                for (j, c) in row.coeffs().iter().enumerate() {
                    put(u + v + p * q, j, c);
                }
            }
        }
    }
    Ok(OrePoly::new(Var::Theta, dom, grid))
}
