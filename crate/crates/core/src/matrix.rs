//! Exact dense matrices with instrumented block multiplication.
//!
//! Besides the plain triple loop, products can be run through a block
//! decomposition with a chosen block size `n`, optionally skipping
//! structurally zero blocks (driven by band metadata when present) and
//! optionally routing 2x2 block grids through Strassen's seven-product
//! scheme. A [`BlockCounter`] tallies the `n x n` block products that
//! were actually performed, which is how the operator algorithms report
//! their block counts.
//!
//! Block grids use a floor convention: a dimension `kn + t` with
//! `0 <= t < n` is cut into `k` blocks, the last of size `n + t`. This
//! is what makes shapes like `(2n+1) x (3n+1)` count as a clean `2 x 3`
//! grid.

use crate::domain::Field;
use crate::{Error, Result};

/// One nonzero diagonal of a banded matrix: entries `(i, i + offset)`
/// for `i` in `first_row .. first_row + len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandDiagonal {
    pub offset: isize,
    pub first_row: usize,
    pub len: usize,
}

/// Optional structural annotation: every entry off the listed diagonals
/// is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BandMetadata {
    pub diagonals: Vec<BandDiagonal>,
}

impl BandMetadata {
    /// True when some listed diagonal meets the sub-block
    /// `rows x cols` (half-open ranges).
    fn intersects(&self, rows: (usize, usize), cols: (usize, usize)) -> bool {
        self.diagonals.iter().any(|d| {
            let r0 = rows.0.max(d.first_row);
            let r1 = rows.1.min(d.first_row + d.len);
            if r0 >= r1 {
                return false;
            }
            // entry column is i + offset; intersect with the col range
            let c0 = (cols.0 as isize - d.offset).max(r0 as isize);
            let c1 = (cols.1 as isize - d.offset).min(r1 as isize);
            c0 < c1
        })
    }
}

#[derive(Clone, Debug)]
pub struct DenseMatrix<F: Field> {
    domain: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
    band: Option<BandMetadata>,
}

/// Equality is entrywise; the optional band annotation is a performance
/// hint and does not take part in comparisons.
impl<F: Field> PartialEq for DenseMatrix<F> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.domain.same_domain(&other.domain)
            && self.data == other.data
    }
}

impl<F: Field> DenseMatrix<F> {
    pub fn new(domain: F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Self {
        assert_eq!(data.len(), rows * cols, "element count must be rows * cols");
        DenseMatrix { domain, rows, cols, data, band: None }
    }

    pub fn zeros(domain: F, rows: usize, cols: usize) -> Self {
        DenseMatrix { domain, rows, cols, data: vec![domain.zero(); rows * cols], band: None }
    }

    pub fn identity(domain: F, n: usize) -> Self {
        let mut m = Self::zeros(domain, n, n);
        for i in 0..n {
            *m.get_mut(i, i) = domain.one();
        }
        m
    }

    pub fn from_fn(domain: F, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::new(domain, rows, cols, data)
    }

    pub fn domain(&self) -> F {
        self.domain
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut F::Elem {
        &mut self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn band(&self) -> Option<&BandMetadata> {
        self.band.as_ref()
    }

    /// Attaches band metadata after checking that every entry off the
    /// listed diagonals is in fact zero.
    pub fn with_band(mut self, band: BandMetadata) -> Result<Self> {
        for d in &band.diagonals {
            let inside = |i: usize| -> bool {
                let j = i as isize + d.offset;
                i < self.rows && j >= 0 && (j as usize) < self.cols
            };
            if d.len > 0 && !(inside(d.first_row) && inside(d.first_row + d.len - 1)) {
                return Err(Error::InconsistentBand);
            }
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !self.domain.is_zero(self.get(i, j)) && !band.intersects((i, i + 1), (j, j + 1)) {
                    return Err(Error::InconsistentBand);
                }
            }
        }
        self.band = Some(band);
        Ok(self)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let d = self.domain;
        let data = self.data.iter().zip(&other.data).map(|(x, y)| d.add(x, y)).collect();
        Ok(DenseMatrix { domain: d, rows: self.rows, cols: self.cols, data, band: None })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} - {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let d = self.domain;
        let data = self.data.iter().zip(&other.data).map(|(x, y)| d.sub(x, y)).collect();
        Ok(DenseMatrix { domain: d, rows: self.rows, cols: self.cols, data, band: None })
    }

    /// Copy of the sub-block given by half-open row/col ranges.
    pub fn submatrix(&self, rows: (usize, usize), cols: (usize, usize)) -> Self {
        let (r0, r1) = rows;
        let (c0, c1) = cols;
        assert!(r0 <= r1 && r1 <= self.rows && c0 <= c1 && c1 <= self.cols);
        let mut data = Vec::with_capacity((r1 - r0) * (c1 - c0));
        for i in r0..r1 {
            data.extend(self.data[i * self.cols + c0..i * self.cols + c1].iter().cloned());
        }
        DenseMatrix { domain: self.domain, rows: r1 - r0, cols: c1 - c0, data, band: None }
    }

    /// Adds `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn add_at(&mut self, block: &Self, r0: usize, c0: usize) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        let d = self.domain;
        for i in 0..block.rows {
            for j in 0..block.cols {
                let v = d.add(self.get(r0 + i, c0 + j), block.get(i, j));
                self.set(r0 + i, c0 + j, v);
            }
        }
    }

    pub fn transpose(&self) -> Self {
        DenseMatrix::from_fn(self.domain, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    fn block_is_zero(&self, rows: (usize, usize), cols: (usize, usize)) -> bool {
        if let Some(band) = &self.band {
            return !band.intersects(rows, cols);
        }
        for i in rows.0..rows.1 {
            for j in cols.0..cols.1 {
                if !self.domain.is_zero(self.get(i, j)) {
                    return false;
                }
            }
        }
        true
    }
}

/// Tally of `n x n` block products over one multiplication.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BlockCounter {
    pub block_size: usize,
    /// Block products done with the naive kernel.
    pub naive: u64,
    /// Block products done inside Strassen steps.
    pub strassen: u64,
    /// Block pairs skipped because one side is structurally zero.
    pub skipped: u64,
}

impl BlockCounter {
    pub fn new(block_size: usize) -> Self {
        BlockCounter { block_size, ..Default::default() }
    }

    pub fn performed(&self) -> u64 {
        self.naive + self.strassen
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Naive,
    /// Block decomposition with the given block size; every block pair
    /// is multiplied.
    Blocked(usize),
    /// Element-level Strassen recursion, bottoming out into the naive
    /// kernel below the given threshold.
    Strassen(usize),
    /// Block decomposition that skips structurally zero block pairs.
    BandedAware(usize),
}

/// Default cutoff for the element-level Strassen recursion.
pub const STRASSEN_THRESHOLD: usize = 64;

/// Half-open block ranges for one dimension under the floor convention.
fn grid_ranges(dim: usize, n: usize) -> Vec<(usize, usize)> {
    assert!(n > 0, "block size must be positive");
    let k = (dim / n).max(1);
    let mut out = Vec::with_capacity(k);
    for b in 0..k {
        let lo = b * n;
        let hi = if b + 1 == k { dim } else { lo + n };
        out.push((lo, hi));
    }
    out
}

fn mul_naive_kernel<F: Field>(a: &DenseMatrix<F>, b: &DenseMatrix<F>) -> DenseMatrix<F> {
    let d = a.domain;
    let mut out = DenseMatrix::zeros(d, a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.get(i, k);
            if d.is_zero(aik) {
                continue;
            }
            for j in 0..b.cols {
                let v = d.add(out.get(i, j), &d.mul(aik, b.get(k, j)));
                out.set(i, j, v);
            }
        }
    }
    out
}

/// Exact product `A * B` under the chosen strategy. All strategies
/// return the same matrix; `counter` (when supplied) tallies the block
/// products performed.
pub fn mat_mul<F: Field>(
    a: &DenseMatrix<F>,
    b: &DenseMatrix<F>,
    strategy: Strategy,
    mut counter: Option<&mut BlockCounter>,
) -> Result<DenseMatrix<F>> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} * {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    if !a.domain.same_domain(&b.domain) {
        return Err(Error::DomainMismatch);
    }
    match strategy {
        Strategy::Naive => Ok(mul_naive_kernel(a, b)),
        Strategy::Blocked(n) => Ok(mul_blocked(a, b, n, false, counter.as_deref_mut())),
        Strategy::BandedAware(n) => Ok(mul_blocked(a, b, n, true, counter.as_deref_mut())),
        Strategy::Strassen(th) => Ok(mul_strassen(a, b, th.max(2))),
    }
}

fn mul_blocked<F: Field>(
    a: &DenseMatrix<F>,
    b: &DenseMatrix<F>,
    n: usize,
    skip_zeros: bool,
    mut counter: Option<&mut BlockCounter>,
) -> DenseMatrix<F> {
    let ri = grid_ranges(a.rows, n);
    let rk = grid_ranges(a.cols, n);
    let rj = grid_ranges(b.cols, n);
    let mut out = DenseMatrix::zeros(a.domain, a.rows, b.cols);
    for &(i0, i1) in &ri {
        for &(j0, j1) in &rj {
            for &(k0, k1) in &rk {
                if skip_zeros
                    && (a.block_is_zero((i0, i1), (k0, k1)) || b.block_is_zero((k0, k1), (j0, j1)))
                {
                    if let Some(c) = counter.as_deref_mut() {
                        c.skipped += 1;
                    }
                    continue;
                }
                let ab = a.submatrix((i0, i1), (k0, k1));
                let bb = b.submatrix((k0, k1), (j0, j1));
                let prod = mul_naive_kernel(&ab, &bb);
                out.add_at(&prod, i0, j0);
                if let Some(c) = counter.as_deref_mut() {
                    c.naive += 1;
                }
            }
        }
    }
    out
}

fn mul_strassen<F: Field>(a: &DenseMatrix<F>, b: &DenseMatrix<F>, th: usize) -> DenseMatrix<F> {
    let (m, n, p) = (a.rows, a.cols, b.cols);
    if m.min(n).min(p) < th {
        return mul_naive_kernel(a, b);
    }
    // Pad each dimension to even, recurse on the 2x2 split.
    let (m2, n2, p2) = (m.next_multiple_of(2), n.next_multiple_of(2), p.next_multiple_of(2));
    let mut ap = DenseMatrix::zeros(a.domain, m2, n2);
    ap.add_at(a, 0, 0);
    let mut bp = DenseMatrix::zeros(b.domain, n2, p2);
    bp.add_at(b, 0, 0);
    let (hm, hn, hp) = (m2 / 2, n2 / 2, p2 / 2);
    let ablk = |i: usize, k: usize| ap.submatrix((i * hm, (i + 1) * hm), (k * hn, (k + 1) * hn));
    let bblk = |k: usize, j: usize| bp.submatrix((k * hn, (k + 1) * hn), (j * hp, (j + 1) * hp));
    let a11 = ablk(0, 0);
    let a12 = ablk(0, 1);
    let a21 = ablk(1, 0);
    let a22 = ablk(1, 1);
    let b11 = bblk(0, 0);
    let b12 = bblk(0, 1);
    let b21 = bblk(1, 0);
    let b22 = bblk(1, 1);
    let rec = |x: &DenseMatrix<F>, y: &DenseMatrix<F>| mul_strassen(x, y, th);
    let m1 = rec(&a11.add(&a22).unwrap(), &b11.add(&b22).unwrap());
    let m2_ = rec(&a21.add(&a22).unwrap(), &b11);
    let m3 = rec(&a11, &b12.sub(&b22).unwrap());
    let m4 = rec(&a22, &b21.sub(&b11).unwrap());
    let m5 = rec(&a11.add(&a12).unwrap(), &b22);
    let m6 = rec(&a21.sub(&a11).unwrap(), &b11.add(&b12).unwrap());
    let m7 = rec(&a12.sub(&a22).unwrap(), &b21.add(&b22).unwrap());
    let c11 = m1.add(&m4).unwrap().sub(&m5).unwrap().add(&m7).unwrap();
    let c12 = m3.add(&m5).unwrap();
    let c21 = m2_.add(&m4).unwrap();
    let c22 = m1.sub(&m2_).unwrap().add(&m3).unwrap().add(&m6).unwrap();
    let mut full = DenseMatrix::zeros(a.domain, m2, p2);
    full.add_at(&c11, 0, 0);
    full.add_at(&c12, 0, hp);
    full.add_at(&c21, hm, 0);
    full.add_at(&c22, hm, hp);
    full.submatrix((0, m), (0, p))
}

/// One Strassen step on 2x2 grids of equal-size square blocks: the
/// product grid from exactly seven block products (tallied as
/// `strassen` on the counter).
pub fn strassen_2x2<F: Field>(
    a: &[[DenseMatrix<F>; 2]; 2],
    b: &[[DenseMatrix<F>; 2]; 2],
    mut counter: Option<&mut BlockCounter>,
) -> Result<[[DenseMatrix<F>; 2]; 2]> {
    let n = a[0][0].rows;
    for grid in [a, b] {
        for row in grid {
            for blk in row {
                if blk.rows != n || blk.cols != n {
                    return Err(Error::DimensionMismatch(format!(
                        "strassen_2x2 expects equal {n}x{n} blocks, found {}x{}",
                        blk.rows, blk.cols
                    )));
                }
            }
        }
    }
    let mut mul = |x: &DenseMatrix<F>, y: &DenseMatrix<F>| -> DenseMatrix<F> {
        if let Some(c) = counter.as_deref_mut() {
            c.strassen += 1;
        }
        mul_naive_kernel(x, y)
    };
    let m1 = mul(&a[0][0].add(&a[1][1])?, &b[0][0].add(&b[1][1])?);
    let m2 = mul(&a[1][0].add(&a[1][1])?, &b[0][0]);
    let m3 = mul(&a[0][0], &b[0][1].sub(&b[1][1])?);
    let m4 = mul(&a[1][1], &b[1][0].sub(&b[0][0])?);
    let m5 = mul(&a[0][0].add(&a[0][1])?, &b[1][1]);
    let m6 = mul(&a[1][0].sub(&a[0][0])?, &b[0][0].add(&b[0][1])?);
    let m7 = mul(&a[0][1].sub(&a[1][1])?, &b[1][0].add(&b[1][1])?);
    let c11 = m1.add(&m4)?.sub(&m5)?.add(&m7)?;
    let c12 = m3.add(&m5)?;
    let c21 = m2.add(&m4)?;
    let c22 = m1.sub(&m2)?.add(&m3)?.add(&m6)?;
    Ok([[c11, c12], [c21, c22]])
}

/// Pads both operands square and even, runs one [`strassen_2x2`] step
/// (seven block products), and trims. Used where an algorithm's
/// accounting calls for a single Strassen level on a 2x2 block grid.
pub fn strassen_one_level<F: Field>(
    a: &DenseMatrix<F>,
    b: &DenseMatrix<F>,
    counter: Option<&mut BlockCounter>,
) -> Result<DenseMatrix<F>> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} * {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let m = a.rows.max(a.cols).max(b.cols).next_multiple_of(2);
    let h = m / 2;
    let mut ap = DenseMatrix::zeros(a.domain, m, m);
    ap.add_at(a, 0, 0);
    let mut bp = DenseMatrix::zeros(b.domain, m, m);
    bp.add_at(b, 0, 0);
    let blk = |mt: &DenseMatrix<F>, i: usize, j: usize| {
        mt.submatrix((i * h, (i + 1) * h), (j * h, (j + 1) * h))
    };
    let ag = [[blk(&ap, 0, 0), blk(&ap, 0, 1)], [blk(&ap, 1, 0), blk(&ap, 1, 1)]];
    let bg = [[blk(&bp, 0, 0), blk(&bp, 0, 1)], [blk(&bp, 1, 0), blk(&bp, 1, 1)]];
    let cg = strassen_2x2(&ag, &bg, counter)?;
    let mut full = DenseMatrix::zeros(a.domain, m, m);
    full.add_at(&cg[0][0], 0, 0);
    full.add_at(&cg[0][1], 0, h);
    full.add_at(&cg[1][0], h, 0);
    full.add_at(&cg[1][1], h, h);
    Ok(full.submatrix((0, a.rows), (0, b.cols)))
}
