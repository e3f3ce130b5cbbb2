//! Exact arithmetic for linear ordinary differential operators.
//!
//! The crate implements canonical forms in the Weyl algebra `K[X]<∂>`
//! (relation `∂X = X∂ + 1`) and its Euler variant `K[X]<θ>` (`θ = X∂`,
//! relation `θX = X(θ+1)`), together with a family of multiplication
//! algorithms:
//!
//! * classical schemes: naive Leibniz expansion, the two iterative
//!   formulas, and Takayama's commutative-product formula ([`ore`]);
//! * evaluation-interpolation in `θ` through banded evaluation matrices,
//!   in a Vandermonde-product variant and a fast-multipoint variant
//!   ([`theta`]);
//! * evaluation-interpolation in `∂` through Laurent `θ`-operators
//!   ([`dmul`]) and the direct truncated-series scheme ([`weyl`]);
//! * a positive-characteristic algorithm built on the commutation of
//!   `θ` with `X^p` ([`charp`]);
//! * constructive reductions from matrix products to operator products
//!   ([`reductions`]).
//!
//! All coefficient arithmetic is exact: word-sized prime fields or
//! arbitrary-precision rationals ([`domain`]). Matrix products can be
//! routed through instrumented block decompositions ([`matrix`]) so that
//! the number of `n x n` block products performed by each algorithm can
//! be observed directly.

pub mod bench;
pub mod charp;
pub mod dmul;
pub mod domain;
pub mod json;
pub mod matrix;
pub mod ntt;
pub mod opcount;
pub mod ore;
pub mod poly;
pub mod reductions;
pub mod theta;
pub mod weyl;

mod laurent;
pub mod conversions {
    //! Basis conversions between the `θ` and `∂` representations,
    //! including the Laurent form with explicit valuation.
    pub use crate::laurent::{
        laurent_mul_naive, laurent_theta_to_partial, partial_to_theta, stirling_first_matrix,
        stirling_second_matrix, theta_shift, theta_shift_laurent, theta_to_partial,
        LaurentThetaPoly,
    };
}

use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("inverse of zero requested")]
    ZeroInverse,
    #[error("characteristic {p} too small: operation needs characteristic 0 or > {needed}")]
    CharacteristicTooSmall { p: u64, needed: u64 },
    #[error("operands live in different coefficient domains")]
    DomainMismatch,
    #[error("operands use different operator variables")]
    TagMismatch,
    #[error("matrix dimensions do not match: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not lower triangular")]
    NotLowerTriangular,
    #[error("matrix has nonzero entries off the announced band")]
    InconsistentBand,
    #[error("evaluation window ({m}, {n}) too small for bidegree ({d}, {r})")]
    WindowTooSmall { m: usize, n: usize, d: usize, r: usize },
    #[error("operation requires positive characteristic")]
    ZeroCharacteristic,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unknown algorithm: {0}")]
    UnknownAlgorithm(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("malformed operator document: {0}")]
    BadFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;
