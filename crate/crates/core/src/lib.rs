//! Exact symbolic engine for polynomial differential operators.
//!
//! Operators live in the Weyl algebra on `m` position variables `x1..xm` and
//! derivatives `d1..dm`, optionally localized at some positions so that
//! negative powers such as `x1^-2` are allowed. Every operator is kept in a
//! unique normal-ordered form (positions left of derivatives), which makes
//! operator equality a structural comparison.
//!
//! On top of the engine the crate builds concrete realizations and the
//! identities they satisfy:
//!
//! - [`liealg`]: oscillator realization of `o(2n)`, its quadratic Casimir and
//!   the metaplectic `su(1,1)` copies;
//! - [`racah`]: commutant generators of `o(2)^n` and the generalized Racah
//!   algebra relations they obey;
//! - [`howe`]: pair-coupled `su(1,1)` realizations and their Casimirs;
//! - [`reduction`]: the reduced realization on `n` localized variables with
//!   free parameters `a1..an`, and the conserved quantities of the generic
//!   superintegrable model on the sphere;
//! - [`oracle`]: point-evaluation cross-checks that do not go through the
//!   normal-ordering product.
//!
//! The crate is `no_std` and only needs `alloc`. Parallel execution and
//! wall-clock timing are supplied from outside through [`report::Runner`].
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod coeff;
pub mod expr;
pub mod howe;
pub mod liealg;
pub mod oracle;
pub mod racah;
pub mod reduction;
pub mod report;
mod text;
pub mod weyl;

use alloc::string::String;

pub use coeff::{ParamPoly, Rational};
pub use expr::Expr;
pub use report::{Check, Identity, RelationId, RelationReport, ReportEntry, Runner, Serial};
pub use weyl::{AlgebraSignature, LaurentPoly, Monomial, Operator};

/// Errors raised by constructors and checked arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("parameter arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("operands belong to different algebra signatures")]
    SignatureMismatch,
    #[error("negative power of non-localized variable x{var}")]
    NegativeExponent { var: usize },
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("repeated index {0}")]
    RepeatedIndex(usize),
    #[error("invalid context: {0}")]
    InvalidContext(&'static str),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

pub(crate) fn check_index(index: usize, max: usize) -> Result<()> {
    if index == 0 || index > max {
        Err(Error::IndexOutOfRange { index, max })
    } else {
        Ok(())
    }
}
