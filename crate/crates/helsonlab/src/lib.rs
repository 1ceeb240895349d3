//! A numerical laboratory for Hankel and Helson matrices.
//!
//! A Hankel matrix has entries depending only on the *sum* of its (0-based)
//! coordinates; a Helson matrix has entries depending only on the *product*
//! of its (1-based) coordinates. This crate builds finite truncations of
//! both, computes their singular values and Schatten norms, applies the
//! averaging and weighted averaging projections onto each class, and runs
//! the tensor blow-up experiment that certifies a weight-independent lower
//! bound `1 + delta_q > 1` for the S_q -> S_q norm of every multiplicative
//! weighted averaging projection onto Helson matrices (q != 2).
//!
//! Module map:
//!
//! - [`arith`] — exact integer machinery: factorization, divisor pairs,
//!   generalized binomial/divisor functions, multiplicative pair functions.
//! - [`schatten`] — matrix truncations, singular values, Schatten norms,
//!   trace pairing, Kronecker products, prime restriction, multiplicative
//!   assembly and the dyadic embedding.
//! - [`projections`] — the four averaging projections and the weight
//!   families behind them.
//! - [`bounds`] — the 3x3 test matrices, closed-form spectra, the branch
//!   equations for the uniform bound, and the blow-up experiment.
//! - [`io`] — the line-oriented matrix and symbol file formats.
//! - [`verify`] — the runnable invariant suite behind `helsonlab verify`.
//! - [`cli`] — batch commands producing CSV/JSON reports.

pub mod arith;
pub mod bounds;
pub mod cli;
pub mod error;
pub mod io;
pub mod projections;
pub mod schatten;
pub mod verify;

pub use error::{Error, Result};
