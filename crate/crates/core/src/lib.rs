//! Real and complex induced operator norms between weighted `l_p` spaces.
//!
//! A real matrix acting on the complexification of `R^n` has two operator
//! norms: the supremum of `||Ax||_q / ||x||_p` over real vectors, and the
//! same supremum over complex vectors. This crate computes both (closed
//! forms where available, multistart projected ascent in general, and a
//! brute-force sphere oracle at small dimension) and ships the machinery
//! to check when they coincide, how far apart they can be, and how a real
//! norm extends to the complexification without changing operator norms.
//!
//! The crate is `no_std` (with `alloc`); all floating-point transcendentals
//! go through `libm` so results are identical across platforms.

#![cfg_attr(not(test), no_std)]
// Guards written as `!(x > 0.0)` are deliberate: unlike `x <= 0.0`, they also
// reject NaN, which must never slip past a validation check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bounds;
pub mod counterexample;
pub mod cvector;
pub mod engine;
pub mod equality;
pub mod error;
pub mod exponent;
pub mod extension;
pub mod linalg;
pub mod measure;
pub mod norm;
pub mod pnorm;
pub mod quadrature;
mod sampling;

pub use cvector::CVector;
pub use error::{Error, Result};
pub use exponent::{dual_exponent, Exponent};
pub use measure::DiscreteMeasure;
