//! Exact arithmetic for Iwasawa invariants of modules over multivariate
//! Iwasawa algebras `O[[T_1, ..., T_l]]` with coefficients in a p-adic
//! local ring `O`.
//!
//! The crate computes rank, the mu-invariant, truncated mu-invariants and
//! the l0-invariant of finitely generated modules by three independent
//! routes (symbolic, root-of-unity evaluation sums, coinvariant growth
//! scans) and cross-checks the base-change laws relating invariants over
//! `O[[G]]` and `Z_p[[G]]`.

pub mod algebra;
pub mod cyclo;
pub mod descriptor;
pub mod homcount;
pub mod invariants;
pub mod mpoly;
pub mod padic;
pub mod presentation;

mod error;
mod limits;

pub use error::{Error, Result};
pub use limits::EngineLimits;
