//! Certified verification pipeline for the parametrized cubic Thue equation
//!
//! ```text
//! X (X - F_n Y) (X - 2^n Y) - Y^3 = +-1
//! ```
//!
//! where `F_n` is the n-th Fibonacci number. For every n >= 3 the only
//! integer solutions are the trivial ones read off from the three linear
//! factors. The crate re-runs the complete proof machinery: certified root
//! isolation for the defining cubic, asymptotic envelopes for the logarithms
//! of the fundamental units, a linear-forms-in-logs bound that caps n
//! absolutely, lattice reduction that collapses the cap to a small range, and
//! per-n reduction plus exhaustive search that finishes the job.
//!
//! All analytic steps run in ball arithmetic over dyadic rationals: every
//! comparison that matters is taken on certified enclosures, and anything
//! ambiguous triggers a retry at doubled precision instead of a guess.

// Index loops are kept where they mirror the matrix notation of the
// underlying linear algebra; iterator rewrites would obscure it.
#![allow(clippy::needless_range_loop)]

pub mod bounds;
pub mod cli;
pub mod error;
pub mod family;
pub mod lattice;
pub mod numerics;
pub mod reduction;
pub mod report;
pub mod search;
pub(crate) mod serde_util;

pub use error::{Error, Result};
