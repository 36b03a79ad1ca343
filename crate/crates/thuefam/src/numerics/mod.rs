//! Exact and certified arithmetic: dyadic rationals, ball arithmetic with
//! guaranteed enclosures, proven constants, and interval-certified continued
//! fractions.

pub mod ball;
pub mod cf;
pub mod constants;
pub mod dyadic;

pub use ball::PrecReal;
pub use cf::{cf_expand, cf_expand_fraction, cf_expand_with_cap, CfStop, ContinuedFraction};
pub use constants::{real_const, Constant};
pub use dyadic::{Dyadic, Round};
