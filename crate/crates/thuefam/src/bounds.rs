//! Closed-form bound arithmetic: the lower bound for linear forms in three
//! logarithms, the constants derived from it, the upper and lower bounds on
//! log |y|, and the absolute crossover bound on n.
//!
//! These are coarse envelopes with percent-level tolerances, so they run in
//! double precision; where the sound direction matters the result is nudged
//! by a few ulps the safe way.

use crate::error::{Error, Result};

/// Inputs to the three-logarithm lower bound: field degree, the three height
/// parameters, and the coefficient bound.
#[derive(Clone, Copy, Debug)]
pub struct MatveevInput {
    pub degree: u32,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub b: f64,
}

impl MatveevInput {
    pub fn new(degree: u32, a1: f64, a2: f64, a3: f64, b: f64) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Usage("field degree must be positive".into()));
        }
        for (name, a) in [("A1", a1), ("A2", a2), ("A3", a3)] {
            if !a.is_finite() || a < 0.16 {
                return Err(Error::Usage(format!(
                    "{name} = {a} violates the height side condition (>= 0.16)"
                )));
            }
        }
        if !b.is_finite() || b < 1.0 {
            return Err(Error::Usage(format!(
                "coefficient bound B = {b} must be at least 1"
            )));
        }
        Ok(MatveevInput {
            degree,
            a1,
            a2,
            a3,
            b,
        })
    }
}

/// The portion of the lower bound that does not involve B:
/// 1.4 * 10^11 * D^2 * log(e D) * A1 A2 A3.
pub fn matveev_coefficient(degree: u32, a1: f64, a2: f64, a3: f64) -> f64 {
    let d = degree as f64;
    1.4e11 * d * d * (d.ln() + 1.0) * a1 * a2 * a3
}

/// Lower bound for log |Lambda| of a non-vanishing linear form in three
/// logarithms: -1.4 * 10^11 * D^2 * log(e D) * log(e B) * A1 A2 A3.
pub fn matveev_lower_bound(inp: &MatveevInput) -> f64 {
    -(matveev_coefficient(inp.degree, inp.a1, inp.a2, inp.a3) * (inp.b.ln() + 1.0))
}

/// Resolves `x < c (a + log x)` into the closed bound `x < 2 c (a + log c)`.
pub fn resolve_log_bound(c: f64, a: f64) -> Result<f64> {
    if !c.is_finite() || !a.is_finite() || c < 1.0 || a < 2.0 {
        return Err(Error::Usage(format!(
            "resolve_log_bound needs c >= 1 and a >= 2, got c = {c}, a = {a}"
        )));
    }
    Ok(up(2.0 * c * (a + c.ln())))
}

/// Upper bound on log |y| for a hypothetical non-trivial solution:
/// 3.66 * 10^16 * n^3.
pub fn upper_bound_logy(n: u32) -> Result<f64> {
    if n < 29 {
        return Err(Error::Usage(format!(
            "the log |y| upper bound is proven only for n >= 29, got {n}"
        )));
    }
    let nf = n as f64;
    Ok(up(3.66e16 * nf * nf * nf))
}

/// Upper bound on the unit exponents: max(|u1|, |u2|) <= 2 log|y| / n + 2.
pub fn bound_u(n: u32, log_y: f64) -> f64 {
    debug_assert!(n >= 29 && log_y >= 0.0);
    up(2.0 * log_y / n as f64 + 2.0)
}

/// Lower bound on log |y|, active only beyond the sweep range: 1.2^n for
/// type 3, exp(n / (5.7 * 10^12) - log n - 4) for types 1 and 2. Saturates
/// to infinity in double precision; the crossover search below therefore
/// works in log space.
pub fn lower_bound_logy(n: u64, j: u8) -> Result<f64> {
    if n <= 1000 {
        return Err(Error::Usage(format!(
            "the log |y| lower bounds are proven only for n > 1000, got {n}"
        )));
    }
    match j {
        3 => Ok(down(log_lower_j3(n)).exp()),
        1 | 2 => Ok(down(log_lower_j12(n)).exp()),
        other => Err(Error::Usage(format!("solution type must be 1..3, got {other}"))),
    }
}

/// log of the type-3 lower bound: n log 1.2.
fn log_lower_j3(n: u64) -> f64 {
    n as f64 * 1.2f64.ln()
}

/// log of the type-1/2 lower bound: n / 5.7e12 - log n - 4.
fn log_lower_j12(n: u64) -> f64 {
    let nf = n as f64;
    nf / 5.7e12 - nf.ln() - 4.0
}

/// log of the upper bound, defined for any n in the crossover search.
fn log_upper(n: u64) -> f64 {
    (3.66e16f64).ln() + 3.0 * (n as f64).ln()
}

/// Least n > 1000 where each lower bound on log |y| overtakes the upper
/// bound, returned as (type 3 crossover, type 1/2 crossover). Beyond these
/// no solution of the respective type can exist.
pub fn absolute_bound_n() -> (u64, u64) {
    let n_j3 = least_crossing(|n| log_lower_j3(n) > log_upper(n));
    let n_j12 = least_crossing(|n| log_lower_j12(n) > log_upper(n));
    (n_j3, n_j12)
}

/// Exponential gallop followed by binary search for the least n > 1000
/// satisfying the predicate. Callers pass predicates that are false at 1001
/// or satisfy "once true, stays true" beyond their unique crossing.
fn least_crossing(pred: impl Fn(u64) -> bool) -> u64 {
    let mut lo = 1001u64;
    if pred(lo) {
        return lo;
    }
    let mut hi = lo;
    loop {
        hi = hi.saturating_mul(2);
        if pred(hi) {
            break;
        }
        assert!(hi < u64::MAX / 2, "no crossover found below 2^63");
    }
    // invariant: !pred(lo) && pred(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// A few ulps upward: keeps upper bounds sound under double rounding.
fn up(x: f64) -> f64 {
    x.next_up().next_up()
}

/// A few ulps downward for lower bounds.
fn down(x: f64) -> f64 {
    x.next_down().next_down()
}
