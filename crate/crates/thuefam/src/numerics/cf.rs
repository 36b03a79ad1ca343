//! Certified continued fraction expansion of an enclosed real.
//!
//! The expansion runs a simultaneous Euclid on the two interval endpoints,
//! kept as raw integer fractions, and emits a partial quotient only while
//! both endpoints agree on it. Every emitted quotient, and hence every
//! convergent, is therefore a true prefix of the continued fraction of every
//! real inside the interval.

use super::ball::PrecReal;
use super::dyadic::Dyadic;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Why the expansion stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfStop {
    /// The enclosed value is rational and fully expanded.
    Complete,
    /// Hit the requested term limit.
    MaxTerms,
    /// The endpoints disagree on the next quotient; more input precision
    /// is needed to continue.
    Precision,
    /// The last convergent denominator exceeded the requested cap.
    DenominatorCap,
}

#[derive(Clone, Debug)]
pub struct ContinuedFraction {
    pub partial_quotients: Vec<BigInt>,
    /// Convergents p_i / q_i in lowest terms, q_i > 0, aligned with
    /// `partial_quotients`.
    pub convergents: Vec<(BigInt, BigInt)>,
    pub reason: CfStop,
}

/// Expands the continued fraction of every real in `x`, up to `max_terms`.
pub fn cf_expand(x: &PrecReal, max_terms: usize) -> ContinuedFraction {
    cf_expand_with_cap(x, max_terms, None)
}

/// Like `cf_expand`, additionally stopping once a convergent denominator
/// exceeds `q_cap`.
pub fn cf_expand_with_cap(
    x: &PrecReal,
    max_terms: usize,
    q_cap: Option<&BigInt>,
) -> ContinuedFraction {
    let (n_lo, d_lo) = dyadic_fraction(&x.lo());
    let (n_hi, d_hi) = dyadic_fraction(&x.hi());
    cf_core(n_lo, d_lo, n_hi, d_hi, max_terms, q_cap)
}

/// Expands an exact rational.
pub fn cf_expand_fraction(num: &BigInt, den: &BigInt, max_terms: usize) -> ContinuedFraction {
    assert!(den.is_positive(), "denominator must be positive");
    cf_core(
        num.clone(),
        den.clone(),
        num.clone(),
        den.clone(),
        max_terms,
        None,
    )
}

fn dyadic_fraction(d: &Dyadic) -> (BigInt, BigInt) {
    let e = d.exponent();
    if e >= 0 {
        (d.mantissa() << e as u64, BigInt::one())
    } else {
        (d.mantissa().clone(), BigInt::one() << (-e) as u64)
    }
}

fn cf_core(
    mut n_lo: BigInt,
    mut d_lo: BigInt,
    mut n_hi: BigInt,
    mut d_hi: BigInt,
    max_terms: usize,
    q_cap: Option<&BigInt>,
) -> ContinuedFraction {
    let mut quotients = Vec::new();
    let mut convergents: Vec<(BigInt, BigInt)> = Vec::new();
    // convergent recurrence seeds: p_{-2}/q_{-2} = 0/1, p_{-1}/q_{-1} = 1/0
    let (mut p_prev, mut p_curr) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q_curr) = (BigInt::one(), BigInt::zero());
    let mut reason = CfStop::MaxTerms;

    while quotients.len() < max_terms {
        let a_lo = n_lo.div_floor(&d_lo);
        let a_hi = n_hi.div_floor(&d_hi);
        if a_lo != a_hi {
            reason = CfStop::Precision;
            break;
        }
        let a = a_lo;
        let r_lo = &n_lo - &a * &d_lo;
        let r_hi = &n_hi - &a * &d_hi;

        let p_next = &a * &p_curr + &p_prev;
        let q_next = &a * &q_curr + &q_prev;
        p_prev = std::mem::replace(&mut p_curr, p_next);
        q_prev = std::mem::replace(&mut q_curr, q_next);
        quotients.push(a);
        convergents.push((p_curr.clone(), q_curr.clone()));

        if r_lo.is_zero() && r_hi.is_zero() {
            reason = CfStop::Complete;
            break;
        }
        if r_lo.is_zero() || r_hi.is_zero() {
            // one endpoint is exactly the quotient: the true value may or may
            // not terminate here, so nothing further can be certified
            reason = CfStop::Precision;
            break;
        }
        if let Some(cap) = q_cap {
            if &q_curr > cap {
                reason = CfStop::DenominatorCap;
                break;
            }
        }
        // x <- 1/(x - a): [r_lo/d_lo, r_hi/d_hi] inverts to [d_hi/r_hi, d_lo/r_lo]
        n_lo = std::mem::replace(&mut d_hi, r_lo);
        n_hi = std::mem::replace(&mut d_lo, r_hi);
    }

    ContinuedFraction {
        partial_quotients: quotients,
        convergents,
        reason,
    }
}
