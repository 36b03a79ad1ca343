//! Certified reduction of the unit-exponent bound, per solution type.
//!
//! A hypothetical solution of type j satisfies
//!
//! ```text
//! |log gamma0 + u1 log gamma1 + u2 log gamma2| <= c_rhs / y^3
//! ```
//!
//! with integers |u1|, |u2| bounded by M and gammas built from the three
//! roots. Dividing by log gamma2 turns this into an inhomogeneous rational
//! approximation statement for theta0 = log gamma0 / log gamma2 against
//! theta1 = log gamma1 / log gamma2, which a Davenport-style lemma converts
//! into an explicit bound on y: for any convergent denominator q > 6M of
//! theta1 with eps = ||q theta0|| - M ||q theta1|| > 0,
//!
//! ```text
//! y^3 <= q c_rhs / (eps |log gamma2|).
//! ```
//!
//! All quantities are certified: the gammas are interval balls from root
//! enclosures, the continued fraction of theta1 is a proven common prefix
//! for every real in its ball, and eps is bounded below in exact dyadic
//! arithmetic. The few remaining y below the bound are enumerated through
//! the continued fraction of the root itself and checked exactly.

use crate::error::{Error, Result};
use crate::family::{isolate_roots, FamilyInstance};
use crate::numerics::{cf_expand, cf_expand_with_cap, CfStop, Dyadic, PrecReal};
use crate::search::{check_solution, SolutionRecord};
use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// The certified data of one linear form: indices, the three coefficients
/// as balls of their logarithms, and the exact side constants.
#[derive(Clone, Debug)]
pub struct LinearFormSpec {
    pub n: u32,
    /// Solution type: the index of the root the solution approaches.
    pub j: u8,
    /// The remaining two root indices, k < l.
    pub k: u8,
    pub l: u8,
    pub log_gamma0: PrecReal,
    pub log_gamma1: PrecReal,
    pub log_gamma2: PrecReal,
    /// Exact bound M on max(|u1|, |u2|): 7.32 * 10^16 n^2 + 2.
    pub m_bound: BigInt,
    /// Exact right-hand constant c_rhs = 80 / 5^n as numerator/denominator.
    pub c_rhs_num: BigInt,
    pub c_rhs_den: BigInt,
    /// Exponent of y on the right-hand side.
    pub k_exp: u32,
}

/// Successful reduction of one (n, j) case.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ReductionCertificate {
    pub n: u32,
    pub j: u8,
    /// The certifying convergent p/q of theta1.
    #[serde(with = "crate::serde_util::bigint_str")]
    pub q: BigInt,
    #[serde(with = "crate::serde_util::bigint_str")]
    pub p: BigInt,
    /// Certified lower bound on eps, scientific notation (can be far below
    /// the double-precision underflow threshold).
    pub epsilon: String,
    /// Inclusive bound: any non-trivial solution of this type has y <= y_bound.
    #[serde(with = "crate::serde_util::bigint_str")]
    pub y_bound: BigInt,
    /// Convergents examined beyond the q > 6M filter.
    pub convergents_checked: u32,
    /// Exact solutions with 2 <= y <= y_bound (expected empty for n >= 29).
    pub solutions_found: Vec<SolutionRecord>,
}

/// Tuning knobs for the reduction ladder.
#[derive(Clone, Debug)]
pub struct ReduceOptions {
    /// Starting working precision in bits; None picks a per-case heuristic.
    pub start_prec: Option<u32>,
    /// Precision-doubling cap in bits.
    pub prec_cap: u32,
    /// Maximum continued fraction terms of theta1 to examine.
    pub max_convergents: usize,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions {
            start_prec: None,
            prec_cap: 1 << 20,
            max_convergents: 10_000,
        }
    }
}

/// Working precision that usually certifies on the first attempt. The type-3
/// form hides a near-integer relation theta0 ~ theta1 + 1 whose defect decays
/// like 16^-n phi^n, so its scan runs to far larger q and needs more bits.
fn default_start_prec(n: u32, j: u8) -> u32 {
    match j {
        3 => 512 + n * 11 / 2,
        _ => 512 + n * 7 / 2,
    }
}

fn validate_case(n: u32, j: u8) -> Result<()> {
    if n < 29 {
        return Err(Error::Usage(format!(
            "reduction applies to the asymptotic range n >= 29, got {n}"
        )));
    }
    if !(1..=3).contains(&j) {
        return Err(Error::Usage(format!("solution type must be 1..3, got {j}")));
    }
    Ok(())
}

/// Builds the certified linear-form data for one case at the given working
/// precision. The three coefficients are
///
/// ```text
/// gamma0 = |a_j - a_k| / |a_j - a_l|,
/// gamma1 = |a_l / a_k|,            (units eta1 = alpha - 0)
/// gamma2 = |(a_l - F) / (a_k - F)| (units eta2 = alpha - F_n)
/// ```
pub fn build_linear_form(n: u32, j: u8, prec: u32) -> Result<LinearFormSpec> {
    validate_case(n, j)?;
    let inst = FamilyInstance::new(n);
    // Root enclosures carry 3n + 64 guard bits: the smallest root difference
    // scales like 2^(-1.4 n) and the type-3 scan resolves defects near 2^(-3.4 n).
    let root_prec = prec.saturating_add(3 * n + 64);
    let roots = isolate_roots(&inst, root_prec)?;
    let (kk, ll) = match j {
        1 => (1usize, 2usize),
        2 => (0, 2),
        _ => (0, 1),
    };
    let jj = j as usize - 1;
    let fib = PrecReal::from_bigint(inst.fib.clone(), root_prec);

    let gamma0 = roots[jj]
        .sub(&roots[kk])
        .abs()
        .div(&roots[jj].sub(&roots[ll]).abs())?;
    let gamma1 = roots[ll].abs().div(&roots[kk].abs())?;
    let gamma2 = roots[ll]
        .sub(&fib)
        .abs()
        .div(&roots[kk].sub(&fib).abs())?;

    let out_prec = prec + 32;
    let spec = LinearFormSpec {
        n,
        j,
        k: kk as u8 + 1,
        l: ll as u8 + 1,
        log_gamma0: gamma0.ln()?.with_prec(out_prec),
        log_gamma1: gamma1.ln()?.with_prec(out_prec),
        log_gamma2: gamma2.ln()?.with_prec(out_prec),
        m_bound: BigInt::from(73_200_000_000_000_000u64) * n * n + 2,
        c_rhs_num: BigInt::from(80),
        c_rhs_den: BigInt::from(5).pow(n),
        k_exp: 3,
    };
    Ok(spec)
}

/// Outcome of the convergent scan.
struct BdOutcome {
    q: BigInt,
    p: BigInt,
    eps_lo: Dyadic,
    y_bound: BigInt,
    convergents_checked: u32,
}

/// Scans the convergents of theta1 past 6M for the first certified
/// eps = ||q theta0|| - M ||q theta1|| > 0 and turns it into the inclusive
/// y bound. Candidates whose eps interval straddles zero are skipped; if the
/// scan exhausts its input without a certificate, the error distinguishes
/// "more precision could help" from genuine failure.
fn baker_davenport(spec: &LinearFormSpec, max_convergents: usize) -> Result<BdOutcome> {
    let theta0 = spec.log_gamma0.div(&spec.log_gamma2)?;
    let theta1 = spec.log_gamma1.div(&spec.log_gamma2)?;
    let cf = cf_expand(&theta1, max_convergents);
    let six_m: BigInt = &spec.m_bound * 6;

    // positive lower bound of |log gamma2|, needed for the y bound
    let abs_lg2_lo = spec.log_gamma2.abs().lo();
    if !abs_lg2_lo.is_positive() {
        return Err(Error::insufficient("log gamma2 not separated from zero"));
    }

    let mut checked = 0u32;
    let mut straddled = false;
    for (p, q) in &cf.convergents {
        if q <= &six_m {
            continue;
        }
        checked += 1;
        let (_, d0_lo, d0_hi) = theta0.mul_bigint(q).dist_to_nearest_int();
        let (_, d1_lo, d1_hi) = theta1.mul_bigint(q).dist_to_nearest_int();
        let eps_lo = d0_lo.sub(&d1_hi.mul_bigint(&spec.m_bound));
        if eps_lo.is_positive() {
            return Ok(BdOutcome {
                q: q.clone(),
                p: p.clone(),
                y_bound: y_bound_from(spec, q, &eps_lo, &abs_lg2_lo),
                eps_lo,
                convergents_checked: checked,
            });
        }
        let eps_hi = d0_hi.sub(&d1_lo.mul_bigint(&spec.m_bound));
        if eps_hi.is_positive() {
            straddled = true; // unresolved at this precision; try deeper q
        }
    }
    if straddled || cf.reason == CfStop::Precision {
        return Err(Error::insufficient(format!(
            "convergent scan for n = {}, type {} unresolved (stop: {:?})",
            spec.n, spec.j, cf.reason
        )));
    }
    Err(Error::ReductionFailed {
        n: spec.n,
        j: spec.j,
        reason: format!(
            "no certifying convergent among {checked} examined (stop: {:?})",
            cf.reason
        ),
    })
}

/// Largest integer y with y^3 <= q c_rhs / (eps |log gamma2|), assembled as
/// an exact rational from the dyadic lower bounds.
fn y_bound_from(spec: &LinearFormSpec, q: &BigInt, eps_lo: &Dyadic, lg2_lo: &Dyadic) -> BigInt {
    let mut num = q * &spec.c_rhs_num;
    let mut den = &spec.c_rhs_den * (eps_lo.mantissa() * lg2_lo.mantissa());
    let e = eps_lo.exponent() + lg2_lo.exponent();
    if e >= 0 {
        den <<= e as u64;
    } else {
        num <<= (-e) as u64;
    }
    debug_assert_eq!(spec.k_exp, 3);
    num.div_floor(&den).cbrt()
}

/// Exactly checks every candidate solution of type j with 2 <= y <= y_bound.
/// Any such solution has |x - alpha_j y| < 1/(2y), hence x/y is a convergent
/// of alpha_j; the convergents with denominators up to the bound are checked
/// against the norm form in exact arithmetic.
pub fn enumerate_and_check(
    n: u32,
    j: u8,
    y_bound: &BigInt,
    prec: u32,
) -> Result<Vec<SolutionRecord>> {
    validate_case(n, j)?;
    if *y_bound < BigInt::from(2) {
        return Ok(Vec::new());
    }
    let inst = FamilyInstance::new(n);
    let root_prec = prec.saturating_add(3 * n + 64);
    let roots = isolate_roots(&inst, root_prec)?;
    // denominators grow at least like powers of the golden ratio
    let max_terms = 2 * y_bound.bits() as usize + 16;
    let cf = cf_expand_with_cap(&roots[j as usize - 1], max_terms, Some(y_bound));
    if cf.reason == CfStop::Precision {
        return Err(Error::insufficient(format!(
            "root continued fraction for n = {n}, type {j} ran out of precision"
        )));
    }
    let mut found = Vec::new();
    for (p, q) in &cf.convergents {
        if q >= &BigInt::from(2) && q <= y_bound {
            if let Some(rec) = check_solution(n, p, q)? {
                found.push(rec);
            }
        }
    }
    Ok(found)
}

/// Runs the full reduction for one case under the precision ladder:
/// build the linear form, certify a convergent, enumerate the remainder.
pub fn reduce_case(n: u32, j: u8, opts: &ReduceOptions) -> Result<ReductionCertificate> {
    validate_case(n, j)?;
    let start = opts.start_prec.unwrap_or_else(|| default_start_prec(n, j));
    crate::error::with_precision_ladder(
        start,
        opts.prec_cap,
        &format!("reducing n = {n}, type {j}"),
        |prec| {
            let spec = build_linear_form(n, j, prec)?;
            let bd = baker_davenport(&spec, opts.max_convergents)?;
            let solutions = enumerate_and_check(n, j, &bd.y_bound, prec)?;
            Ok(ReductionCertificate {
                n,
                j,
                epsilon: PrecReal::exact(bd.eps_lo.clone(), 64).to_sci_string(6),
                q: bd.q,
                p: bd.p,
                y_bound: bd.y_bound,
                convergents_checked: bd.convergents_checked,
                solutions_found: solutions,
            })
        },
    )
}

/// One sweep case with its outcome and wall-clock cost.
#[derive(Debug)]
pub struct SweepCaseResult {
    pub n: u32,
    pub j: u8,
    pub outcome: Result<ReductionCertificate>,
    pub millis: u64,
}

/// Reduces every (n, type) pair in `from..=to` in parallel. Results come
/// back sorted by (n, type); errors are reported per case, not short-circuited.
pub fn sweep_range(from: u32, to: u32, opts: &ReduceOptions) -> Vec<SweepCaseResult> {
    let cases: Vec<(u32, u8)> = (from..=to)
        .flat_map(|n| [1u8, 2, 3].map(|j| (n, j)))
        .collect();
    let mut out: Vec<SweepCaseResult> = cases
        .into_par_iter()
        .map(|(n, j)| {
            let clock = std::time::Instant::now();
            let outcome = reduce_case(n, j, opts);
            SweepCaseResult {
                n,
                j,
                outcome,
                millis: clock.elapsed().as_millis() as u64,
            }
        })
        .collect();
    out.sort_by_key(|c| (c.n, c.j));
    out
}
