//! Certified values of the handful of constants the pipeline needs.
//!
//! Each constant is computed from an integer series whose truncation error is
//! bounded explicitly, so the returned ball is a proof-grade enclosure, not a
//! best-effort approximation.

use super::ball::{ln2_ball, PrecReal};
use super::dyadic::Dyadic;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::Zero;
use std::str::FromStr;

/// The constants exposed on the command line and used internally.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constant {
    /// Golden ratio (1 + sqrt 5) / 2.
    Phi,
    /// Conjugate root (1 - sqrt 5) / 2.
    Psi,
    Sqrt5,
    Log2,
    LogPhi,
    LogSqrt5,
    /// Euler's number.
    E,
}

impl FromStr for Constant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "phi" => Ok(Constant::Phi),
            "psi" => Ok(Constant::Psi),
            "sqrt5" => Ok(Constant::Sqrt5),
            "log2" | "ln2" => Ok(Constant::Log2),
            "logphi" | "lnphi" => Ok(Constant::LogPhi),
            "logsqrt5" | "lnsqrt5" => Ok(Constant::LogSqrt5),
            "e" => Ok(Constant::E),
            other => Err(Error::Usage(format!("unknown constant '{other}'"))),
        }
    }
}

/// Certified enclosure of a constant at `prec` bits (minimum 16).
pub fn real_const(c: Constant, prec: u32) -> PrecReal {
    let prec = prec.max(16);
    match c {
        Constant::Phi => {
            // (1 + sqrt5) / 2
            sqrt5(prec + 8)
                .add(&PrecReal::from_i64(1, prec + 8))
                .shl(-1)
                .with_prec(prec)
        }
        Constant::Psi => {
            // (1 - sqrt5) / 2 = 1 - phi
            PrecReal::from_i64(1, prec + 8)
                .sub(&real_const(Constant::Phi, prec + 8))
                .with_prec(prec)
        }
        Constant::Sqrt5 => sqrt5(prec),
        Constant::Log2 => ln2_ball(prec),
        Constant::LogPhi => log_phi(prec),
        Constant::LogSqrt5 => log_sqrt5(prec),
        Constant::E => euler(prec),
    }
}

/// sqrt(5) through the integer floor square root of 5 * 4^w.
fn sqrt5(prec: u32) -> PrecReal {
    let w = prec as u64 + 8;
    let scaled = BigInt::from(5) << (2 * w);
    let root = scaled.sqrt();
    let lo = Dyadic::new(root.clone(), -(w as i64));
    let hi = Dyadic::new(root + 1, -(w as i64));
    PrecReal::from_interval(&lo, &hi, prec)
}

/// log(phi) = asinh(1/2), from the series
///   asinh(x) = sum_{m>=0} (-1)^m (2m)! x^(2m+1) / (4^m (m!)^2 (2m+1))
/// at x = 1/2 in integer-scaled arithmetic. Consecutive term magnitudes decay
/// by (2m-1)(2m)/(16 m^2) < 1/4 and alternate in sign, so the truncation
/// error stays below the first omitted term.
fn log_phi(prec: u32) -> PrecReal {
    let ww = prec + 24;
    let scale = ww as i64;
    // term_m = (2m)! / (4^m (m!)^2 (2m+1) 2^(2m+1)); track numerator factors
    // incrementally: t_{m} = t_{m-1} * (2m-1)(2m) / (4 m^2) * 1/4, and the
    // (2m+1) divisor swapped between steps.
    let one_scaled = BigInt::from(1) << scale as u64;
    // coef_m = (2m)! / (4^m (m!)^2 4^m) scaled; start coef_0 = 1/2 (the x factor)
    let mut coef = &one_scaled / BigInt::from(2);
    let mut sum = coef.clone(); // m = 0: coef / (2*0+1)
    let mut m: u64 = 0;
    let mut terms: u64 = 1;
    loop {
        assert!(m <= 8 * ww as u64, "series failed to terminate");
        m += 1;
        // coef *= (2m-1)(2m) / (m^2) / 16  (ratio of consecutive terms sans 1/(2m+1))
        coef *= BigInt::from((2 * m - 1) * (2 * m));
        coef /= BigInt::from(16 * m * m);
        let term = &coef / BigInt::from(2 * m + 1);
        terms += 1;
        if term.is_zero() {
            break;
        }
        if m % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
    }
    // Alternating with decreasing magnitude: tail below one ulp after the
    // zero term; floor drift below 2 ulps per step.
    let err_ulps = BigInt::from(3 * terms + 4);
    let mid = Dyadic::new(sum, -scale);
    let rad = Dyadic::new(err_ulps, -scale);
    PrecReal::from_interval(&mid.sub(&rad), &mid.add(&rad), prec)
}

/// log(sqrt 5) = atanh(1/9) + log 2, from 5 = 4 * (1 + 1/9) / (1 - 1/9)
/// so log sqrt5 = log 2 + atanh(1/9).
fn log_sqrt5(prec: u32) -> PrecReal {
    let w = prec + 16;
    atanh_recip(9, w).add(&ln2_ball(w)).with_prec(prec)
}

/// atanh(1/k) by the same integer-scaled series used for log 2.
fn atanh_recip(k: u32, prec: u32) -> PrecReal {
    // ln2_ball is 2*atanh(1/3); reuse its machinery by inverting the doubling
    // only for k == 3, otherwise run the series directly here.
    if k == 3 {
        return ln2_ball(prec).shl(-1);
    }
    let ww = prec + 16;
    let scale = ww as i64;
    let k2 = BigInt::from(k as u64 * k as u64);
    let mut pow = (BigInt::from(1) << scale as u64) / BigInt::from(k);
    let mut sum = pow.clone();
    let mut m = 1u64;
    let mut terms = 1u64;
    loop {
        assert!(m <= 8 * ww as u64, "series failed to terminate");
        pow /= &k2;
        m += 2;
        let term = &pow / BigInt::from(m);
        terms += 1;
        if term.is_zero() {
            break;
        }
        sum += &term;
    }
    let err_ulps = BigInt::from(3 * terms + 4);
    let mid = Dyadic::new(sum, -scale);
    let rad = Dyadic::new(err_ulps, -scale);
    PrecReal::from_interval(&mid.sub(&rad), &mid.add(&rad), prec)
}

/// e = sum 1/k!, truncation tail below twice the first omitted term.
fn euler(prec: u32) -> PrecReal {
    let ww = prec + 16;
    let scale = ww as i64;
    let mut term = BigInt::from(1) << scale as u64;
    let mut sum = term.clone();
    let mut k = 0u64;
    let mut terms = 1u64;
    loop {
        assert!(k <= 8 * ww as u64, "series failed to terminate");
        k += 1;
        term /= BigInt::from(k);
        terms += 1;
        if term.is_zero() {
            break;
        }
        sum += &term;
    }
    // tail after term hits zero: < 2 ulps; floor drift < 2 ulps per step
    let err_ulps = BigInt::from(2 * terms + 4);
    let mid = Dyadic::new(sum, -scale);
    let rad = Dyadic::new(err_ulps, -scale);
    PrecReal::from_interval(&mid.sub(&rad), &mid.add(&rad), prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference digits computed independently with a multiprecision library.
    const PHI_40: &str = "1.618033988749894848204586834365638117720";
    const SQRT5_40: &str = "2.236067977499789696409173668731276235441";
    const LOG2_40: &str = "0.6931471805599453094172321214581765680755";
    const LOGPHI_40: &str = "0.4812118250596034474977589134243684231352";
    const LOGSQRT5_40: &str = "0.8047189562170501873003796666130938197628";
    const E_40: &str = "2.718281828459045235360287471352662497757";

    // Parse a fixed-point decimal literal into an exact rational and check the
    // ball encloses it to within one unit of the last printed digit.
    fn assert_matches(ball: &PrecReal, digits: &str) {
        let neg = digits.starts_with('-');
        let s = digits.trim_start_matches('-');
        let (int_part, frac_part) = s.split_once('.').unwrap();
        let mut num = BigInt::from_str(&format!("{int_part}{frac_part}")).unwrap();
        if neg {
            num = -num;
        }
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        let value = PrecReal::from_ratio(&num, &den, 256).unwrap();
        // tolerance: 1 unit in the last place of the literal
        let tol = PrecReal::from_ratio(&BigInt::from(1), &den, 256).unwrap();
        let lo = value.sub(&tol).lo();
        let hi = value.add(&tol).hi();
        assert!(
            ball.lo() >= lo && ball.hi() <= hi,
            "ball {ball} escapes [{digits} ~ 1ulp]"
        );
    }

    #[test]
    fn constants_match_reference_digits() {
        let p = 160;
        assert_matches(&real_const(Constant::Phi, p), PHI_40);
        assert_matches(&real_const(Constant::Sqrt5, p), SQRT5_40);
        assert_matches(&real_const(Constant::Log2, p), LOG2_40);
        assert_matches(&real_const(Constant::LogPhi, p), LOGPHI_40);
        assert_matches(&real_const(Constant::LogSqrt5, p), LOGSQRT5_40);
        assert_matches(&real_const(Constant::E, p), E_40);
    }

    #[test]
    fn psi_is_one_minus_phi() {
        let p = 128;
        let phi = real_const(Constant::Phi, p);
        let psi = real_const(Constant::Psi, p);
        let sum = phi.add(&psi);
        // phi + psi = 1 exactly
        let one = Dyadic::one();
        assert!(sum.lo() <= one && one <= sum.hi());
        // phi * psi = -1 exactly
        let prod = phi.mul(&psi);
        let minus_one = Dyadic::from_i64(-1);
        assert!(prod.lo() <= minus_one && minus_one <= prod.hi());
    }

    #[test]
    fn identities_cross_check_series_against_general_log() {
        let p = 192;
        // log(phi) from the asinh series vs ln() of the phi ball
        let via_series = real_const(Constant::LogPhi, p);
        let via_ln = real_const(Constant::Phi, p + 16).ln().unwrap();
        assert!(
            via_series.lo() <= via_ln.hi() && via_ln.lo() <= via_series.hi(),
            "disjoint enclosures for the same constant"
        );
        // log(sqrt5) = log(5)/2
        let via_series = real_const(Constant::LogSqrt5, p);
        let via_ln = PrecReal::from_i64(5, p + 16).ln().unwrap().shl(-1);
        assert!(via_series.lo() <= via_ln.hi() && via_ln.lo() <= via_series.hi());
        // e = exp(1)
        let via_series = real_const(Constant::E, p);
        let via_exp = PrecReal::from_i64(1, p + 16).exp().unwrap();
        assert!(via_series.lo() <= via_exp.hi() && via_exp.lo() <= via_series.hi());
    }

    #[test]
    fn sqrt5_squares_back_to_five() {
        let s = real_const(Constant::Sqrt5, 200);
        let sq = s.square();
        let five = Dyadic::from_i64(5);
        assert!(sq.lo() <= five && five <= sq.hi());
        assert!(sq.radius() < &Dyadic::power_of_two(-190));
    }

    #[test]
    fn precision_scales_with_request() {
        for p in [32u32, 64, 256, 1024] {
            let c = real_const(Constant::Log2, p);
            assert!(
                c.radius() < &Dyadic::power_of_two(-(p as i64) + 8),
                "radius too wide at {p} bits"
            );
        }
    }

    #[test]
    fn constant_names_parse() {
        assert_eq!("phi".parse::<Constant>().unwrap(), Constant::Phi);
        assert_eq!("LN2".parse::<Constant>().unwrap(), Constant::Log2);
        assert_eq!("logsqrt5".parse::<Constant>().unwrap(), Constant::LogSqrt5);
        assert!("tau".parse::<Constant>().is_err());
    }
}
