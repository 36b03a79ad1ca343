//! The parametrized cubic family and its certified root data.
//!
//! For each n the binary form is `x (x - F_n y) (x - 2^n y) - y^3`, whose
//! dehomogenization `f(x) = x (x - F_n) (x - 2^n) - 1` is monic, cubic, and
//! totally real for n >= 3, with one root slightly above each of the three
//! shifts 0, F_n, 2^n. Root enclosures are produced by interval Newton
//! refinement from sign-certified starting brackets; every bracket endpoint
//! is an exact dyadic, so all sign evaluations are exact integer arithmetic.

use crate::error::{Error, Result};
use crate::numerics::{real_const, Constant, Dyadic, PrecReal};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::cmp::Ordering;

/// F_n with F_0 = 0, F_1 = 1, by fast doubling.
pub fn fibonacci(n: u32) -> BigInt {
    let (mut a, mut b) = (BigInt::zero(), BigInt::one()); // (F_k, F_{k+1}), k = 0
    for i in (0..(32 - n.leading_zeros())).rev() {
        // (F_k, F_{k+1}) -> (F_2k, F_{2k+1})
        let f2k = &a * ((&b << 1u32) - &a);
        let f2k1 = &a * &a + &b * &b;
        if (n >> i) & 1 == 1 {
            b = &f2k + &f2k1;
            a = f2k1;
        } else {
            a = f2k;
            b = f2k1;
        }
    }
    a
}

/// One member of the family: n together with F_n and 2^n.
#[derive(Clone, Debug)]
pub struct FamilyInstance {
    pub n: u32,
    pub fib: BigInt,
    pub pow2: BigInt,
}

impl FamilyInstance {
    pub fn new(n: u32) -> Self {
        FamilyInstance {
            n,
            fib: fibonacci(n),
            pow2: BigInt::one() << n,
        }
    }

    /// The three shifts 0, F_n, 2^n whose subtraction from a root gives a unit.
    pub fn shifts(&self) -> [BigInt; 3] {
        [BigInt::zero(), self.fib.clone(), self.pow2.clone()]
    }

    /// Full binary form `x (x - F_n y) (x - 2^n y) - y^3`, exact.
    pub fn norm(&self, x: &BigInt, y: &BigInt) -> BigInt {
        x * (x - &self.fib * y) * (x - &self.pow2 * y) - y * y * y
    }

    /// `f(x) = x (x - F_n) (x - 2^n) - 1` at an exact dyadic point, exact.
    pub fn eval(&self, x: &Dyadic) -> Dyadic {
        let a = x.sub(&Dyadic::from_bigint(self.fib.clone()));
        let b = x.sub(&Dyadic::from_bigint(self.pow2.clone()));
        x.mul(&a).mul(&b).sub(&Dyadic::one())
    }

    /// `f'(x) = 3x^2 - 2(F_n + 2^n)x + F_n 2^n` over a ball.
    pub fn derivative_ball(&self, x: &PrecReal) -> PrecReal {
        let s = &self.fib + &self.pow2;
        let p = &self.fib * &self.pow2;
        let sq = x.square().mul_i64(3);
        let lin = x.mul_bigint(&(s << 1u32));
        sq.sub(&lin).add(&PrecReal::from_bigint(p, x.prec_bits()))
    }

    /// The eight solutions read off from the linear factors: (+-1, 0),
    /// (0, +-1), +-(F_n, 1), +-(2^n, 1).
    pub fn trivial_solutions(&self) -> Vec<(BigInt, BigInt)> {
        let one = BigInt::one();
        let mut v = vec![
            (one.clone(), BigInt::zero()),
            (-&one, BigInt::zero()),
            (BigInt::zero(), one.clone()),
            (BigInt::zero(), -&one),
            (self.fib.clone(), one.clone()),
            (-&self.fib, -&one),
            (self.pow2.clone(), one.clone()),
            (-&self.pow2, -&one),
        ];
        v.dedup();
        v
    }
}

/// Exact sign of `f` at a dyadic point.
fn sign_at(inst: &FamilyInstance, x: &Dyadic) -> i32 {
    inst.eval(x).signum()
}

/// Certified enclosures of the three real roots, ordered, each with absolute
/// radius at most 2^-prec.
///
/// Starting brackets of width 2^-n around each shift are certified by exact
/// sign evaluation, then contracted by interval Newton steps; endpoint signs
/// are re-verified after every step so a defect anywhere in the ball
/// arithmetic surfaces as an integrity failure instead of a wrong enclosure.
pub fn isolate_roots(inst: &FamilyInstance, prec: u32) -> Result<[PrecReal; 3]> {
    if inst.n < 3 {
        return Err(Error::Usage(
            "root isolation requires n >= 3 (smaller n are handled by direct search)".into(),
        ));
    }
    let eps = Dyadic::power_of_two(-(inst.n as i64));
    let zero = Dyadic::zero();
    let fexact = Dyadic::from_bigint(inst.fib.clone());
    let texact = Dyadic::from_bigint(inst.pow2.clone());
    let brackets = [
        (zero, eps.clone()),
        (fexact.sub(&eps), fexact),
        (texact.clone(), texact.add(&eps)),
    ];
    let mut out = Vec::with_capacity(3);
    for (lo, hi) in brackets {
        out.push(refine_bracket(inst, lo, hi, prec)?);
    }
    Ok([out[0].clone(), out[1].clone(), out[2].clone()])
}

fn refine_bracket(inst: &FamilyInstance, lo: Dyadic, hi: Dyadic, prec: u32) -> Result<PrecReal> {
    let target = Dyadic::power_of_two(-(prec as i64) - 1);
    let work = prec + inst.n + 64;
    let s_lo = sign_at(inst, &lo);
    let s_hi = sign_at(inst, &hi);
    if s_lo == 0 || s_hi == 0 || s_lo == s_hi {
        return Err(Error::Integrity(format!(
            "starting bracket is not sign-certified at n = {}",
            inst.n
        )));
    }
    let mut lo = lo;
    let mut hi = hi;
    let mut stalled = 0u32;
    loop {
        let width = hi.sub(&lo);
        if width.cmp(&target) != Ordering::Greater {
            // enough significant bits that midpoint rounding of a root as
            // large as 2^n stays below the promised absolute radius
            return Ok(PrecReal::from_interval(&lo, &hi, prec + inst.n + 32));
        }
        let mut stepped = false;
        let x = PrecReal::from_interval(&lo, &hi, work);
        let d = inst.derivative_ball(&x);
        if !d.contains_zero() && stalled < 2 {
            // interval Newton: the root lies in m - f(m)/f'(X), intersected
            // with the current bracket
            let m = lo.add(&hi).shl(-1);
            let fm = PrecReal::exact(inst.eval(&m), work);
            let newton = PrecReal::exact(m, work).sub(&fm.div(&d)?);
            let n_lo = newton.lo().max(lo.clone());
            let n_hi = newton.hi().min(hi.clone());
            if n_lo > n_hi {
                return Err(Error::Integrity(format!(
                    "interval Newton lost the root at n = {}",
                    inst.n
                )));
            }
            let new_width = n_hi.sub(&n_lo);
            // the shrink test keeps a bisection fallback for the rare step
            // where the enclosure barely moves
            if new_width.shl(1).cmp(&width) == Ordering::Less {
                // endpoints moved: re-certify signs exactly
                let ns_lo = sign_at(inst, &n_lo);
                let ns_hi = sign_at(inst, &n_hi);
                if ns_lo == s_lo && ns_hi == s_hi {
                    lo = n_lo;
                    hi = n_hi;
                    stepped = true;
                    stalled = 0;
                } else if ns_lo == 0 || ns_hi == 0 {
                    return Err(Error::Integrity(
                        "cubic vanished at a dyadic point".into(),
                    ));
                } else {
                    return Err(Error::Integrity(format!(
                        "interval Newton enclosure lost the sign change at n = {}",
                        inst.n
                    )));
                }
            }
        }
        if !stepped {
            stalled += 1;
            let m = lo.add(&hi).shl(-1);
            let (m, _) = m.round_to_bits(prec + inst.n + 80, crate::numerics::Round::Nearest);
            // keep the midpoint strictly inside the bracket
            let m = if m.cmp(&lo) != Ordering::Greater || m.cmp(&hi) != Ordering::Less {
                lo.add(&hi).shl(-1)
            } else {
                m
            };
            match sign_at(inst, &m) {
                0 => {
                    return Err(Error::Integrity(
                        "cubic vanished at a dyadic point".into(),
                    ))
                }
                s if s == s_lo => lo = m,
                _ => hi = m,
            }
        }
    }
}

/// The nine logarithms l[i][k] = log | alpha_k - G_i | together with the
/// regulator taken from the upper-left 2x2 minor.
#[derive(Clone, Debug)]
pub struct UnitLogSystem {
    pub n: u32,
    pub roots: [PrecReal; 3],
    /// Indexed as logs[i][k]: shift i, root k (both zero-based).
    pub logs: [[PrecReal; 3]; 3],
    pub regulator: PrecReal,
}

/// Builds the unit-log matrix at working precision `prec`; the extra absolute
/// accuracy needed to separate a root from its own shift (the difference is
/// of size about 2^(-2.7 n)) is budgeted internally.
pub fn unit_log_system(inst: &FamilyInstance, prec: u32) -> Result<UnitLogSystem> {
    let root_prec = prec + 3 * inst.n + 64;
    let roots = isolate_roots(inst, root_prec)?;
    let shifts = inst.shifts();
    let mut logs: Vec<Vec<PrecReal>> = Vec::with_capacity(3);
    for shift in &shifts {
        let mut row = Vec::with_capacity(3);
        for root in &roots {
            let diff = root
                .add_dyadic(&Dyadic::from_bigint(-shift.clone()))
                .with_prec(root_prec)
                .abs();
            if diff.contains_zero() {
                return Err(Error::insufficient(
                    "root enclosure does not separate from its shift",
                ));
            }
            row.push(diff.ln()?.with_prec(prec + 32));
        }
        logs.push(row);
    }
    let logs: [[PrecReal; 3]; 3] = [
        [logs[0][0].clone(), logs[0][1].clone(), logs[0][2].clone()],
        [logs[1][0].clone(), logs[1][1].clone(), logs[1][2].clone()],
        [logs[2][0].clone(), logs[2][1].clone(), logs[2][2].clone()],
    ];
    let regulator = minor_abs(&logs, 0, 1, 0, 1);
    check_log_matrix_sums(&logs)?;
    Ok(UnitLogSystem {
        n: inst.n,
        roots,
        logs,
        regulator,
    })
}

/// | l[i1][k1] l[i2][k2] - l[i1][k2] l[i2][k1] |.
fn minor_abs(logs: &[[PrecReal; 3]; 3], i1: usize, i2: usize, k1: usize, k2: usize) -> PrecReal {
    logs[i1][k1]
        .mul(&logs[i2][k2])
        .sub(&logs[i1][k2].mul(&logs[i2][k1]))
        .abs()
}

/// All 36 ordered index choices of the 2x2 minor; the zero row and column
/// sums force them to one common absolute value.
pub fn regulator_minors(sys: &UnitLogSystem) -> Vec<PrecReal> {
    let mut v = Vec::with_capacity(36);
    for i1 in 0..3 {
        for i2 in 0..3 {
            if i1 == i2 {
                continue;
            }
            for k1 in 0..3 {
                for k2 in 0..3 {
                    if k1 == k2 {
                        continue;
                    }
                    v.push(minor_abs(&sys.logs, i1, i2, k1, k2));
                }
            }
        }
    }
    v
}

/// Every row and column of the log matrix sums to log |unit norm| = 0;
/// an enclosure that misses zero means the arithmetic itself is broken.
fn check_log_matrix_sums(logs: &[[PrecReal; 3]; 3]) -> Result<()> {
    for k in 0..3 {
        let s = logs[0][k].add(&logs[1][k]).add(&logs[2][k]);
        if !s.contains_zero() {
            return Err(Error::Integrity(format!(
                "column {k} of the unit-log matrix does not sum to zero"
            )));
        }
    }
    for (i, row) in logs.iter().enumerate() {
        let s = row[0].add(&row[1]).add(&row[2]);
        if !s.contains_zero() {
            return Err(Error::Integrity(format!(
                "row {i} of the unit-log matrix does not sum to zero"
            )));
        }
    }
    Ok(())
}

/// (81/100)^n as a ball; the true decay rate of every correction term is
/// (phi/2)^n = 0.809...^n, so this slightly larger base is a safe envelope.
pub fn decay_pow(n: u32, prec: u32) -> PrecReal {
    PrecReal::from_ratio(&BigInt::from(81), &BigInt::from(100), prec)
        .expect("constant ratio")
        .pow_u32(n)
}

/// How one enclosure relates to one window.
enum Containment {
    Inside,
    Outside,
    Undecided,
}

fn classify(value: &PrecReal, center: &PrecReal, halfwidth: &PrecReal) -> Containment {
    let lo_edge = center.sub(halfwidth);
    let hi_edge = center.add(halfwidth);
    if value.lo() >= lo_edge.hi() && value.hi() <= hi_edge.lo() {
        Containment::Inside
    } else if value.hi() < lo_edge.lo() || value.lo() > hi_edge.hi() {
        Containment::Outside
    } else {
        Containment::Undecided
    }
}

/// Certifies |alpha_i - G_i| < 0.5^n for each root and returns the three
/// margins 0.5^n - |alpha_i - G_i| as certified positive lower bounds.
/// The isolation brackets make this hold for every n >= 3.
pub fn check_root_envelopes(inst: &FamilyInstance, roots: &[PrecReal; 3]) -> Result<[Dyadic; 3]> {
    let bound = Dyadic::power_of_two(-(inst.n as i64));
    let shifts = inst.shifts();
    let mut margins = [Dyadic::zero(), Dyadic::zero(), Dyadic::zero()];
    for i in 0..3 {
        let diff = roots[i]
            .add_dyadic(&Dyadic::from_bigint(-shifts[i].clone()))
            .abs();
        if diff.hi() < bound {
            margins[i] = bound.sub(&diff.hi());
        } else if diff.lo() >= bound {
            return Err(Error::Integrity(format!(
                "root {} at n = {} escapes its half-power bracket",
                i + 1,
                inst.n
            )));
        } else {
            return Err(Error::insufficient(format!(
                "root {} enclosure at n = {} straddles the bracket edge",
                i + 1,
                inst.n
            )));
        }
    }
    Ok(margins)
}

/// The asymptotic window (center, halfwidth) for entry logs[i][k], valid for
/// n >= 29, in terms of log 2, log phi, log sqrt5 and the decay power.
pub fn envelope_window(
    n: u32,
    i: usize,
    k: usize,
    prec: u32,
) -> (PrecReal, PrecReal) {
    let ln2 = real_const(Constant::Log2, prec);
    let lnphi = real_const(Constant::LogPhi, prec);
    let lnsqrt5 = real_const(Constant::LogSqrt5, prec);
    let dec = decay_pow(n, prec);
    let n_i = n as i64;
    if i == k {
        if i == 2 {
            // log | alpha_3 - 2^n | ~ -2 n log 2
            (ln2.mul_i64(-2 * n_i), dec.mul_i64(2))
        } else {
            // log | alpha_i - G_i | ~ -n (log phi + log 2) + log sqrt5
            (
                lnphi.add(&ln2).mul_i64(-n_i).add(&lnsqrt5),
                dec.mul_i64(3),
            )
        }
    } else if i == 2 || k == 2 {
        // the far difference is of size 2^n (up to F_n/2^n corrections)
        (ln2.mul_i64(n_i), dec)
    } else {
        // the far difference is of size F_n ~ phi^n / sqrt5
        (lnphi.mul_i64(n_i).sub(&lnsqrt5), dec.mul_i64(2))
    }
}

/// Checks all nine unit-log enclosures against their asymptotic windows.
/// Only meaningful for n >= 29, where the windows are a proven statement.
pub fn check_unit_log_envelopes(sys: &UnitLogSystem) -> Result<()> {
    if sys.n < 29 {
        return Err(Error::Usage(
            "unit-log envelopes are only asserted for n >= 29".into(),
        ));
    }
    let prec = sys.logs[0][0].prec_bits().max(128);
    for i in 0..3 {
        for k in 0..3 {
            let (center, halfwidth) = envelope_window(sys.n, i, k, prec);
            match classify(&sys.logs[i][k], &center, &halfwidth) {
                Containment::Inside => {}
                Containment::Outside => {
                    return Err(Error::Integrity(format!(
                        "unit log ({}, {}) at n = {} sits outside its proven window",
                        i + 1,
                        k + 1,
                        sys.n
                    )));
                }
                Containment::Undecided => {
                    return Err(Error::insufficient_hint(
                        format!(
                            "unit log ({}, {}) at n = {} overlaps its window edge",
                            i + 1,
                            k + 1,
                            sys.n
                        ),
                        prec * 2,
                    ));
                }
            }
        }
    }
    Ok(())
}

/// The quadratic growth constant of the regulator, 2 log phi log 2 + log^2 2.
pub fn regulator_growth_constant(prec: u32) -> PrecReal {
    let ln2 = real_const(Constant::Log2, prec);
    let lnphi = real_const(Constant::LogPhi, prec);
    lnphi.mul(&ln2).mul_i64(2).add(&ln2.square())
}

/// The quadratic regulator window (center K n^2, halfwidth 1.2 n + 10 n 0.81^n)
/// with K the exact growth constant. Valid for n >= 29.
pub fn regulator_window(n: u32, prec: u32) -> (PrecReal, PrecReal) {
    let n_sq = BigInt::from(n) * BigInt::from(n);
    let center = regulator_growth_constant(prec).mul_bigint(&n_sq);
    let n_i = n as i64;
    let halfwidth = PrecReal::from_ratio(&BigInt::from(6 * n_i), &BigInt::from(5), prec)
        .expect("constant ratio")
        .add(&decay_pow(n, prec).mul_i64(10 * n_i));
    (center, halfwidth)
}

/// Certifies n^2 < R < 2 n^2 and |R - K n^2| <= 1.2 n + 10 n (81/100)^n,
/// with K the exact growth constant. Valid for n >= 29.
pub fn check_regulator(sys: &UnitLogSystem) -> Result<()> {
    if sys.n < 29 {
        return Err(Error::Usage(
            "the regulator window is only asserted for n >= 29".into(),
        ));
    }
    let prec = sys.regulator.prec_bits().max(128);
    let n_sq = BigInt::from(sys.n) * BigInt::from(sys.n);
    let lo = Dyadic::from_bigint(n_sq.clone());
    let hi = Dyadic::from_bigint(&n_sq << 1u32);
    if !(sys.regulator.lo() > lo && sys.regulator.hi() < hi) {
        return Err(Error::Integrity(format!(
            "regulator at n = {} escapes (n^2, 2 n^2)",
            sys.n
        )));
    }
    let (center, halfwidth) = regulator_window(sys.n, prec);
    match classify(&sys.regulator, &center, &halfwidth) {
        Containment::Inside => Ok(()),
        Containment::Outside => Err(Error::Integrity(format!(
            "regulator at n = {} escapes its quadratic window",
            sys.n
        ))),
        Containment::Undecided => Err(Error::insufficient_hint(
            format!("regulator window at n = {} is undecided", sys.n),
            prec * 2,
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    #[test]
    fn fibonacci_known_values() {
        let want: [(u32, &str); 7] = [
            (0, "0"),
            (1, "1"),
            (2, "1"),
            (10, "55"),
            (29, "514229"),
            (50, "12586269025"),
            (100, "354224848179261915075"),
        ];
        for (n, v) in want {
            assert_eq!(fibonacci(n), BigInt::from_str(v).unwrap(), "F_{n}");
        }
    }

    #[test]
    fn fibonacci_satisfies_recurrence() {
        let mut a = fibonacci(0);
        let mut b = fibonacci(1);
        for n in 2..200u32 {
            let c = fibonacci(n);
            assert_eq!(c, &a + &b, "recurrence at {n}");
            a = b;
            b = c;
        }
    }

    #[test]
    fn norm_hits_plus_minus_one_on_trivial_solutions() {
        for n in [3u32, 4, 7, 12, 29] {
            let inst = FamilyInstance::new(n);
            for (x, y) in inst.trivial_solutions() {
                let v = inst.norm(&x, &y);
                assert!(
                    v == BigInt::one() || v == -BigInt::one(),
                    "norm({x}, {y}) = {v} at n = {n}"
                );
            }
        }
    }

    #[test]
    fn known_sporadic_solutions_below_three() {
        // these exist only for n = 1 and n = 2 and motivate the n >= 3 cutoff
        let inst1 = FamilyInstance::new(1);
        assert_eq!(inst1.norm(&BigInt::from(7), &BigInt::from(3)), BigInt::one());
        let inst2 = FamilyInstance::new(2);
        assert_eq!(
            inst2.norm(&BigInt::from(1), &BigInt::from(2)),
            -BigInt::one()
        );
    }

    #[test]
    fn cubic_evaluates_to_minus_one_at_shifts() {
        for n in 3..40u32 {
            let inst = FamilyInstance::new(n);
            for g in inst.shifts() {
                let v = inst.eval(&Dyadic::from_bigint(g));
                assert_eq!(v, Dyadic::from_i64(-1));
            }
        }
    }

    // Reference literals are decimal printouts, so they sit up to half a unit
    // of their last digit away from the true value; widen accordingly so that
    // overlap with a much tighter certified ball is the right test.
    fn widen_for_print_error(ball: PrecReal) -> PrecReal {
        let tol = ball
            .midpoint()
            .abs()
            .mul(&Dyadic::from_f64(1e-19).unwrap())
            .add(&Dyadic::power_of_two(-150));
        ball.widen(&tol)
    }

    fn parse_sci(s: &str, prec: u32) -> PrecReal {
        // "3.6222...e-15" to an exact rational ball
        let (mant, exp) = s.split_once('e').unwrap();
        let exp: i32 = exp.parse().unwrap();
        let neg = mant.starts_with('-');
        let mant = mant.trim_start_matches('-');
        let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
        let digits = format!("{ip}{fp}");
        let mut num = BigInt::from_str(&digits).unwrap();
        if neg {
            num = -num;
        }
        let shift = exp - fp.len() as i32;
        let (num, den) = if shift >= 0 {
            (num * BigInt::from(10u32).pow(shift as u32), BigInt::one())
        } else {
            (num, BigInt::from(10u32).pow((-shift) as u32))
        };
        widen_for_print_error(PrecReal::from_ratio(&num, &den, prec).unwrap())
    }

    fn overlaps(a: &PrecReal, b: &PrecReal) -> bool {
        a.lo() <= b.hi() && b.lo() <= a.hi()
    }

    #[test]
    fn roots_match_reference_values_at_n_29() {
        let inst = FamilyInstance::new(29);
        let roots = isolate_roots(&inst, 200).unwrap();
        // reference digits from an independent multiprecision root finder
        let a1 = parse_sci("3.622209461603598846551114325421760599994e-15", 256);
        let a2_off = parse_sci("-3.625682234868607193676062892485464443563e-15", 256);
        let a3_off = parse_sci("3.472773265008347124948567063703843568467e-18", 256);
        assert!(overlaps(&roots[0], &a1));
        let f = Dyadic::from_bigint(inst.fib.clone());
        let t = Dyadic::from_bigint(inst.pow2.clone());
        assert!(overlaps(&roots[1].add_dyadic(&f.neg()), &a2_off));
        assert!(overlaps(&roots[2].add_dyadic(&t.neg()), &a3_off));
    }

    #[test]
    fn root_enclosures_carry_sign_certificates() {
        for n in [3u32, 4, 5, 12, 29, 64, 200] {
            let inst = FamilyInstance::new(n);
            // scale with n so the tiny first root keeps relative accuracy and
            // the symmetric-function checks below stay sharp
            let prec = 3 * n + 96;
            let roots = isolate_roots(&inst, prec).unwrap();
            for r in &roots {
                let s_lo = inst.eval(&r.lo()).signum();
                let s_hi = inst.eval(&r.hi()).signum();
                assert_eq!(s_lo * s_hi, -1, "no sign change across enclosure at n={n}");
                assert!(r.radius() <= &Dyadic::power_of_two(-(prec as i64)));
            }
            // ordering and symmetric functions of the roots
            assert!(roots[0].hi() < roots[1].lo());
            assert!(roots[1].hi() < roots[2].lo());
            let sum = roots[0].add(&roots[1]).add(&roots[2]);
            let target = Dyadic::from_bigint(&inst.fib + &inst.pow2);
            assert!(sum.lo() <= target && target <= sum.hi(), "root sum at n={n}");
            let prod = roots[0].mul(&roots[1]).mul(&roots[2]);
            let one = Dyadic::one();
            assert!(prod.lo() <= one && one <= prod.hi(), "root product at n={n}");
        }
    }

    #[test]
    fn unit_logs_match_reference_at_n_29() {
        let inst = FamilyInstance::new(29);
        let sys = unit_log_system(&inst, 160).unwrap();
        let refs = [
            ["-33.25169220675062010287253", "13.1504239705122061297728", "20.10126823623841397309973"],
            ["13.1504239705122061297728", "-33.25073392158958336783665", "20.10030995107737723806385"],
            ["20.10126823623841397309972", "20.10030995107737723806386", "-40.20157818731579121116358"],
        ];
        for i in 0..3 {
            for k in 0..3 {
                let r = parse_decimal(refs[i][k], 256);
                assert!(
                    overlaps(&sys.logs[i][k], &r),
                    "log({},{}) = {} vs {}",
                    i + 1,
                    k + 1,
                    sys.logs[i][k],
                    refs[i][k]
                );
            }
        }
        let r_ref = parse_decimal("932.7095194050368172865392944815727407001", 256);
        assert!(overlaps(&sys.regulator, &r_ref));
    }

    fn parse_decimal(s: &str, prec: u32) -> PrecReal {
        let neg = s.starts_with('-');
        let t = s.trim_start_matches('-');
        let (ip, fp) = t.split_once('.').unwrap_or((t, ""));
        let mut num = BigInt::from_str(&format!("{ip}{fp}")).unwrap();
        if neg {
            num = -num;
        }
        let den = BigInt::from(10u32).pow(fp.len() as u32);
        widen_for_print_error(PrecReal::from_ratio(&num, &den, prec).unwrap())
    }

    #[test]
    fn envelopes_and_regulator_certify_for_sample_n() {
        for n in [29u32, 30, 41, 64] {
            let inst = FamilyInstance::new(n);
            let sys = unit_log_system(&inst, 192).unwrap();
            check_unit_log_envelopes(&sys).unwrap();
            check_regulator(&sys).unwrap();
        }
    }

    #[test]
    fn all_thirty_six_minors_agree() {
        let inst = FamilyInstance::new(33);
        let sys = unit_log_system(&inst, 160).unwrap();
        let minors = regulator_minors(&sys);
        assert_eq!(minors.len(), 36);
        for m in &minors {
            assert!(
                overlaps(m, &sys.regulator),
                "minor {m} disagrees with regulator {}",
                sys.regulator
            );
        }
    }

    #[test]
    fn envelopes_reject_below_cutoff() {
        let inst = FamilyInstance::new(20);
        let sys = unit_log_system(&inst, 128).unwrap();
        assert!(check_unit_log_envelopes(&sys).is_err());
    }

    #[test]
    fn root_envelopes_certify_with_positive_margins() {
        for n in [3u32, 29, 100] {
            let inst = FamilyInstance::new(n);
            let roots = isolate_roots(&inst, (n + 96).max(160)).unwrap();
            let margins = check_root_envelopes(&inst, &roots).unwrap();
            for (i, m) in margins.iter().enumerate() {
                assert!(m.is_positive(), "margin {i} at n = {n} is {m}");
                // the margin can never exceed the bracket width itself
                assert!(*m < Dyadic::power_of_two(-(n as i64)));
            }
        }
    }

    #[test]
    fn regulator_window_matches_the_checker() {
        let inst = FamilyInstance::new(29);
        let sys = unit_log_system(&inst, 160).unwrap();
        let (center, halfwidth) = regulator_window(29, 160);
        let lo = center.sub(&halfwidth);
        let hi = center.add(&halfwidth);
        assert!(sys.regulator.lo() > lo.lo());
        assert!(sys.regulator.hi() < hi.hi());
    }
}
