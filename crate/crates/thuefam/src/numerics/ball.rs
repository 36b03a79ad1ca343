//! Certified ball arithmetic: a value is a dyadic midpoint plus an absolute
//! error radius that is guaranteed to contain the exact real number.
//!
//! Every operation widens the radius by the propagated input radii plus its
//! own rounding error, so containment is an invariant, not an aspiration.
//! Comparisons answer definitely only when the balls are disjoint from the
//! boundary in question; anything else signals insufficient precision to the
//! caller, which is expected to retry at doubled precision.

use super::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Radii carry few significant bits; they only need to be sound upper bounds.
const RAD_BITS: u32 = 32;

/// An arbitrary-precision real with a certified absolute error radius.
#[derive(Clone, Debug)]
pub struct PrecReal {
    mid: Dyadic,
    rad: Dyadic,
    prec: u32,
}

impl PrecReal {
    /// Wraps an exact dyadic value (radius zero).
    pub fn exact(mid: Dyadic, prec: u32) -> Self {
        PrecReal {
            mid,
            rad: Dyadic::zero(),
            prec: prec.max(16),
        }
    }

    pub fn from_bigint(v: BigInt, prec: u32) -> Self {
        PrecReal::exact(Dyadic::from_bigint(v), prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        PrecReal::exact(Dyadic::from_i64(v), prec)
    }

    pub fn zero(prec: u32) -> Self {
        PrecReal::exact(Dyadic::zero(), prec)
    }

    /// Ball known to contain a value in `[lo, hi]`.
    pub fn from_interval(lo: &Dyadic, hi: &Dyadic, prec: u32) -> Self {
        debug_assert!(lo <= hi);
        let two_mid = lo.add(hi);
        let two_rad = hi.sub(lo);
        PrecReal {
            mid: two_mid.shl(-1),
            rad: two_rad.shl(-1),
            prec: prec.max(16),
        }
        .normalized()
    }

    /// Exact ratio `num / den` rounded to `prec` bits.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Usage("division by zero".into()));
        }
        let prec = prec.max(16);
        // scale so the quotient carries prec + 2 significant bits
        let shift = (den.bits() as i64 - num.bits() as i64) + prec as i64 + 2;
        let q = if shift >= 0 {
            (num << shift as u64) / den
        } else {
            (num >> (-shift) as u64) / den
        };
        let mid = Dyadic::new(q, -shift);
        // two floor steps may each lose < 1 ulp at scale 2^-shift
        let rad = Dyadic::power_of_two(1 - shift);
        Ok(PrecReal { mid, rad, prec }.normalized())
    }

    pub fn midpoint(&self) -> &Dyadic {
        &self.mid
    }

    pub fn radius(&self) -> &Dyadic {
        &self.rad
    }

    pub fn prec_bits(&self) -> u32 {
        self.prec
    }

    pub fn lo(&self) -> Dyadic {
        self.mid.sub(&self.rad)
    }

    pub fn hi(&self) -> Dyadic {
        self.mid.add(&self.rad)
    }

    pub fn with_prec(mut self, prec: u32) -> Self {
        self.prec = prec.max(16);
        self.normalized()
    }

    /// Rounds the midpoint to the working precision and folds the rounding
    /// error plus any excess radius bits into a short upper-bound radius.
    fn normalized(self) -> Self {
        let (mid, round_err) = self.mid.round_to_bits(self.prec + 8, Round::Nearest);
        let rad = self.rad.add(&round_err);
        let (rad, _) = rad.round_to_bits(RAD_BITS, Round::Up);
        PrecReal {
            mid,
            rad,
            prec: self.prec,
        }
    }

    pub fn neg(&self) -> Self {
        PrecReal {
            mid: self.mid.neg(),
            rad: self.rad.clone(),
            prec: self.prec,
        }
    }

    /// Ball containing |x| for every x in self.
    pub fn abs(&self) -> Self {
        if !self.contains_zero() {
            return PrecReal {
                mid: self.mid.abs(),
                rad: self.rad.clone(),
                prec: self.prec,
            };
        }
        // interval straddles zero: |x| ranges over [0, max(|lo|, |hi|)]
        let hi = self.lo().abs().max(self.hi().abs());
        PrecReal::from_interval(&Dyadic::zero(), &hi, self.prec)
    }

    pub fn add(&self, other: &Self) -> Self {
        PrecReal {
            mid: self.mid.add(&other.mid),
            rad: self.rad.add(&other.rad),
            prec: self.prec.max(other.prec),
        }
        .normalized()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn add_dyadic(&self, d: &Dyadic) -> Self {
        PrecReal {
            mid: self.mid.add(d),
            rad: self.rad.clone(),
            prec: self.prec,
        }
        .normalized()
    }

    /// Widens the radius by `extra` (must be nonnegative).
    pub fn widen(&self, extra: &Dyadic) -> Self {
        debug_assert!(!extra.is_negative());
        PrecReal {
            mid: self.mid.clone(),
            rad: self.rad.add(extra),
            prec: self.prec,
        }
        .normalized()
    }

    pub fn mul(&self, other: &Self) -> Self {
        // |a*b - a0*b0| <= |a0| rb + |b0| ra + ra rb
        let cross = self
            .mid
            .abs()
            .mul(&other.rad)
            .add(&other.mid.abs().mul(&self.rad))
            .add(&self.rad.mul(&other.rad));
        PrecReal {
            mid: self.mid.mul(&other.mid),
            rad: cross,
            prec: self.prec.max(other.prec),
        }
        .normalized()
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// Exact scaling by an integer.
    pub fn mul_bigint(&self, k: &BigInt) -> Self {
        PrecReal {
            mid: self.mid.mul_bigint(k),
            rad: self.rad.mul_bigint(&k.abs()),
            prec: self.prec,
        }
        .normalized()
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        self.mul_bigint(&BigInt::from(k))
    }

    /// Exact scaling by 2^k.
    pub fn shl(&self, k: i64) -> Self {
        PrecReal {
            mid: self.mid.shl(k),
            rad: self.rad.shl(k),
            prec: self.prec,
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.abs().cmp(&self.rad) != Ordering::Greater
    }

    /// True iff every point of the ball is strictly positive.
    pub fn is_positive_certain(&self) -> bool {
        self.mid.is_positive() && self.lo().is_positive()
    }

    pub fn is_negative_certain(&self) -> bool {
        self.neg().is_positive_certain()
    }

    /// Definite comparison, or None when the balls overlap.
    pub fn cmp_certain(&self, other: &Self) -> Option<Ordering> {
        if self.hi() < other.lo() {
            Some(Ordering::Less)
        } else if self.lo() > other.hi() {
            Some(Ordering::Greater)
        } else if self.rad.is_zero() && other.rad.is_zero() && self.mid == other.mid {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// True iff the ball lies inside `[lo, hi]`.
    pub fn inside(&self, lo: &Dyadic, hi: &Dyadic) -> bool {
        &self.lo() >= lo && &self.hi() <= hi
    }

    pub fn recip(&self) -> Result<Self> {
        let lo_abs = if self.is_positive_certain() {
            self.lo()
        } else if self.is_negative_certain() {
            self.hi().abs()
        } else {
            return Err(Error::insufficient(
                "reciprocal of an interval containing zero",
            ));
        };
        let w = self.prec + 8;
        // 1/mid = floor(2^k / man) * 2^(-k - exp), off by < one scaled ulp
        let k = w as i64 + self.mid.mantissa_bits() as i64;
        let q = (BigInt::from(1) << k as u64) / self.mid.mantissa();
        let inv_mid = Dyadic::new(q, -k - self.mid.exponent());
        let round_err = Dyadic::power_of_two(-k - self.mid.exponent());
        // |1/x - 1/mid| <= rad / (|mid| * min|x|)
        let denom = self.mid.abs().mul(&lo_abs);
        let prop = div_upper(&self.rad, &denom, w);
        Ok(PrecReal {
            mid: inv_mid,
            rad: prop.add(&round_err),
            prec: self.prec,
        }
        .normalized())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    /// Square root; requires a certainly positive ball.
    pub fn sqrt(&self) -> Result<Self> {
        if self.contains_zero() || self.mid.is_negative() {
            return Err(Error::insufficient("sqrt of non-positive interval"));
        }
        let w = self.prec + 8;
        let lo = self.lo();
        let hi = self.hi();
        let s_lo = sqrt_dyadic_down(&lo, w);
        let s_hi = sqrt_dyadic_up(&hi, w);
        Ok(PrecReal::from_interval(&s_lo, &s_hi, self.prec))
    }

    /// Natural logarithm; requires a certainly positive ball.
    pub fn ln(&self) -> Result<Self> {
        if !self.is_positive_certain() {
            return Err(Error::insufficient("log of non-positive interval"));
        }
        let w = self.prec + 16;
        let core = ln_dyadic(&self.mid, w);
        // |ln x - ln mid| <= rad / lo
        let prop = div_upper(&self.rad, &self.lo(), w);
        Ok(core.widen(&prop).with_prec(self.prec))
    }

    /// Exponential.
    pub fn exp(&self) -> Result<Self> {
        let w = self.prec + 16;
        let core = exp_dyadic(&self.mid, w)?;
        // |e^x - e^mid| <= e^hi * rad; bound e^hi coarsely via magnitudes
        if self.rad.is_zero() {
            return Ok(core.with_prec(self.prec));
        }
        let hi = self.hi();
        // bits of e^hi, with two bits of headroom over the f64 estimate
        let bound_mag = hi.to_f64().max(0.0) * std::f64::consts::LOG2_E + 2.0;
        if bound_mag > i32::MAX as f64 {
            return Err(Error::Usage("exp argument too large".into()));
        }
        let scale = Dyadic::power_of_two(bound_mag as i64);
        let prop = self.rad.mul(&scale);
        Ok(core.widen(&prop).with_prec(self.prec))
    }

    /// Integer power by squaring.
    pub fn pow_u32(&self, e: u32) -> Self {
        let mut acc = PrecReal::from_i64(1, self.prec);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    /// Distance of the ball to the nearest integer, as certified bounds.
    /// Returns `(nearest, lower, upper)` with lower/upper clamped to [0, 1/2].
    /// Soundness relies on x -> dist(x, Z) being 1-Lipschitz.
    pub fn dist_to_nearest_int(&self) -> (BigInt, Dyadic, Dyadic) {
        let (nearest, d) = self.mid.dist_to_nearest_int();
        let half = Dyadic::power_of_two(-1);
        let lb = d.sub(&self.rad).max(Dyadic::zero());
        let ub = d.add(&self.rad).min(half);
        (nearest, lb, ub)
    }

    /// The unique nearest integer, certified. Fails when the ball straddles
    /// a half-integer boundary.
    pub fn round_nearest_certified(&self) -> Result<BigInt> {
        let (nearest, d) = self.mid.dist_to_nearest_int();
        let margin = Dyadic::power_of_two(-1).sub(&d);
        if self.rad < margin {
            Ok(nearest)
        } else {
            Err(Error::insufficient(
                "rounding to nearest integer near a half-integer boundary",
            ))
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    pub fn to_sci_string(&self, sig: usize) -> String {
        self.mid.to_sci_string(sig)
    }
}

impl fmt::Display for PrecReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} +- {}",
            self.mid.to_sci_string(20),
            self.rad.to_sci_string(3)
        )
    }
}

/// Upper bound on a/b for positive dyadics, rounded up at w bits.
fn div_upper(a: &Dyadic, b: &Dyadic, w: u32) -> Dyadic {
    debug_assert!(!a.is_negative() && b.is_positive());
    if a.is_zero() {
        return Dyadic::zero();
    }
    let k = w as i64 + b.mantissa_bits() as i64;
    let num = a.mantissa() << k as u64;
    let q = num / b.mantissa() + 1; // +1 makes the floor an upper bound
    Dyadic::new(q, a.exponent() - b.exponent() - k)
}

/// Floor square root of a positive dyadic at w significant bits, rounded down.
fn sqrt_dyadic_down(x: &Dyadic, w: u32) -> Dyadic {
    debug_assert!(x.is_positive());
    // scale to an even exponent with >= 2w+2 mantissa bits
    let bits = x.mantissa_bits() as i64;
    let mut extra = (2 * w as i64 + 2 - bits).max(0);
    if (x.exponent() - extra) % 2 != 0 {
        extra += 1;
    }
    let scaled = x.mantissa() << extra as u64;
    let root = scaled.sqrt();
    Dyadic::new(root, (x.exponent() - extra) / 2)
}

/// Like `sqrt_dyadic_down` but rounded up.
fn sqrt_dyadic_up(x: &Dyadic, w: u32) -> Dyadic {
    let down = sqrt_dyadic_down(x, w);
    // floor sqrt: (r+1)^2 > scaled, so r+1 is an upper bound at the same scale
    down.add(&Dyadic::power_of_two(down.exponent()))
}

/// ln(2) as a ball at w bits: 2 * atanh(1/3), truncation bounded by the
/// geometric tail of the series.
pub(super) fn ln2_ball(w: u32) -> PrecReal {
    atanh_recip_series(3, w).shl(1)
}

/// atanh(1/k) for integer k >= 2 via the odd series; all operations are
/// big-by-small so this stays cheap even at thousands of bits.
fn atanh_recip_series(k: u32, w: u32) -> PrecReal {
    let ww = w + 16;
    let k2 = BigInt::from(k as u64 * k as u64);
    // work on scaled integers: value * 2^ww
    let scale = ww as i64;
    let mut pow = (BigInt::from(1) << scale as u64) / BigInt::from(k); // (1/k) scaled, floor
    let mut sum = pow.clone();
    let mut m = 1u64;
    let mut terms = 1u64;
    loop {
        assert!(m <= 8 * ww as u64, "series failed to terminate");
        pow /= &k2; // floor division each step; error accounted below
        m += 2;
        let term = &pow / BigInt::from(m);
        terms += 1;
        if term.is_zero() {
            break;
        }
        sum += &term;
    }
    // Floor errors: pow carries < 9/8 scaled ulps of drift, each emitted term
    // adds < 1 more, and the truncated tail is < 3 ulps; 3*terms + 4 covers.
    let err_ulps = BigInt::from(3 * terms + 4);
    let mid = Dyadic::new(sum, -scale);
    let rad = Dyadic::new(err_ulps, -scale);
    PrecReal {
        mid,
        rad,
        prec: w,
    }
    .normalized()
}

/// ln of an exact positive dyadic at w bits.
///
/// Strategy: write x = t * 2^s with t in [1, 2); bring t near 1 with j
/// successive square roots (j ~ sqrt(w) balances sqrt cost against series
/// length); then ln t = 2^j * 2 * atanh(u/(2+u)) with u = t^(1/2^j) - 1.
pub(super) fn ln_dyadic(x: &Dyadic, w: u32) -> PrecReal {
    debug_assert!(x.is_positive());
    let mag = x.magnitude().unwrap();
    let s = mag - 1; // x = t * 2^s, t in [1,2)
    let t = x.shl(-s);
    debug_assert!(t >= Dyadic::one() && t < Dyadic::from_i64(2));

    let u0 = t.sub(&Dyadic::one());
    let mut result = PrecReal::zero(w);
    if !u0.is_zero() {
        // choose reduction depth based on how far t already is from 1
        let u_mag = u0.magnitude().unwrap(); // <= 0
        let target = (((w as f64).sqrt() as i64) + 4).max(8);
        let j = (target + u_mag).max(0) as u32; // halvings needed to push u below 2^-target
        let ww = w + j + 24;
        let mut tb = PrecReal::exact(t, ww);
        for _ in 0..j {
            tb = tb.sqrt().expect("sqrt of value in (1,2) cannot fail");
        }
        let u = tb.sub(&PrecReal::from_i64(1, ww));
        let v = u
            .div(&u.add(&PrecReal::from_i64(2, ww)))
            .expect("2+u is bounded away from zero");
        result = atanh_series(&v, ww).shl(1 + j as i64);
    }
    if s != 0 {
        let ln2 = ln2_ball(w + 16);
        result = result.add(&ln2.mul_i64(s));
    }
    result.with_prec(w)
}

/// atanh on a ball with |v| certified below 1/2; series in v^2.
fn atanh_series(v: &PrecReal, w: u32) -> PrecReal {
    let half = Dyadic::power_of_two(-1);
    assert!(
        v.hi().abs() < half && v.lo().abs() < half,
        "atanh argument must be well inside (-1/2, 1/2)"
    );
    let v2 = v.square();
    let mut term = v.clone();
    let mut sum = v.clone();
    let mut m = 1i64;
    loop {
        term = term.mul(&v2);
        m += 2;
        let contrib = term.mul(&PrecReal::from_ratio(
            &BigInt::from(1),
            &BigInt::from(m),
            w,
        )
        .expect("small nonzero denominator"));
        sum = sum.add(&contrib);
        let done = match term.mid.magnitude() {
            None => true,
            Some(mg) => mg < -(w as i64) - 4,
        };
        if done {
            break;
        }
    }
    // tail bound: |term| * v2_hi / (1 - v2_hi) <= |term| (since v2 < 1/4, factor < 1/3)
    let tail = term.abs().hi();
    sum.widen(&tail)
}

/// exp of an exact dyadic at w bits.
///
/// Reduction: r = x - s*ln2 with |r| <= ln2/2, then r' = r / 2^j,
/// exp(r') by series, squared back j times.
fn exp_dyadic(x: &Dyadic, w: u32) -> Result<PrecReal> {
    if x.is_zero() {
        return Ok(PrecReal::from_i64(1, w));
    }
    // s = round(x / ln2); crude f64 estimate is fine, the correction is exact
    let s_est = (x.to_f64() / std::f64::consts::LN_2).round();
    if !s_est.is_finite() || s_est.abs() > 1e18 {
        return Err(Error::Usage("exp argument out of supported range".into()));
    }
    let s = s_est as i64;
    let ww = w + 48;
    let ln2 = ln2_ball(ww);
    let r = PrecReal::exact(x.clone(), ww).sub(&ln2.mul_i64(s));
    // |r| <= 0.35 + slack; halve j times so the series converges fast
    let j = (((ww as f64).sqrt() as u32) + 2).min(48);
    let r_small = r.shl(-(j as i64));
    let mut term = PrecReal::from_i64(1, ww);
    let mut sum = PrecReal::from_i64(1, ww);
    let mut k = 0i64;
    loop {
        k += 1;
        term = term.mul(&r_small).mul(
            &PrecReal::from_ratio(&BigInt::from(1), &BigInt::from(k), ww)
                .expect("factorial denominator"),
        );
        sum = sum.add(&term);
        let done = match term.mid.magnitude() {
            None => true,
            Some(mg) => mg < -(ww as i64) - 4,
        };
        if done {
            break;
        }
        if k > 4 * ww as i64 {
            return Err(Error::Integrity("exp series failed to converge".into()));
        }
    }
    // tail: next term dominates remaining sum by a factor < 2 since |r_small| < 1/2
    let tail = term.abs().hi().shl(1);
    let mut res = sum.widen(&tail);
    for _ in 0..j {
        res = res.square();
    }
    Ok(res.shl(s).with_prec(w))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dy(man: i64, exp: i64) -> Dyadic {
        Dyadic::new(BigInt::from(man), exp)
    }

    // Containment up to f64 representation error: the reference value is the
    // nearest f64 to the true result, which can sit outside a much tighter
    // certified ball, so allow a relative slack of a few f64 ulps.
    fn contains(ball: &PrecReal, v: f64) {
        let slack = Dyadic::from_f64((v.abs() + 1.0) * 1e-12).unwrap();
        let d = Dyadic::from_f64(v).unwrap();
        assert!(
            ball.lo().sub(&slack) <= d && d <= ball.hi().add(&slack),
            "{v} not within slack of {ball}"
        );
    }

    #[test]
    fn basic_ops_contain_true_values() {
        let a = PrecReal::exact(dy(1, -1), 64); // 0.5
        let b = PrecReal::exact(dy(3, -2), 64); // 0.75
        contains(&a.add(&b), 1.25);
        contains(&a.sub(&b), -0.25);
        contains(&a.mul(&b), 0.375);
        contains(&a.div(&b).unwrap(), 0.5 / 0.75);
    }

    #[test]
    fn recip_is_certified() {
        let x = PrecReal::from_interval(&dy(199, -2), &dy(201, -2), 96); // ~50
        let r = x.recip().unwrap();
        contains(&r, 0.02);
        assert!(r.radius().is_positive());
        let bad = PrecReal::from_interval(&dy(-1, 0), &dy(1, 0), 64);
        assert!(bad.recip().is_err());
    }

    #[test]
    fn sqrt_brackets_the_root() {
        let x = PrecReal::from_i64(2, 128);
        let s = x.sqrt().unwrap();
        contains(&s, std::f64::consts::SQRT_2);
        let check = s.square();
        contains(&check, 2.0);
    }

    #[test]
    fn ln_matches_f64_on_moderate_values() {
        for v in [0.5f64, 1.0, 1.5, 2.0, 3.0, 10.0, 1e6, 1e-6] {
            let x = PrecReal::exact(Dyadic::from_f64(v).unwrap(), 96);
            let l = x.ln().unwrap();
            contains(&l, v.ln());
            assert!(l.radius() < &dy(1, -90));
        }
    }

    #[test]
    fn ln_of_value_extremely_close_to_one() {
        // 1 + 2^-200: ln is about 2^-200; series must shortcut cleanly
        let x = PrecReal::exact(Dyadic::one().add(&Dyadic::power_of_two(-200)), 256);
        let l = x.ln().unwrap();
        assert!(l.is_positive_certain());
        let expected = Dyadic::power_of_two(-200);
        assert!(l.lo() < expected && expected < l.hi().shl(1));
    }

    #[test]
    fn exp_matches_f64() {
        for v in [0.0f64, 1.0, -1.0, 0.5, 5.0, -10.0] {
            let x = PrecReal::exact(Dyadic::from_f64(v).unwrap(), 96);
            let e = x.exp().unwrap();
            contains(&e, v.exp());
        }
    }

    #[test]
    fn exp_ln_round_trip() {
        let x = PrecReal::from_i64(7, 128);
        let rt = x.ln().unwrap().exp().unwrap();
        contains(&rt, 7.0);
        assert!(rt.radius() < &dy(1, -100));
    }

    #[test]
    fn dist_to_nearest_int_is_lipschitz_sound() {
        let x = PrecReal::exact(dy(13, -2), 64); // 3.25
        let (n, lb, ub) = x.dist_to_nearest_int();
        assert_eq!(n, BigInt::from(3));
        assert_eq!(lb, dy(1, -2));
        assert_eq!(ub, dy(1, -2));
        // wide ball round a half-integer clamps to [0, 1/2]
        let y = PrecReal::from_interval(&dy(0, 0), &dy(1, 0), 64);
        let (_, lb, ub) = y.dist_to_nearest_int();
        assert_eq!(lb, Dyadic::zero());
        assert_eq!(ub, Dyadic::power_of_two(-1));
    }

    #[test]
    fn certified_nearest_integer() {
        let x = PrecReal::exact(dy(999, -2), 64); // 249.75
        assert_eq!(x.round_nearest_certified().unwrap(), BigInt::from(250));
        let wide = PrecReal::from_interval(&dy(1, -1), &dy(3, -1), 64); // [0.5, 1.5]
        assert!(wide.round_nearest_certified().is_err());
    }

    #[test]
    fn comparisons_are_tri_state() {
        let a = PrecReal::from_interval(&dy(1, 0), &dy(2, 0), 64);
        let b = PrecReal::from_interval(&dy(3, 0), &dy(4, 0), 64);
        assert_eq!(a.cmp_certain(&b), Some(Ordering::Less));
        assert_eq!(b.cmp_certain(&a), Some(Ordering::Greater));
        let c = PrecReal::from_interval(&dy(3, -1), &dy(5, -1), 64);
        assert_eq!(a.cmp_certain(&c), None);
    }

    #[test]
    fn pow_u32_by_squaring() {
        let x = PrecReal::from_ratio(&BigInt::from(81), &BigInt::from(100), 128).unwrap();
        let p = x.pow_u32(29);
        contains(&p, 0.81f64.powi(29));
    }

    mod soundness {
        use super::super::*;
        use num_rational::BigRational;
        use num_traits::One;
        use proptest::prelude::*;

        fn rational(n: i64, d: i64) -> BigRational {
            BigRational::new(BigInt::from(n), BigInt::from(d))
        }

        fn as_rational(d: &Dyadic) -> BigRational {
            let man = d.mantissa().clone();
            let e = d.exponent();
            if e >= 0 {
                BigRational::from_integer(man << e as u64)
            } else {
                BigRational::new(man, BigInt::one() << (-e) as u64)
            }
        }

        fn holds(ball: &PrecReal, exact: &BigRational) -> bool {
            as_rational(&ball.lo()) <= *exact && *exact <= as_rational(&ball.hi())
        }

        proptest! {
            /// Interval soundness: add/sub/mul enclosures contain the exact
            /// rational result at every precision, and doubling the working
            /// precision never widens an enclosure.
            #[test]
            fn arithmetic_contains_exact_rationals(
                an in -10_000i64..10_000, ad in 1i64..10_000,
                bn in -10_000i64..10_000, bd in 1i64..10_000,
                prec in 24u32..192,
            ) {
                let a = rational(an, ad);
                let b = rational(bn, bd);
                let ba = PrecReal::from_ratio(&BigInt::from(an), &BigInt::from(ad), prec).unwrap();
                let bb = PrecReal::from_ratio(&BigInt::from(bn), &BigInt::from(bd), prec).unwrap();
                prop_assert!(holds(&ba.add(&bb), &(&a + &b)));
                prop_assert!(holds(&ba.sub(&bb), &(&a - &b)));
                prop_assert!(holds(&ba.mul(&bb), &(&a * &b)));
                let coarse = ba.mul(&bb);
                let fine = ba.with_prec(prec * 2).mul(&bb.with_prec(prec * 2));
                prop_assert!(holds(&fine, &(&a * &b)));
                prop_assert!(fine.radius() <= coarse.radius());
            }

            /// Division and reciprocal enclosures contain the exact result
            /// whenever the denominator excludes zero.
            #[test]
            fn division_contains_exact_rationals(
                an in -10_000i64..10_000, ad in 1i64..10_000,
                bn in 1i64..10_000, bd in 1i64..10_000,
                prec in 24u32..192,
            ) {
                let a = rational(an, ad);
                let b = rational(bn, bd);
                let ba = PrecReal::from_ratio(&BigInt::from(an), &BigInt::from(ad), prec).unwrap();
                let bb = PrecReal::from_ratio(&BigInt::from(bn), &BigInt::from(bd), prec).unwrap();
                let q = ba.div(&bb).unwrap();
                prop_assert!(holds(&q, &(&a / &b)));
                let r = bb.recip().unwrap();
                prop_assert!(holds(&r, &(BigRational::one() / &b)));
            }

            /// The certified distance-to-nearest-integer brackets the truth.
            #[test]
            fn nearest_integer_distance_brackets(
                n in -1_000_000i64..1_000_000, d in 1i64..10_000, prec in 32u32..128,
            ) {
                let x = rational(n, d);
                let bx = PrecReal::from_ratio(&BigInt::from(n), &BigInt::from(d), prec).unwrap();
                let (nearest, lo, hi) = bx.dist_to_nearest_int();
                let dist = (&x - BigRational::from_integer(nearest)).abs();
                prop_assert!(as_rational(&lo) <= dist);
                prop_assert!(dist <= as_rational(&hi));
            }
        }
    }
}
