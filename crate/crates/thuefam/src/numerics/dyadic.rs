//! Exact dyadic rationals `man * 2^exp`.
//!
//! Dyadics form a subring of the rationals closed under addition and
//! multiplication, so polynomial evaluation at a dyadic point is exact.
//! All rounding is explicit and returns the bound on the committed error.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Rounding directions for [`Dyadic::round_to_bits`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    /// Towards negative infinity.
    Down,
    /// Towards positive infinity.
    Up,
    /// To nearest, ties away from zero.
    Nearest,
}

/// An exact dyadic rational.
#[derive(Clone, Debug)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(man: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { man, exp };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic {
            man: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            man: BigInt::from(1),
            exp: 0,
        }
    }

    /// 2^k for any integer k.
    pub fn power_of_two(k: i64) -> Self {
        Dyadic {
            man: BigInt::from(1),
            exp: k,
        }
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Dyadic::new(v, 0)
    }

    pub fn from_i64(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    /// Exact conversion; every finite f64 is a dyadic rational.
    pub fn from_f64(v: f64) -> Option<Self> {
        if !v.is_finite() {
            return None;
        }
        if v == 0.0 {
            return Some(Dyadic::zero());
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (man, exp) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Some(Dyadic::new(BigInt::from(sign * man as i64), exp))
    }

    fn normalize(&mut self) {
        if self.man.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.man.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.man >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.man.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.man.is_negative()
    }

    pub fn signum(&self) -> i32 {
        if self.man.is_zero() {
            0
        } else if self.man.is_positive() {
            1
        } else {
            -1
        }
    }

    /// Number of significant mantissa bits.
    pub fn mantissa_bits(&self) -> u64 {
        self.man.bits()
    }

    /// `mag` such that 2^(mag-1) <= |self| < 2^mag; None for zero.
    pub fn magnitude(&self) -> Option<i64> {
        if self.man.is_zero() {
            None
        } else {
            Some(self.exp + self.man.bits() as i64)
        }
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            man: -&self.man,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            man: self.man.abs(),
            exp: self.exp,
        }
    }

    pub fn add(&self, other: &Dyadic) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let exp = self.exp.min(other.exp);
        let a = &self.man << (self.exp - exp) as u64;
        let b = &other.man << (other.exp - exp) as u64;
        Dyadic::new(a + b, exp)
    }

    pub fn sub(&self, other: &Dyadic) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Self {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        Dyadic::new(&self.man * &other.man, self.exp + other.exp)
    }

    pub fn mul_bigint(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Dyadic::zero();
        }
        Dyadic::new(&self.man * k, self.exp)
    }

    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            man: self.man.clone(),
            exp: self.exp + k,
        }
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// Rounds to at most `bits` significant mantissa bits. Returns the
    /// rounded value and an upper bound on the absolute rounding error.
    /// BigInt's `>>` rounds toward negative infinity, so `Down` is a plain
    /// shift for either sign.
    pub fn round_to_bits(&self, bits: u32, dir: Round) -> (Dyadic, Dyadic) {
        let bits = (bits.max(1)) as u64;
        let cur = self.man.bits();
        if cur <= bits {
            return (self.clone(), Dyadic::zero());
        }
        let drop = cur - bits;
        let new_exp = self.exp + drop as i64;
        let floor_q = &self.man >> drop;
        let rem = &self.man - (&floor_q << drop);
        if rem.is_zero() {
            return (Dyadic::new(floor_q, new_exp), Dyadic::zero());
        }
        let man = match dir {
            Round::Down => floor_q,
            Round::Up => floor_q + 1,
            Round::Nearest => {
                let twice = rem << 1u32;
                let modulus = BigInt::from(1) << drop;
                match twice.cmp(&modulus) {
                    Ordering::Less => floor_q,
                    Ordering::Greater => floor_q + 1,
                    // tie: away from zero
                    Ordering::Equal => {
                        if self.man.is_negative() {
                            floor_q
                        } else {
                            floor_q + 1
                        }
                    }
                }
            }
        };
        (Dyadic::new(man, new_exp), Dyadic::power_of_two(new_exp))
    }

    /// Floor to an integer.
    pub fn floor_bigint(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << self.exp as u64
        } else {
            &self.man >> (-self.exp) as u64
        }
    }

    /// Ceiling to an integer.
    pub fn ceil_bigint(&self) -> BigInt {
        -(self.neg().floor_bigint())
    }

    /// Nearest integer, ties away from zero.
    pub fn round_nearest_bigint(&self) -> BigInt {
        if self.exp >= 0 {
            return &self.man << self.exp as u64;
        }
        let drop = (-self.exp) as u64;
        let floor_q = &self.man >> drop;
        let rem = &self.man - (&floor_q << drop);
        let twice = rem << 1u32;
        let modulus = BigInt::from(1) << drop;
        match twice.cmp(&modulus) {
            Ordering::Less => floor_q,
            Ordering::Greater => floor_q + 1,
            Ordering::Equal => {
                if self.man.is_negative() {
                    floor_q
                } else {
                    floor_q + 1
                }
            }
        }
    }

    /// Distance to the nearest integer together with that integer.
    pub fn dist_to_nearest_int(&self) -> (BigInt, Dyadic) {
        let nearest = self.round_nearest_bigint();
        let d = self.sub(&Dyadic::from_bigint(nearest.clone())).abs();
        (nearest, d)
    }

    pub fn min(&self, other: &Dyadic) -> Dyadic {
        if self.cmp(other) == Ordering::Greater {
            other.clone()
        } else {
            self.clone()
        }
    }

    pub fn max(&self, other: &Dyadic) -> Dyadic {
        if self.cmp(other) == Ordering::Less {
            other.clone()
        } else {
            self.clone()
        }
    }

    /// Approximate f64 value, saturating to ±inf / 0 outside the f64 range.
    pub fn to_f64(&self) -> f64 {
        if self.man.is_zero() {
            return 0.0;
        }
        let bits = self.man.bits();
        let (top, shift) = if bits > 63 {
            let s = bits - 63;
            ((&self.man >> s).to_i64().unwrap(), s as i64)
        } else {
            (self.man.to_i64().unwrap(), 0)
        };
        let e = self.exp + shift;
        if e > 1100 {
            return if self.man.is_positive() {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            };
        }
        if e < -1150 {
            return 0.0;
        }
        (top as f64) * (e as f64).exp2()
    }

    /// Exact scientific-decimal rendering with `sig` significant digits,
    /// e.g. "1.8626451e-9". Safe for values far outside the f64 range.
    pub fn to_sci_string(&self, sig: usize) -> String {
        if self.man.is_zero() {
            return "0".to_string();
        }
        let sig = sig.clamp(1, 50);
        let neg = self.man.is_negative();
        let man = self.man.abs();
        // man * 2^exp = digits * 10^(-s) with s = max(0, -exp)
        let (num, ten_shift) = if self.exp >= 0 {
            (man << self.exp as u64, 0i64)
        } else {
            let s = (-self.exp) as u64;
            (man * BigInt::from(5).pow(s as u32), s as i64)
        };
        let digits = num.to_string();
        let exp10 = digits.len() as i64 - 1 - ten_shift;
        let (head, tail) = digits.split_at(1);
        let mut mant = format!("{head}.{tail}");
        // truncate (display only; not used in any certified comparison)
        let keep = sig + 1; // digits plus the decimal point
        if mant.len() > keep {
            mant.truncate(keep);
        }
        while mant.ends_with('0') {
            mant.pop();
        }
        if mant.ends_with('.') {
            mant.pop();
        }
        let sign = if neg { "-" } else { "" };
        format!("{sign}{mant}e{exp10}")
    }
}

impl PartialEq for Dyadic {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Dyadic {}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let sa = self.signum();
        let sb = other.signum();
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // fast path on magnitudes before aligning mantissas
        let ma = self.magnitude().unwrap();
        let mb = other.magnitude().unwrap();
        if ma != mb {
            let mag_ord = ma.cmp(&mb);
            return if sa > 0 { mag_ord } else { mag_ord.reverse() };
        }
        let exp = self.exp.min(other.exp);
        let a = &self.man << (self.exp - exp) as u64;
        let b = &other.man << (other.exp - exp) as u64;
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci_string(17))
    }
}
