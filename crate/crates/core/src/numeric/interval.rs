//! Outward-rounded real intervals over dyadic endpoints.
//!
//! Every operation returns an interval that contains the exact result of the
//! same operation applied to any points of the operands. Endpoints are kept
//! at `precision_bits` significant bits; intermediate series evaluations run
//! at a guarded higher precision and are rounded outward at the end.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::dyadic::{Dyadic, Round};

/// Smallest precision accepted anywhere in the crate.
pub const MIN_PRECISION: u32 = 32;

/// A closed interval `[lo, hi]` known to contain some real value.
#[derive(Clone, PartialEq, Eq)]
pub struct RealInterval {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl RealInterval {
    /// Point interval at `x`, rounded outward if `x` has more than `prec` bits.
    pub fn point(x: Dyadic, prec: u32) -> Self {
        let prec = prec.max(MIN_PRECISION);
        RealInterval { lo: x.round(prec, Round::Down), hi: x.round(prec, Round::Up), prec }
    }

    /// Builds `[lo, hi]`; panics if `lo > hi`.
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: {lo:?} > {hi:?}");
        let prec = prec.max(MIN_PRECISION);
        RealInterval { lo: lo.round(prec, Round::Down), hi: hi.round(prec, Round::Up), prec }
    }

    pub fn from_int<T: Into<BigInt>>(v: T, prec: u32) -> Self {
        RealInterval::point(Dyadic::from_int(v), prec)
    }

    /// The exact binary value of `x`. `None` for NaN or infinities.
    pub fn from_f64(x: f64, prec: u32) -> Option<Self> {
        Dyadic::from_f64(x).map(|d| RealInterval::point(d, prec))
    }

    /// Enclosure of `num / den`.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let prec = prec.max(MIN_PRECISION);
        let n = Dyadic::from_int(num.clone());
        let d = Dyadic::from_int(den.clone());
        RealInterval { lo: n.div(&d, prec, Round::Down), hi: n.div(&d, prec, Round::Up), prec }
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        RealInterval::from_ratio(q.numer(), q.denom(), prec)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn precision_bits(&self) -> u32 {
        self.prec
    }

    /// Largest `f64` not above the lower endpoint.
    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64_dir(Round::Down)
    }

    /// Smallest `f64` not below the upper endpoint.
    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64_dir(Round::Up)
    }

    pub fn mid_f64(&self) -> f64 {
        self.lo.add(&self.hi).shl(-1).to_f64()
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        Dyadic::from_f64(x).map(|d| self.contains(&d)).unwrap_or(false)
    }

    /// Same interval re-rounded (outward) to a different precision.
    pub fn with_precision(&self, prec: u32) -> Self {
        RealInterval::new(self.lo.clone(), self.hi.clone(), prec)
    }

    /// Sign of every point in the interval, if it is the same for all of them.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Certainly `self <= other` for every pair of enclosed points.
    pub fn certainly_le(&self, other: &RealInterval) -> bool {
        self.hi <= other.lo
    }

    /// Certainly `self < other`.
    pub fn certainly_lt(&self, other: &RealInterval) -> bool {
        self.hi < other.lo
    }

    /// Both endpoints floor to the same integer.
    pub fn certain_floor(&self) -> Option<BigInt> {
        let a = self.lo.floor();
        (a == self.hi.floor()).then_some(a)
    }

    fn prec_with(&self, other: &RealInterval) -> u32 {
        self.prec.max(other.prec)
    }

    pub fn neg(&self) -> Self {
        RealInterval { lo: self.hi.neg(), hi: self.lo.neg(), prec: self.prec }
    }

    pub fn add(&self, other: &RealInterval) -> Self {
        let p = self.prec_with(other);
        RealInterval {
            lo: self.lo.add(&other.lo).round(p, Round::Down),
            hi: self.hi.add(&other.hi).round(p, Round::Up),
            prec: p,
        }
    }

    pub fn sub(&self, other: &RealInterval) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RealInterval) -> Self {
        let p = self.prec_with(other);
        let cands = [self.lo.mul(&other.lo), self.lo.mul(&other.hi), self.hi.mul(&other.lo), self.hi.mul(&other.hi)];
        let lo = cands.iter().min().unwrap().round(p, Round::Down);
        let hi = cands.iter().max().unwrap().round(p, Round::Up);
        RealInterval { lo, hi, prec: p }
    }

    /// Exact scaling by `2^k`.
    pub fn mul_pow2(&self, k: i64) -> Self {
        RealInterval { lo: self.lo.shl(k), hi: self.hi.shl(k), prec: self.prec }
    }

    pub fn sqr(&self) -> Self {
        let p = self.prec;
        let (a, b) = (self.lo.mul(&self.lo), self.hi.mul(&self.hi));
        let lo = if self.lo.is_negative() && self.hi.is_positive() { Dyadic::zero() } else { a.clone().min(b.clone()) };
        RealInterval { lo: lo.round(p, Round::Down), hi: a.max(b).round(p, Round::Up), prec: p }
    }

    /// `1 / self`; `None` when the interval contains zero.
    pub fn recip(&self) -> Option<Self> {
        if self.sign().is_none() || self.lo.is_zero() || self.hi.is_zero() {
            return None;
        }
        let one = Dyadic::one();
        let p = self.prec;
        Some(RealInterval { lo: one.div(&self.hi, p, Round::Down), hi: one.div(&self.lo, p, Round::Up), prec: p })
    }

    /// `self / other`; `None` when `other` contains zero.
    pub fn div(&self, other: &RealInterval) -> Option<Self> {
        let p = self.prec_with(other);
        if other.is_point() && self.is_point() {
            // Single rounding keeps exact quotients exact.
            let (n, d) = (&self.lo, &other.lo);
            if d.is_zero() {
                return None;
            }
            return Some(RealInterval { lo: n.div(d, p, Round::Down), hi: n.div(d, p, Round::Up), prec: p });
        }
        let r = other.with_precision(p).recip()?;
        Some(self.mul(&r))
    }

    /// Non-negative integer power by repeated squaring.
    pub fn powi(&self, n: u64) -> Self {
        let mut result = RealInterval::from_int(1, self.prec);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        result
    }

    /// Hull of two intervals.
    pub fn hull(&self, other: &RealInterval) -> Self {
        RealInterval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            prec: self.prec_with(other),
        }
    }

    pub fn max(&self, other: &RealInterval) -> Self {
        RealInterval {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            prec: self.prec_with(other),
        }
    }

    /// `e^self`.
    pub fn exp(&self) -> Self {
        let p = self.prec;
        let lo = exp_point(&self.lo, p).lo;
        let hi = exp_point(&self.hi, p).hi;
        RealInterval::new(lo, hi, p)
    }

    /// Natural logarithm; `None` unless the interval is strictly positive.
    pub fn ln(&self) -> Option<Self> {
        if !self.lo.is_positive() {
            return None;
        }
        let p = self.prec;
        let lo = ln_point(&self.lo, p).lo;
        let hi = ln_point(&self.hi, p).hi;
        Some(RealInterval::new(lo, hi, p))
    }

    /// Square root; `None` if the interval reaches below zero.
    pub fn sqrt(&self) -> Option<Self> {
        if self.lo.is_negative() {
            return None;
        }
        let p = self.prec;
        Some(RealInterval { lo: sqrt_dir(&self.lo, p, Round::Down), hi: sqrt_dir(&self.hi, p, Round::Up), prec: p })
    }

    /// Euler's number.
    pub fn e(prec: u32) -> Self {
        exp_point(&Dyadic::one(), prec.max(MIN_PRECISION))
    }

    /// Archimedes' constant, from Machin's formula.
    pub fn pi(prec: u32) -> Self {
        let prec = prec.max(MIN_PRECISION);
        let w = prec + 32;
        let a = atan_inv(5, w).mul_pow2(4);
        let b = atan_inv(239, w).mul_pow2(2);
        a.sub(&b).with_precision(prec)
    }

    /// `ln(1 + 1/q)` for an integer `q >= 1`, as `2 atanh(1/(2q + 1))`.
    /// Much cheaper than [`RealInterval::ln`] when `q` is large.
    pub fn ln1p_inv(q: u64, prec: u32) -> Self {
        assert!(q >= 1, "q must be positive");
        let prec = prec.max(MIN_PRECISION);
        let w = prec + 32;
        let z = RealInterval::from_ratio(&BigInt::one(), &(BigInt::from(q) * 2 + 1), w);
        atanh_series(&z, w).mul_pow2(1).with_precision(prec)
    }

    /// `ln 2`.
    pub fn ln2(prec: u32) -> Self {
        let prec = prec.max(MIN_PRECISION);
        let w = prec + 32;
        let z = RealInterval::from_ratio(&BigInt::one(), &BigInt::from(3), w);
        atanh_series(&z, w).mul_pow2(1).with_precision(prec)
    }
}

/// Enclosure of `e^x` for a dyadic point, at precision `prec`.
fn exp_point(x: &Dyadic, prec: u32) -> RealInterval {
    if x.is_zero() {
        return RealInterval::from_int(1, prec);
    }
    // Reduce to |r| <= 2^-8, sum the Taylor series, then square back.
    let mag = x.magnitude().unwrap();
    let s = (mag + 9).max(0);
    let w = prec + 24 + s as u32;
    let r = RealInterval::point(x.shl(-s), w);
    let mut sum = RealInterval::from_int(1, w);
    let mut term = RealInterval::from_int(1, w);
    let tiny = Dyadic::pow2(-(w as i64) - 8);
    let mut j: u64 = 1;
    loop {
        term = term.mul(&r).div(&RealInterval::from_int(j, w)).expect("j > 0");
        sum = sum.add(&term);
        let t = term.lo.abs().max(term.hi.abs());
        if t < tiny {
            // |r| <= 1/256, so the tail is below the last term times 256/255 < 2.
            let tail = t.shl(1);
            sum = RealInterval::new(sum.lo.sub(&tail), sum.hi.add(&tail), w);
            break;
        }
        j += 1;
    }
    for _ in 0..s {
        sum = sum.sqr();
    }
    sum.with_precision(prec)
}

/// `sum_{j>=0} z^(2j+1)/(2j+1)` for |z| <= 1/2 (that is, `atanh z`).
fn atanh_series(z: &RealInterval, w: u32) -> RealInterval {
    let z2 = z.sqr();
    let mut pow = z.clone();
    let mut sum = z.clone();
    let tiny = Dyadic::pow2(-(w as i64) - 8);
    let mut j: u64 = 1;
    loop {
        pow = pow.mul(&z2);
        let term = pow.div(&RealInterval::from_int(2 * j + 1, w)).unwrap();
        sum = sum.add(&term);
        let t = term.lo.abs().max(term.hi.abs());
        if t < tiny {
            // Subsequent terms shrink by at least z^2 <= 1/4: tail < 4/3 * t.
            let tail = t.shl(1);
            return RealInterval::new(sum.lo.sub(&tail), sum.hi.add(&tail), w);
        }
        j += 1;
    }
}

/// `atan(1/q)` for an integer `q >= 2`.
fn atan_inv(q: u64, w: u32) -> RealInterval {
    let z = RealInterval::from_ratio(&BigInt::one(), &BigInt::from(q), w);
    let z2 = z.sqr();
    let mut pow = z.clone();
    let mut sum = z.clone();
    let tiny = Dyadic::pow2(-(w as i64) - 8);
    let mut j: u64 = 1;
    loop {
        pow = pow.mul(&z2);
        let term = pow.div(&RealInterval::from_int(2 * j + 1, w)).unwrap();
        sum = if j % 2 == 1 { sum.sub(&term) } else { sum.add(&term) };
        let t = term.lo.abs().max(term.hi.abs());
        if t < tiny {
            let tail = t;
            return RealInterval::new(sum.lo.sub(&tail), sum.hi.add(&tail), w);
        }
        j += 1;
    }
}

/// Enclosure of `ln x` for a positive dyadic point.
fn ln_point(x: &Dyadic, prec: u32) -> RealInterval {
    let w = prec + 32;
    // x = 2^k * y with y in [3/4, 3/2).
    let mut k = x.magnitude().unwrap();
    let mut y = x.shl(-k);
    if y >= Dyadic::from_f64(1.5).unwrap() {
        k += 1;
        y = y.shl(-1);
    }
    let one = Dyadic::one();
    let num = RealInterval::point(y.sub(&one), w);
    let den = RealInterval::point(y.add(&one), w);
    let z = num.div(&den).expect("y + 1 > 0");
    let mut result =
        if z.lo.is_zero() && z.hi.is_zero() { RealInterval::from_int(0, w) } else { atanh_series(&z, w).mul_pow2(1) };
    if k != 0 {
        let ln2 = RealInterval::ln2(w);
        result = result.add(&ln2.mul(&RealInterval::from_int(k, w)));
    }
    result.with_precision(prec)
}

fn sqrt_dir(x: &Dyadic, prec: u32, dir: Round) -> Dyadic {
    if x.is_zero() {
        return Dyadic::zero();
    }
    // x = m * 2^e; scale to an even exponent with at least 2*prec+4 mantissa bits.
    let mut e = x.exponent();
    let mut m = x.mantissa().clone();
    let want = 2 * prec as i64 + 4 - m.bits() as i64;
    let mut shift = want.max(0);
    if (e - shift) % 2 != 0 {
        shift += 1;
    }
    m <<= shift as usize;
    e -= shift;
    let r = m.sqrt();
    let r = if dir == Round::Up && &r * &r != m { r + 1 } else { r };
    Dyadic::new(r, e / 2).round(prec, dir)
}

impl fmt::Debug for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.17e}, {:.17e}]@{}", self.lo_f64(), self.hi_f64(), self.prec)
    }
}

impl fmt::Display for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            write!(f, "{}", self.lo.to_f64())
        } else {
            write!(f, "[{:e}, {:e}]", self.lo_f64(), self.hi_f64())
        }
    }
}

impl Serialize for RealInterval {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("RealInterval", 3)?;
        s.serialize_field("lo", &self.lo_f64())?;
        s.serialize_field("hi", &self.hi_f64())?;
        s.serialize_field("precision_bits", &self.prec)?;
        s.end()
    }
}
