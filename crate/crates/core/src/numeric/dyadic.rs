//! Exact binary rationals `m * 2^e` with explicit directed rounding.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction for an operation whose exact result does not fit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    /// Toward negative infinity.
    Down,
    /// Toward positive infinity.
    Up,
}

impl Round {
    pub fn flip(self) -> Round {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
        }
    }
}

/// The exact value `mant * 2^exp`. Normalized so the mantissa is odd (or the
/// value is zero with `exp == 0`), which makes structural equality numeric
/// equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    /// The same value as an exact rational.
    pub fn to_rational(&self) -> num_rational::BigRational {
        let m = num_rational::BigRational::from_integer(self.mant.clone());
        let p = num_rational::BigRational::from_integer(BigInt::one() << self.exp.unsigned_abs() as usize);
        if self.exp >= 0 {
            m * p
        } else {
            m / p
        }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Dyadic::new(v.into(), 0)
    }

    /// `2^exp`.
    pub fn pow2(exp: i64) -> Self {
        Dyadic { mant: BigInt::one(), exp }
    }

    /// Exact conversion; every finite `f64` is a dyadic rational.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Dyadic::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), raw_exp - 1075) };
        Some(Dyadic::new(BigInt::from(m) * sign, e))
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz as usize;
            self.exp += tz as i64;
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Number of significant bits of the mantissa.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// `floor(log2 |x|)`, or `None` for zero.
    pub fn magnitude(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.mant.bits() as i64 - 1 + self.exp)
        }
    }

    pub fn neg(&self) -> Self {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    /// Multiplication by `2^k`; always exact.
    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    pub fn add(&self, other: &Dyadic) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &other.mant << (other.exp - e) as usize;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Self {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    /// Round to at most `prec` significant bits in direction `dir`.
    pub fn round(&self, prec: u32, dir: Round) -> Self {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = (bits - prec as u64) as usize;
        let divisor = BigInt::one() << shift;
        let m = match dir {
            Round::Down => self.mant.div_floor(&divisor),
            Round::Up => -((-&self.mant).div_floor(&divisor)),
        };
        Dyadic::new(m, self.exp + shift as i64)
    }

    /// `self / other` rounded in direction `dir` to `prec` significant bits.
    /// Exact whenever the quotient is a dyadic fitting in `prec` bits.
    pub fn div(&self, other: &Dyadic, prec: u32, dir: Round) -> Self {
        assert!(!other.is_zero(), "division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // The other mantissa is odd, so an exact dyadic quotient exists only
        // when it divides the numerator mantissa; padding by `prec + 2` extra
        // bits makes the integer quotient carry at least `prec + 1` bits.
        let shift = (prec as i64 + 2 + other.mant.bits() as i64 - self.mant.bits() as i64).max(0);
        let num = &self.mant << shift as usize;
        let (q, r) = num.div_mod_floor(&other.mant);
        let q = match dir {
            Round::Down => q,
            Round::Up if r.is_zero() => q,
            Round::Up => q + 1,
        };
        // `q` may carry a floor/ceil correction; re-rounding keeps the
        // direction because both steps move the same way.
        Dyadic::new(q, self.exp - shift - other.exp).round(prec, dir)
    }

    /// Integer floor.
    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as usize
        } else {
            self.mant.div_floor(&(BigInt::one() << (-self.exp) as usize))
        }
    }

    /// Integer ceiling.
    pub fn ceil(&self) -> BigInt {
        -(self.neg().floor())
    }

    /// Conversion to the nearest-below (`Down`) or nearest-above (`Up`) `f64`.
    pub fn to_f64_dir(&self, dir: Round) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = self.round(53, dir);
        let m = r.mant.to_f64().expect("53-bit mantissa fits");
        let v = scale_f64(m, r.exp);
        match (dir, v.is_finite()) {
            (_, false) => v,
            (Round::Down, true) => {
                if Dyadic::from_f64(v).map(|d| d > *self).unwrap_or(false) {
                    v.next_down()
                } else {
                    v
                }
            }
            (Round::Up, true) => {
                if Dyadic::from_f64(v).map(|d| d < *self).unwrap_or(false) {
                    v.next_up()
                } else {
                    v
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = self.round(64, Round::Down);
        scale_f64(r.mant.to_f64().expect("64-bit mantissa fits"), r.exp)
    }
}

fn scale_f64(m: f64, exp: i64) -> f64 {
    // powi on 2.0 underflows or overflows gracefully; split to avoid spurious
    // overflow of the intermediate power when m is large.
    let mut v = m;
    let mut e = exp;
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
    }
    v * 2f64.powi(e as i32)
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.signum(), other.signum()) {
            (a, b) if a != b => a.cmp(&b),
            (0, 0) => Ordering::Equal,
            (s, _) => {
                // Same nonzero sign: compare magnitudes first, cheaply.
                let (ma, mb) = (self.magnitude().unwrap(), other.magnitude().unwrap());
                if ma != mb {
                    let ord = ma.cmp(&mb);
                    return if s > 0 { ord } else { ord.reverse() };
                }
                self.sub(other).signum().cmp(&0)
            }
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_round_trip_is_exact() {
        for &x in &[0.1, -3.75, 1e-300, 5e-324, 1.7976931348623157e308, 2.0] {
            let d = Dyadic::from_f64(x).unwrap();
            assert_eq!(d.to_f64_dir(Round::Down), x);
            assert_eq!(d.to_f64_dir(Round::Up), x);
        }
    }

    #[test]
    fn division_is_exact_when_representable() {
        let a = Dyadic::from_int(1);
        let b = Dyadic::from_int(4);
        assert_eq!(a.div(&b, 64, Round::Down), Dyadic::pow2(-2));
        assert_eq!(a.div(&b, 64, Round::Up), Dyadic::pow2(-2));
    }

    #[test]
    fn division_brackets_one_third() {
        let a = Dyadic::from_int(1);
        let b = Dyadic::from_int(3);
        let lo = a.div(&b, 40, Round::Down);
        let hi = a.div(&b, 40, Round::Up);
        assert!(lo < hi);
        // 3*lo < 1 < 3*hi
        assert!(lo.mul(&b) < a);
        assert!(hi.mul(&b) > a);
        assert!(hi.sub(&lo) <= Dyadic::pow2(-40));
    }

    #[test]
    fn rounding_directions() {
        let x = Dyadic::from_int(0b1011); // 11
        assert_eq!(x.round(2, Round::Down), Dyadic::from_int(8));
        assert_eq!(x.round(2, Round::Up), Dyadic::from_int(12));
        let y = x.neg();
        assert_eq!(y.round(2, Round::Down), Dyadic::from_int(-12));
        assert_eq!(y.round(2, Round::Up), Dyadic::from_int(-8));
    }

    #[test]
    fn floor_and_ceil() {
        let x = Dyadic::from_f64(-2.5).unwrap();
        assert_eq!(x.floor(), BigInt::from(-3));
        assert_eq!(x.ceil(), BigInt::from(-2));
        assert_eq!(Dyadic::from_int(7).floor(), BigInt::from(7));
    }

    #[test]
    fn ordering_matches_f64() {
        let vals = [-3.0, -0.5, 0.0, 1e-10, 0.25, 7.0];
        for a in vals {
            for b in vals {
                let (da, db) = (Dyadic::from_f64(a).unwrap(), Dyadic::from_f64(b).unwrap());
                assert_eq!(da.cmp(&db), a.partial_cmp(&b).unwrap(), "{a} vs {b}");
            }
        }
    }
}
