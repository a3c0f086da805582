use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

/// An exact nonnegative integer count.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BigCount(pub BigUint);

impl BigCount {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_inner(self) -> BigUint {
        self.0
    }

    pub fn to_bigint(&self) -> BigInt {
        BigInt::from(self.0.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        BigCount(BigUint::from(v))
    }
}

impl fmt::Debug for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for BigCount {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0.to_string())
    }
}

impl PartialEq<u64> for BigCount {
    fn eq(&self, other: &u64) -> bool {
        self.0 == BigUint::from(*other)
    }
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigCount {
    if k > n {
        return BigCount(BigUint::zero());
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    // acc * (n - i) / (i + 1) stays integral: it is C(n, i + 1) * (i + 1)! / (i + 1)!.
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    BigCount(acc)
}

/// Stirling number of the second kind, `S(n, k)`, by the triangular
/// recurrence `S(n, k) = k S(n-1, k) + S(n-1, k-1)`.
///
/// `S(n, k) = 0` whenever `k` is not in `1..=n`, except `S(0, 0) = 1`.
pub fn stirling2(n: u64, k: u64) -> BigCount {
    if n == 0 && k == 0 {
        return BigCount(BigUint::one());
    }
    if k == 0 || k > n {
        return BigCount(BigUint::zero());
    }
    let k = k as usize;
    // row[j] holds S(m, j) for the current m, j in 0..=k.
    let mut row = vec![BigUint::zero(); k + 1];
    row[0] = BigUint::one();
    for m in 1..=n {
        let top = (m as usize).min(k);
        for j in (1..=top).rev() {
            let prev = std::mem::take(&mut row[j]);
            row[j] = prev * j + &row[j - 1];
        }
        row[0] = BigUint::zero();
    }
    BigCount(std::mem::take(&mut row[k]))
}

/// `k! S(r, k)` from the alternating sum `sum_j (-1)^(k-j) C(k, j) j^r`,
/// the number of surjections from an `r`-set onto a `k`-set.
pub fn surjections_alternating(r: u64, k: u64) -> BigInt {
    let mut total = BigInt::zero();
    for j in 0..=k {
        let term = binomial(k, j).to_bigint() * num_traits::pow(BigInt::from(j), r as usize);
        if (k - j).is_multiple_of(2) {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}
