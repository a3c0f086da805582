//! Lower bounds on diagonal Ramsey numbers from the symmetric criterion
//! `e p (d + 1) <= 1`, and the threshold `k0(eps)` past which the asymptotic
//! bound `(1 - eps) (sqrt 2 / e) k 2^(k/2)` is certified.

use std::f64::consts::{E, PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{binomial, decide, lambert_w_minus1, Decision, Dyadic, Precision, RealInterval};

/// Largest `k` accepted by [`max_n`].
pub const MAX_K: u64 = 64;

/// The `k` values of the comparison table.
pub const TABLE_KS: [u64; 7] = [10, 15, 20, 25, 30, 35, 40];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RamseyVariant {
    /// Bounds the number of dependent events by `C(k,2) C(n-2,k-2) - 1`.
    Ver3,
    /// Counts the dependent events exactly.
    Ver4,
}

impl RamseyVariant {
    pub const ALL: [RamseyVariant; 2] = [RamseyVariant::Ver3, RamseyVariant::Ver4];

    pub fn name(self) -> &'static str {
        match self {
            RamseyVariant::Ver3 => "ver3",
            RamseyVariant::Ver4 => "ver4",
        }
    }
}

impl fmt::Display for RamseyVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RamseyVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ver3" => Ok(RamseyVariant::Ver3),
            "ver4" => Ok(RamseyVariant::Ver4),
            _ => Err(Error::InvalidInput(format!("unknown Ramsey variant `{s}` (expected ver3 or ver4)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RamseyQuery {
    pub k: u64,
    pub variant: RamseyVariant,
}

impl RamseyQuery {
    pub fn new(k: u64, variant: RamseyVariant) -> Result<Self> {
        if k < 3 {
            return Err(Error::InvalidInput(format!("k must be at least 3, got {k}")));
        }
        Ok(RamseyQuery { k, variant })
    }
}

/// `d + 1` for the given variant: the number of `k`-subsets of `[n]` sharing
/// at least two vertices with a fixed one (ver4), or its upper bound (ver3).
pub fn dependency_count(k: u64, n: u64, variant: RamseyVariant) -> BigInt {
    match variant {
        RamseyVariant::Ver3 => binomial(k, 2).to_bigint() * binomial(n - 2, k - 2).to_bigint(),
        RamseyVariant::Ver4 => {
            let rest = n - k;
            binomial(n, k).to_bigint()
                - binomial(rest, k).to_bigint()
                - BigInt::from(k) * binomial(rest, k - 1).to_bigint()
        }
    }
}

/// Decides `e * count * 2^(1 - C(k,2)) <= 1`; `Holds` certifies `R(k,k) > n`.
pub fn condition(k: u64, n: u64, variant: RamseyVariant, precision: Precision) -> Result<Decision> {
    if k < 3 {
        return Err(Error::InvalidInput(format!("k must be at least 3, got {k}")));
    }
    if n < k {
        return Err(Error::InvalidInput(format!("n = {n} must be at least k = {k}")));
    }
    let count = dependency_count(k, n, variant);
    let shift = 1 - (k * (k - 1) / 2) as i64;
    let (d, _) = decide(precision, |bits| {
        RealInterval::from_int(count.clone(), bits)
            .mul(&RealInterval::e(bits))
            .mul_pow2(shift)
            .sub(&RealInterval::from_int(1, bits))
    });
    Ok(d)
}

pub fn ver3_condition(k: u64, n: u64, precision: Precision) -> Result<Decision> {
    condition(k, n, RamseyVariant::Ver3, precision)
}

pub fn ver4_condition(k: u64, n: u64, precision: Precision) -> Result<Decision> {
    condition(k, n, RamseyVariant::Ver4, precision)
}

/// Largest `n` for which the variant's condition holds, so `R(k,k) > n`.
/// Returns `k - 1` when the condition already fails at `n = k`.
pub fn max_n(q: RamseyQuery, precision: Precision) -> Result<u64> {
    if q.k < 3 || q.k > MAX_K {
        return Err(Error::InvalidInput(format!("k must lie in [3, {MAX_K}], got {}", q.k)));
    }
    let holds = |n: u64| -> Result<bool> {
        match condition(q.k, n, q.variant, precision)? {
            Decision::Holds => Ok(true),
            Decision::Fails => Ok(false),
            Decision::Indeterminate => Err(Error::Indeterminate(format!(
                "{} condition for k = {}, n = {n} undecided at {} bits",
                q.variant, q.k, precision.cap
            ))),
        }
    };
    if !holds(q.k)? {
        return Ok(q.k - 1);
    }
    // Invariant: holds(lo) and !holds(hi).
    let mut lo = q.k;
    let mut hi = 2 * q.k;
    while holds(hi)? {
        lo = hi;
        hi = hi.checked_mul(2).ok_or_else(|| Error::InvalidInput("search overflowed u64".into()))?;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if holds(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// One row of the comparison table. `ver3` and `ver4` are the lower bounds
/// `R(k,k) >= max_n + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub k: u64,
    pub ver3: u64,
    pub ver4: u64,
}

pub fn table_row(k: u64, precision: Precision) -> Result<TableRow> {
    let bound = |variant| Ok::<_, Error>(max_n(RamseyQuery::new(k, variant)?, precision)? + 1);
    Ok(TableRow { k, ver3: bound(RamseyVariant::Ver3)?, ver4: bound(RamseyVariant::Ver4)? })
}

pub fn table(ks: &[u64], precision: Precision) -> Result<Vec<TableRow>> {
    ks.iter().map(|&k| table_row(k, precision)).collect()
}

fn check_epsilon(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("epsilon = {eps} must lie in (0, 1)")))
    }
}

/// `(1 - eps) (sqrt 2 / e) k 2^(k/2)`.
pub fn asymptotic_lower_bound(k: u64, eps: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::InvalidInput(format!("epsilon = {eps} must lie in [0, 1)")));
    }
    Ok((1.0 - eps) * SQRT_2 / E * k as f64 * (k as f64 / 2.0).exp2())
}

/// `beta = (4 / (3 e^2)) (pi/3)^(1/3)`.
pub fn beta() -> f64 {
    4.0 / (3.0 * E * E) * (PI / 3.0).cbrt()
}

/// `sqrt(3 / (8 pi)) e^3`, the constant in front of `k^(3/2) (1-eps)^(k-2)`.
pub fn k0_constant() -> f64 {
    (3.0 / (8.0 * PI)).sqrt() * E.powi(3)
}

/// Closed form `max{3, ceil(3 W_{-1}(beta ln(1-eps) (1-eps)^(4/3)) / (2 ln(1-eps)))}`.
pub fn k0_exact(eps: f64) -> Result<u64> {
    check_epsilon(eps)?;
    let l = (-eps).ln_1p();
    let arg = beta() * l * (1.0 - eps).powf(4.0 / 3.0);
    let w = lambert_w_minus1(arg)?;
    let k = (3.0 * w / (2.0 * l)).ceil();
    Ok(if k < 3.0 { 3 } else { k as u64 })
}

/// Enclosure of `ln(C k^(3/2) (1-eps)^(k-2))`, with `eps` read as its exact
/// binary value.
fn ln_f(k: u64, one_minus: &RealInterval, bits: u32) -> RealInterval {
    let three = RealInterval::from_int(3, bits);
    let eight_pi = RealInterval::pi(bits).mul_pow2(3);
    let half_ln = three.div(&eight_pi).and_then(|r| r.ln()).expect("positive").mul_pow2(-1);
    let ln_c = half_ln.add(&three);
    let ln_k = RealInterval::from_int(k, bits).ln().expect("k >= 1");
    let ln_q = one_minus.with_precision(bits).ln().expect("1 - eps > 0");
    ln_c.add(&ln_k.mul(&RealInterval::from_ratio(&3.into(), &2.into(), bits)))
        .add(&ln_q.mul(&RealInterval::from_int(k as i64 - 2, bits)))
}

fn f_le_one(k: u64, one_minus: &RealInterval, precision: Precision) -> Result<bool> {
    match decide(precision, |bits| ln_f(k, one_minus, bits)).0 {
        Decision::Holds => Ok(true),
        Decision::Fails => Ok(false),
        Decision::Indeterminate => Err(Error::Indeterminate(format!("k0 inequality at k = {k} undecided"))),
    }
}

/// Smallest `k >= 3` with `C k^(3/2) (1-eps)^(k-2) <= 1`, decided with
/// interval arithmetic.
///
/// A floating-point scan proposes `k`; since `ln f` is concave in `k`, it is
/// certified by checking `f(k) <= 1` together with `f(3) > 1` and
/// `f(k-1) > 1`, which force `f > 1` on all of `[3, k-1]`.
pub fn k0_scan(eps: f64) -> Result<u64> {
    k0_scan_with(eps, Precision::default())
}

pub fn k0_scan_with(eps: f64, precision: Precision) -> Result<u64> {
    check_epsilon(eps)?;
    let one_minus = RealInterval::point(Dyadic::one().sub(&Dyadic::from_f64(eps).expect("finite")), precision.start);
    let ln_c = k0_constant().ln();
    let l = (-eps).ln_1p();
    let approx = |k: u64| ln_c + 1.5 * (k as f64).ln() + (k as f64 - 2.0) * l;
    let mut k = 3u64;
    while approx(k) > 0.0 {
        k += 1;
    }
    // Correct the float proposal near the crossing.
    while !f_le_one(k, &one_minus, precision)? {
        k += 1;
    }
    while k > 3 && f_le_one(k - 1, &one_minus, precision)? {
        k -= 1;
    }
    if k > 3 && f_le_one(3, &one_minus, precision)? {
        return Ok(3);
    }
    Ok(k)
}

/// `(3 / (2 eps)) [ln(1/(beta eps)) + ln ln(1/(beta eps))]`.
pub fn k0_approx(eps: f64) -> Result<f64> {
    check_epsilon(eps)?;
    let a = 1.0 / (beta() * eps);
    if a <= E {
        return Err(Error::Domain(format!("1/(beta eps) = {a} must exceed e")));
    }
    Ok(1.5 / eps * (a.ln() + a.ln().ln()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub epsilon: f64,
    pub k0_exact: u64,
    pub k0_approx: f64,
}

/// `k0` and its approximation over a grid. When the closed form cannot be
/// evaluated the scanned value is used instead.
pub fn k0_curve(grid: &[f64]) -> Result<Vec<CurvePoint>> {
    grid.iter()
        .map(|&epsilon| {
            let k0 = match k0_exact(epsilon) {
                Ok(k) => k,
                Err(Error::Domain(_)) => k0_scan(epsilon)?,
                Err(e) => return Err(e),
            };
            Ok(CurvePoint { epsilon, k0_exact: k0, k0_approx: k0_approx(epsilon)? })
        })
        .collect()
}

/// `n` log-spaced points from `lo` to `hi`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
        }
    }
}
