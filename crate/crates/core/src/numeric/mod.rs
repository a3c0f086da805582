//! Exact integers, Stirling numbers, outward-rounded intervals and the
//! `W_{-1}` branch. Everything that compares against an irrational threshold
//! goes through [`decide`], which escalates precision until the comparison is
//! settled or a cap is hit.

mod combinatorics;
mod dyadic;
mod interval;
mod lambert;

use serde::Serialize;

pub use combinatorics::{binomial, factorial, stirling2, surjections_alternating, BigCount};
pub use dyadic::{Dyadic, Round};
pub use interval::{RealInterval, MIN_PRECISION};
pub use lambert::lambert_w_minus1;

use crate::error::{Error, Result};

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 128;
/// Default ceiling for automatic precision doubling.
pub const DEFAULT_PRECISION_CAP: u32 = 512;

/// Enclosure of Euler's number with width at most `2^(4 - precision_bits)`.
pub fn e_interval(precision_bits: u32) -> Result<RealInterval> {
    if precision_bits < MIN_PRECISION {
        return Err(Error::InvalidInput(format!(
            "precision must be at least {MIN_PRECISION} bits, got {precision_bits}"
        )));
    }
    Ok(RealInterval::e(precision_bits))
}

/// Starting precision and escalation cap for rigorous comparisons.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Precision {
    pub start: u32,
    pub cap: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { start: DEFAULT_PRECISION, cap: DEFAULT_PRECISION_CAP }
    }
}

impl Precision {
    pub fn new(start: u32) -> Self {
        let start = start.max(MIN_PRECISION);
        Precision { start, cap: start.max(DEFAULT_PRECISION_CAP) }
    }

    pub fn with_cap(mut self, cap: u32) -> Self {
        self.cap = cap.max(self.start);
        self
    }

    /// The precisions tried in order: start, 2*start, ..., capped.
    pub fn ladder(&self) -> impl Iterator<Item = u32> {
        let cap = self.cap;
        std::iter::successors(Some(self.start), move |&p| (p < cap).then(|| (p * 2).min(cap)))
    }
}

/// Outcome of a rigorous `<= 0` test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    /// The quantity is certainly `<= 0`.
    Holds,
    /// The quantity is certainly `> 0`.
    Fails,
    /// Still straddles zero at the precision cap.
    Indeterminate,
}

impl Decision {
    pub fn holds(self) -> bool {
        self == Decision::Holds
    }
}

/// Decides `q <= 0` for a quantity evaluated by `eval` at a given precision,
/// doubling precision while the enclosure straddles zero. Returns the
/// decision with the last enclosure computed.
pub fn decide<F>(precision: Precision, mut eval: F) -> (Decision, RealInterval)
where
    F: FnMut(u32) -> RealInterval,
{
    let mut last = None;
    for p in precision.ladder() {
        let q = eval(p);
        if !q.hi().is_positive() {
            return (Decision::Holds, q);
        }
        if q.lo().is_positive() {
            return (Decision::Fails, q);
        }
        last = Some(q);
    }
    (Decision::Indeterminate, last.expect("ladder is nonempty"))
}

/// Rigorous integer floor of a quantity, escalating precision as needed.
pub fn decide_floor<F>(precision: Precision, mut eval: F) -> Result<num_bigint::BigInt>
where
    F: FnMut(u32) -> RealInterval,
{
    let mut last = None;
    for p in precision.ladder() {
        let q = eval(p);
        if let Some(f) = q.certain_floor() {
            return Ok(f);
        }
        last = Some(q);
    }
    Err(Error::Indeterminate(format!(
        "floor undecided at {} bits: {:?}",
        precision.cap,
        last.expect("ladder is nonempty")
    )))
}
