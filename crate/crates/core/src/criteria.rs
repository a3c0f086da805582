//! Sufficient conditions for avoiding every bad event, each returning a
//! verdict and, when it holds, a certified lower bound on the probability
//! that none of the events occurs.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::depgraph::{DependencyDigraph, DependencyGraph, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::numeric::{decide, Decision, Dyadic, Precision, RealInterval};

/// Outcome of one criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionVerdict {
    pub holds: Decision,
    /// Certified lower bound on the probability that no event occurs.
    pub lower_bound: Option<RealInterval>,
    /// The criterion holds but only certifies that the probability is positive.
    pub positivity_only: bool,
    /// Worst-case `P(A_i) - threshold_i` over the events.
    pub slack: RealInterval,
    /// Event attaining the worst slack, when there is one.
    pub worst_event: Option<usize>,
}

impl CriterionVerdict {
    pub fn passes(&self) -> bool {
        self.holds.holds()
    }
}

/// Parameters of the symmetric criteria: every event has probability at most
/// `p` and depends on at most `d` others, out of `n` events.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SymmetricParams {
    pub p: f64,
    pub d: u64,
    pub n: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetricVariant {
    /// `p <= 1/(4d)`.
    OriginalQuarter,
    /// `e p (d + 1) <= 1`.
    #[serde(rename = "e_d_plus_1")]
    EDPlus1,
    /// `p <= d^d / (d+1)^(d+1)`.
    Spencer,
    /// `e p (d + 1/2) <= 1`.
    Half,
    /// `e p d <= 1`; certifies positivity only.
    Knuth,
}

impl SymmetricVariant {
    pub const ALL: [SymmetricVariant; 5] = [
        SymmetricVariant::OriginalQuarter,
        SymmetricVariant::EDPlus1,
        SymmetricVariant::Spencer,
        SymmetricVariant::Half,
        SymmetricVariant::Knuth,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SymmetricVariant::OriginalQuarter => "original_quarter",
            SymmetricVariant::EDPlus1 => "e_d_plus_1",
            SymmetricVariant::Spencer => "spencer",
            SymmetricVariant::Half => "half",
            SymmetricVariant::Knuth => "knuth",
        }
    }
}

impl fmt::Display for SymmetricVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SymmetricVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SymmetricVariant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown symmetric variant `{s}`")))
    }
}

/// Checks `P(A_i) <= x_i * prod_{(i,j) arc} (1 - x_j)` for every event.
/// The bound on success is `prod (1 - x_i)`.
pub fn abstract_lll(probs: &[f64], d: &DependencyDigraph, x: &[f64], precision: Precision) -> Result<CriterionVerdict> {
    let probs = rationals(probs, "probs")?;
    let x = rationals(x, "x")?;
    abstract_lll_exact(&probs, d, &x, precision)
}

/// [`abstract_lll`] over exact rational inputs.
pub fn abstract_lll_exact(
    probs: &[BigRational],
    d: &DependencyDigraph,
    x: &[BigRational],
    precision: Precision,
) -> Result<CriterionVerdict> {
    let n = d.len();
    check_len("probs", probs.len(), n)?;
    check_len("x", x.len(), n)?;
    check_probabilities(probs)?;
    for (i, xi) in x.iter().enumerate() {
        if xi.is_negative() || *xi >= BigRational::one() {
            return Err(Error::InvalidInput(format!("x_{} = {xi} must lie in [0, 1)", i + 1)));
        }
    }
    let one = BigRational::one();
    let slacks = (1..=n).map(|i| {
        let rhs = d.out_neighbors(i).fold(x[i - 1].clone(), |acc, j| acc * (&one - &x[j - 1]));
        &probs[i - 1] - rhs
    });
    let (worst_event, worst) = worst_slack(slacks);
    let prec = precision.start;
    let holds = exact_decision(&worst);
    let lower_bound = holds.holds().then(|| {
        let bound = x.iter().fold(BigRational::one(), |acc, xi| acc * (&one - xi));
        RealInterval::from_rational(&bound, prec)
    });
    Ok(CriterionVerdict {
        holds,
        lower_bound,
        positivity_only: false,
        slack: RealInterval::from_rational(&worst, prec),
        worst_event,
    })
}

/// Threshold `t(d)` of a symmetric variant: the criterion reads `p <= t(d)`.
pub fn symmetric_threshold(variant: SymmetricVariant, d: u64, prec: u32) -> Result<RealInterval> {
    if d == 0 {
        return Err(Error::InvalidInput("symmetric thresholds need d >= 1".into()));
    }
    let int = |v: u64| RealInterval::from_int(v, prec);
    let e = RealInterval::e(prec);
    let t = match variant {
        SymmetricVariant::OriginalQuarter => RealInterval::from_ratio(&BigInt::one(), &(BigInt::from(d) * 4), prec),
        SymmetricVariant::EDPlus1 => e.mul(&int(d + 1)).recip().expect("positive"),
        SymmetricVariant::Spencer => {
            let ratio = RealInterval::from_ratio(&BigInt::from(d), &BigInt::from(d + 1), prec);
            ratio.powi(d).div(&int(d + 1)).expect("positive")
        }
        SymmetricVariant::Half => int(2).div(&e.mul(&int(2 * d + 1))).expect("positive"),
        SymmetricVariant::Knuth => e.mul(&int(d)).recip().expect("positive"),
    };
    Ok(t)
}

/// The symmetric criterion `variant` for `params`. With `d = 0` the events
/// are mutually independent and the check is `p < 1` with bound `(1 - p)^n`.
pub fn symmetric_check(
    params: SymmetricParams,
    variant: SymmetricVariant,
    precision: Precision,
) -> Result<CriterionVerdict> {
    let SymmetricParams { p, d, n } = params;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidInput(format!("p = {p} must lie in [0, 1]")));
    }
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let pd = Dyadic::from_f64(p).expect("finite");
    let prec = precision.start;
    if d == 0 {
        let one = Dyadic::one();
        let holds = if pd < one { Decision::Holds } else { Decision::Fails };
        let lower_bound = holds.holds().then(|| RealInterval::point(one.sub(&pd), prec).powi(n));
        return Ok(CriterionVerdict {
            holds,
            lower_bound,
            positivity_only: false,
            slack: RealInterval::point(pd.sub(&one), prec),
            worst_event: None,
        });
    }
    let (holds, slack) = decide(precision, |bits| {
        let t = symmetric_threshold(variant, d, bits).expect("d >= 1");
        RealInterval::point(pd.clone(), bits).sub(&t)
    });
    let knuth = variant == SymmetricVariant::Knuth;
    let lower_bound = (holds.holds() && !knuth).then(|| {
        let bits = slack.precision_bits();
        RealInterval::from_ratio(&BigInt::from(d), &BigInt::from(d + 1), bits).powi(n)
    });
    Ok(CriterionVerdict { holds, lower_bound, positivity_only: holds.holds() && knuth, slack, worst_event: None })
}

/// Shearer's `f(d)`: `1/2` for `d = 1`, else `(d-1)^(d-1) / d^d`.
pub fn shearer_f_exact(d: u64) -> Result<BigRational> {
    match d {
        0 => Err(Error::InvalidInput("f(d) needs d >= 1".into())),
        1 => Ok(BigRational::new(BigInt::one(), BigInt::from(2))),
        _ => Ok(BigRational::new(
            num_traits::pow(BigInt::from(d - 1), (d - 1) as usize),
            num_traits::pow(BigInt::from(d), d as usize),
        )),
    }
}

/// Enclosure of [`shearer_f_exact`]; a point whenever `f(d)` is dyadic.
pub fn shearer_f(d: u64, prec: u32) -> Result<RealInterval> {
    Ok(RealInterval::from_rational(&shearer_f_exact(d)?, prec))
}

/// Checks `P(A_i) * Z(Γ⁺(i)) <= y_i` for every vertex, where `Z(S)` sums
/// `prod_{j in I} y_j` over independent sets `I` of `G[S]`. The bound is
/// `1 / Z([n])`, reported only when the whole graph is within the cap.
pub fn cluster_expansion(
    probs: &[f64],
    g: &DependencyGraph,
    y: &[f64],
    precision: Precision,
) -> Result<CriterionVerdict> {
    let probs = rationals(probs, "probs")?;
    let y = rationals(y, "y")?;
    cluster_expansion_exact(&probs, g, &y, precision, DEFAULT_ENUMERATION_CAP)
}

/// [`cluster_expansion`] over exact rational inputs with an explicit cap.
pub fn cluster_expansion_exact(
    probs: &[BigRational],
    g: &DependencyGraph,
    y: &[BigRational],
    precision: Precision,
    cap: usize,
) -> Result<CriterionVerdict> {
    let n = g.len();
    check_len("probs", probs.len(), n)?;
    check_len("y", y.len(), n)?;
    check_probabilities(probs)?;
    check_positive(y)?;
    let mut slacks = Vec::with_capacity(n);
    for i in g.vertices() {
        let z = g.independence_weight_sum_exact(&g.closed_neighborhood(i)?, y, cap)?;
        slacks.push(&probs[i - 1] - &y[i - 1] / z);
    }
    let (worst_event, worst) = worst_slack(slacks);
    let prec = precision.start;
    let holds = exact_decision(&worst);
    let (lower_bound, positivity_only) = if !holds.holds() {
        (None, false)
    } else if n <= cap {
        let z = g.independence_weight_sum_exact(&g.all_vertices(), y, cap)?;
        (Some(RealInterval::from_rational(&z.recip(), prec)), false)
    } else {
        (None, true)
    };
    Ok(CriterionVerdict {
        holds,
        lower_bound,
        positivity_only,
        slack: RealInterval::from_rational(&worst, prec),
        worst_event,
    })
}

/// Cluster bound `1 / Z(G)` next to the product bound `prod 1/(1 + y_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClusterComparison {
    pub cluster_bound: RealInterval,
    pub product_bound: RealInterval,
    /// `cluster_bound >= product_bound`, decided exactly.
    pub cluster_dominates: bool,
    /// The substituted weights `x_i = y_i / (1 + y_i)`.
    pub x: Vec<RealInterval>,
}

pub fn cluster_vs_product(g: &DependencyGraph, y: &[f64], prec: u32) -> Result<ClusterComparison> {
    let y = rationals(y, "y")?;
    cluster_vs_product_exact(g, &y, prec)
}

pub fn cluster_vs_product_exact(g: &DependencyGraph, y: &[BigRational], prec: u32) -> Result<ClusterComparison> {
    check_len("y", y.len(), g.len())?;
    check_positive(y)?;
    let z = g.independence_weight_sum_exact(&g.all_vertices(), y, DEFAULT_ENUMERATION_CAP)?;
    let one = BigRational::one();
    let prod = y.iter().fold(BigRational::one(), |acc, yi| acc * (&one + yi));
    let x = y.iter().map(|yi| RealInterval::from_rational(&(yi / (&one + yi)), prec)).collect();
    Ok(ClusterComparison {
        cluster_bound: RealInterval::from_rational(&z.recip(), prec),
        product_bound: RealInterval::from_rational(&prod.recip(), prec),
        cluster_dominates: z <= prod,
        x,
    })
}

/// Result of checking `d^d/(d+1)^(d+1) >= 1/(e(d + 1/2))` for `d = 1..=d_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HalfShiftReport {
    pub d_max: u64,
    pub first_failure: Option<u64>,
    pub optimality: Vec<OptimalityWitness>,
}

impl HalfShiftReport {
    /// The inequality held for every `d` and every witness refutes `alpha = 0.49`.
    pub fn holds(&self) -> bool {
        self.first_failure.is_none() && self.optimality.iter().all(|w| w.smaller_alpha_fails)
    }
}

/// `gap(d) = (d+1)^(d+1) / (e d^d) - d`; the inequality with `d + alpha`
/// in place of `d + 1/2` fails at `d` whenever `alpha < gap(d)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OptimalityWitness {
    pub d: u64,
    pub gap: RealInterval,
    pub smaller_alpha_fails: bool,
}

/// Witnesses are taken at these `d`.
pub const OPTIMALITY_WITNESSES: [u64; 3] = [100, 1_000, 10_000];

pub fn half_shift_check(d_max: u64, precision: Precision) -> Result<HalfShiftReport> {
    if d_max == 0 {
        return Err(Error::InvalidInput("d_max must be at least 1".into()));
    }
    let mut first_failure = None;
    for d in 1..=d_max {
        // The inequality is phi(d) >= 0 after taking logarithms.
        let (dec, q) = decide(precision, |p| phi(d, p).neg());
        match dec {
            Decision::Holds => {}
            Decision::Fails => {
                first_failure = Some(d);
                break;
            }
            Decision::Indeterminate => {
                return Err(Error::Indeterminate(format!("phi({d}) straddles zero: {q}")));
            }
        }
    }
    let alpha = BigRational::new(BigInt::from(49), BigInt::from(100));
    let optimality = OPTIMALITY_WITNESSES
        .iter()
        .map(|&d| {
            let (dec, q) = decide(precision, |p| RealInterval::from_rational(&alpha, p).sub(&optimality_gap(d, p)));
            let bits = q.precision_bits();
            OptimalityWitness {
                d,
                gap: optimality_gap(d, bits),
                smaller_alpha_fails: dec.holds() && q.hi().is_negative(),
            }
        })
        .collect();
    Ok(HalfShiftReport { d_max, first_failure, optimality })
}

/// `ln(1 + 1/(2d)) - (d+1) ln(1 + 1/d) + 1`.
fn phi(d: u64, prec: u32) -> RealInterval {
    let la = RealInterval::ln1p_inv(2 * d, prec);
    let lb = RealInterval::ln1p_inv(d, prec);
    la.sub(&lb.mul(&RealInterval::from_int(d + 1, prec))).add(&RealInterval::from_int(1, prec))
}

/// `(d+1) exp(d ln(1 + 1/d) - 1) - d`.
fn optimality_gap(d: u64, prec: u32) -> RealInterval {
    let one = RealInterval::from_int(1, prec);
    let inner = RealInterval::ln1p_inv(d, prec).mul(&RealInterval::from_int(d, prec)).sub(&one);
    inner.exp().mul(&RealInterval::from_int(d + 1, prec)).sub(&RealInterval::from_int(d, prec))
}

fn rationals(v: &[f64], what: &str) -> Result<Vec<BigRational>> {
    v.iter()
        .enumerate()
        .map(|(i, &x)| {
            Dyadic::from_f64(x)
                .map(|d| d.to_rational())
                .ok_or_else(|| Error::InvalidInput(format!("{what}[{}] = {x} is not finite", i + 1)))
        })
        .collect()
}

fn check_len(what: &'static str, actual: usize, expected: usize) -> Result<()> {
    if actual == expected {
        Ok(())
    } else {
        Err(Error::LengthMismatch { what, expected, actual })
    }
}

fn check_probabilities(probs: &[BigRational]) -> Result<()> {
    for (i, p) in probs.iter().enumerate() {
        if p.is_negative() || *p > BigRational::one() {
            return Err(Error::InvalidInput(format!("P(A_{}) = {p} must lie in [0, 1]", i + 1)));
        }
    }
    Ok(())
}

fn check_positive(y: &[BigRational]) -> Result<()> {
    for (i, yi) in y.iter().enumerate() {
        if !yi.is_positive() {
            return Err(Error::InvalidInput(format!("y_{} = {yi} must be positive", i + 1)));
        }
    }
    Ok(())
}

/// Largest slack and the 1-based event attaining it first; zero when empty.
fn worst_slack(slacks: impl IntoIterator<Item = BigRational>) -> (Option<usize>, BigRational) {
    let mut best: Option<(usize, BigRational)> = None;
    for (i, s) in slacks.into_iter().enumerate() {
        if best.as_ref().is_none_or(|(_, b)| s > *b) {
            best = Some((i + 1, s));
        }
    }
    match best {
        Some((i, s)) => (Some(i), s),
        None => (None, BigRational::zero()),
    }
}

fn exact_decision(slack: &BigRational) -> Decision {
    if slack.is_positive() {
        Decision::Fails
    } else {
        Decision::Holds
    }
}
