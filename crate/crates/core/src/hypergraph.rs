//! Colouring hypergraphs: sufficient conditions for proper and rainbow
//! colourings, the thresholds `A_{r,k}` and `B_{r,k}`, and a constructive
//! solver on top of the resampling algorithm.
//!
//! Vertices are labelled `1..=n`; a colouring is a vector indexed by
//! `vertex - 1` with colours in `0..k`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::criteria::CriterionVerdict;
use crate::depgraph::{parse_usize, tokenize};
use crate::error::{Error, Result};
use crate::moser_tardos::{run, EventSpec, ExecutionStats, NamedPredicate, RunOptions, VariableSpace};
use crate::numeric::{
    decide, decide_floor, factorial, stirling2, surjections_alternating, Decision, Dyadic, Precision, RealInterval,
};

/// Largest `k^|h|` for which an event's bad set is listed explicitly.
pub const EXPLICIT_LIMIT: u64 = 1_000_000;

/// Largest `k^n` searched by [`exhaustive_coloring`].
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 24;

/// The `(r, k)` pairs of the comparison table, where `B = A + 1`.
pub const TABLE_PAIRS: [(u64, u64); 7] = [(21, 5), (22, 5), (19, 6), (28, 7), (35, 8), (41, 8), (48, 8)];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Builds a hypergraph on `1..=n`. Each edge is sorted; empty edges,
    /// repeated vertices within an edge and out-of-range labels are rejected.
    /// Repeated edges are kept (see [`Hypergraph::duplicate_edges`]).
    pub fn new(n: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        let mut out = Vec::with_capacity(edges.len());
        for (i, mut e) in edges.into_iter().enumerate() {
            if e.is_empty() {
                return Err(Error::InvalidInput(format!("edge {} is empty", i + 1)));
            }
            e.sort_unstable();
            if let Some(&v) = e.iter().find(|&&v| v == 0 || v > n) {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidInput(format!("edge {} repeats a vertex", i + 1)));
            }
            out.push(e);
        }
        Ok(Hypergraph { n, edges: out })
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// The common edge size, if all edges have the same size.
    pub fn uniformity(&self) -> Option<usize> {
        let r = self.edges.first()?.len();
        self.edges.iter().all(|e| e.len() == r).then_some(r)
    }

    pub fn min_edge_size(&self) -> Option<usize> {
        self.edges.iter().map(Vec::len).min()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.binary_search(&v).is_ok()).count()
    }

    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0usize; self.n + 1];
        for e in &self.edges {
            for &v in e {
                deg[v] += 1;
            }
        }
        deg.into_iter().max().unwrap_or(0)
    }

    /// Pairs `(i, j)`, `i < j`, of 1-based edge indices with identical vertex sets.
    pub fn duplicate_edges(&self) -> Vec<(usize, usize)> {
        let mut first: BTreeMap<&[usize], Vec<usize>> = BTreeMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            first.entry(e.as_slice()).or_default().push(i + 1);
        }
        let mut out: Vec<(usize, usize)> = first
            .values()
            .flat_map(|ids| ids.iter().enumerate().flat_map(move |(a, &i)| ids[a + 1..].iter().map(move |&j| (i, j))))
            .collect();
        out.sort_unstable();
        out
    }

    /// For each edge, the number of other edges (by index) it meets.
    pub fn intersection_counts(&self) -> Vec<usize> {
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); self.n + 1];
        for (i, e) in self.edges.iter().enumerate() {
            for &v in e {
                incident[v].push(i);
            }
        }
        let mut mark = vec![usize::MAX; self.edges.len()];
        self.edges
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let mut count = 0;
                for &v in e {
                    for &j in &incident[v] {
                        if j != i && mark[j] != i {
                            mark[j] = i;
                            count += 1;
                        }
                    }
                }
                count
            })
            .collect()
    }

    pub fn max_edge_intersections(&self) -> usize {
        self.intersection_counts().into_iter().max().unwrap_or(0)
    }
}

/// Parses `hypergraph n m` followed by `m` lines of vertex labels. `#`
/// starts a comment.
pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut last_line = 1;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let tokens = tokenize(raw.split('#').next().unwrap_or(""));
        if tokens.is_empty() {
            continue;
        }
        let Some((n, m)) = header else {
            if tokens.len() != 3 || tokens[0].1 != "hypergraph" {
                return Err(Error::parse(line_no, tokens[0].0, "expected `hypergraph n m`"));
            }
            header = Some((parse_usize(tokens[1], line_no)?, parse_usize(tokens[2], line_no)?));
            continue;
        };
        if edges.len() == m {
            return Err(Error::parse(line_no, tokens[0].0, format!("more than the declared {m} edges")));
        }
        let mut e = Vec::with_capacity(tokens.len());
        for t in &tokens {
            let v = parse_usize(*t, line_no)?;
            if v == 0 || v > n {
                return Err(Error::parse(line_no, t.0, format!("vertex {v} out of range 1..={n}")));
            }
            if e.contains(&v) {
                return Err(Error::parse(line_no, t.0, format!("vertex {v} repeated in an edge")));
            }
            e.push(v);
        }
        edges.push(e);
    }
    let (n, m) = header.ok_or_else(|| Error::parse(1, 1, "missing `hypergraph n m` header"))?;
    if edges.len() != m {
        return Err(Error::parse(last_line, 1, format!("expected {m} edges, found {}", edges.len())));
    }
    Hypergraph::new(n, edges)
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "hypergraph {} {}", self.n, self.edges.len())?;
        for e in &self.edges {
            let line: Vec<String> = e.iter().map(usize::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// `num^exp_num / den^exp_den`.
fn pow_ratio(num: u64, den: u64, exp_num: u64, exp_den: u64) -> BigRational {
    BigRational::new(
        num_traits::pow(BigInt::from(num), exp_num as usize),
        num_traits::pow(BigInt::from(den), exp_den as usize),
    )
}

/// Decides `e * d * p <= 1` for the Knuth-type criterion. With `d = 0`
/// the events are mutually independent and the test is `p < 1`.
fn knuth_verdict(p: &BigRational, d: u64, worst_event: Option<usize>, precision: Precision) -> CriterionVerdict {
    let one = BigRational::one();
    if d == 0 {
        let bits = precision.start;
        return CriterionVerdict {
            holds: if *p < one { Decision::Holds } else { Decision::Fails },
            lower_bound: None,
            positivity_only: true,
            slack: RealInterval::from_rational(&(p - &one), bits),
            worst_event,
        };
    }
    let (holds, slack) = decide(precision, |bits| {
        let threshold = RealInterval::e(bits).mul(&RealInterval::from_int(d, bits)).recip().expect("e d > 0");
        RealInterval::from_rational(p, bits).sub(&threshold)
    });
    CriterionVerdict { holds, lower_bound: None, positivity_only: true, slack, worst_event }
}

/// `e d <= k^(r-1)`: any hypergraph with edges of size at least `r_min`, each
/// meeting at most `d` others, is `k`-colourable. The slack is
/// `k^(1-r) - 1/(e d)`.
pub fn k_colorability_criterion(r_min: u64, d: u64, k: u64, precision: Precision) -> Result<CriterionVerdict> {
    if r_min < 1 {
        return Err(Error::InvalidInput("r_min must be at least 1".into()));
    }
    if k < 2 {
        return Err(Error::InvalidInput(format!("k must be at least 2, got {k}")));
    }
    Ok(knuth_verdict(&pow_ratio(1, k, 0, r_min - 1), d, None, precision))
}

/// The criterion applied to a concrete hypergraph, with `r_min` its smallest
/// edge and `d` its largest intersection count.
pub fn k_colorability_check(h: &Hypergraph, k: u64, precision: Precision) -> Result<CriterionVerdict> {
    let Some(r_min) = h.min_edge_size() else {
        return k_colorability_criterion(1, 0, k, precision);
    };
    let counts = h.intersection_counts();
    let (worst, &d) = counts.iter().enumerate().max_by_key(|&(i, c)| (c, std::cmp::Reverse(i))).expect("nonempty");
    let mut v = k_colorability_criterion(r_min as u64, d as u64, k, precision)?;
    v.worst_event = Some(worst + 1);
    Ok(v)
}

/// Smallest `r >= 2` with `e (r^2 - 1) <= k^(r-1)`, the size from which
/// `r`-uniform `r`-regular hypergraphs are `k`-colourable. `None` for `k < 2`.
///
/// For `k >= 2` the ratio `k^(r-1) / (r^2 - 1)` increases from `r = 3` on, and
/// passing at `r = 2` needs `k >= 3e`, so the first `r` found is a threshold.
pub fn r_regular_color_threshold(k: u64) -> Option<u64> {
    if k < 2 {
        return None;
    }
    let p = Precision::default();
    (2u64..).find(|&r| {
        let (d, _) = decide(p, |bits| {
            RealInterval::e(bits)
                .mul(&RealInterval::from_int(r * r - 1, bits))
                .sub(&RealInterval::from_int(k, bits).powi(r - 1))
        });
        d.holds()
    })
}

fn ser_rational<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

/// The rainbow-colouring quantities for `r`-uniform hypergraphs and `k`
/// colours.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RainbowThresholds {
    pub r: u64,
    pub k: u64,
    /// Union bound `k (1 - 1/k)^r` on the probability that an edge misses a colour.
    #[serde(serialize_with = "ser_rational")]
    pub d: BigRational,
    /// Exact probability `1 - k! S(r,k) / k^r` that an edge misses a colour.
    #[serde(serialize_with = "ser_rational")]
    pub n: BigRational,
    /// `floor(1 / (e D))`.
    pub a: u64,
    /// `floor(1 / (e N))`.
    pub b: u64,
}

pub fn union_bound_probability(r: u64, k: u64) -> BigRational {
    pow_ratio(k - 1, k, r, r) * BigInt::from(k)
}

/// `1 - k! S(r,k) / k^r`, via the Stirling recurrence.
pub fn missing_color_probability(r: u64, k: u64) -> BigRational {
    let onto = BigInt::from(factorial(k) * stirling2(r, k).into_inner());
    BigRational::one() - BigRational::new(onto, num_traits::pow(BigInt::from(k), r as usize))
}

/// `1 - k^-r sum_j (-1)^(k-j) C(k,j) j^r`.
pub fn missing_color_probability_alternating(r: u64, k: u64) -> BigRational {
    BigRational::one() - BigRational::new(surjections_alternating(r, k), num_traits::pow(BigInt::from(k), r as usize))
}

/// `floor(1 / (e q))` for a positive rational `q`.
fn floor_inv_e(q: &BigRational, precision: Precision) -> Result<u64> {
    let f = decide_floor(precision, |bits| {
        RealInterval::from_ratio(q.denom(), q.numer(), bits).div(&RealInterval::e(bits)).expect("e > 0")
    })?;
    u64::try_from(f).map_err(|_| Error::InvalidInput("threshold exceeds u64".into()))
}

pub fn rainbow_thresholds(r: u64, k: u64, precision: Precision) -> Result<RainbowThresholds> {
    if k < 2 || r < k {
        return Err(Error::InvalidInput(format!("need r >= k >= 2, got r = {r}, k = {k}")));
    }
    let d = union_bound_probability(r, k);
    let n = missing_color_probability(r, k);
    let a = floor_inv_e(&d, precision)?;
    let b = floor_inv_e(&n, precision)?;
    Ok(RainbowThresholds { r, k, d, n, a, b })
}

pub fn rainbow_table(precision: Precision) -> Result<Vec<RainbowThresholds>> {
    TABLE_PAIRS.iter().map(|&(r, k)| rainbow_thresholds(r, k, precision)).collect()
}

/// Every edge of an `r`-uniform `h` meets at most `A_{r,k}` others (or
/// `B_{r,k}` when `sharpened`), so some `k`-colouring makes every edge see
/// all colours. The slack is `p - 1/(e d)` with `p` the union bound or the
/// exact probability.
pub fn rainbow_criterion(h: &Hypergraph, k: u64, sharpened: bool, precision: Precision) -> Result<CriterionVerdict> {
    let r = match h.uniformity() {
        Some(r) => r as u64,
        None if h.edge_count() == 0 => k,
        None => return Err(Error::InvalidInput("rainbow colouring needs a uniform hypergraph".into())),
    };
    if k < 2 || r < k {
        return Err(Error::InvalidInput(format!("need r >= k >= 2, got r = {r}, k = {k}")));
    }
    let p = if sharpened { missing_color_probability(r, k) } else { union_bound_probability(r, k) };
    let counts = h.intersection_counts();
    let worst = counts.iter().enumerate().max_by_key(|&(i, c)| (c, std::cmp::Reverse(i)));
    let d = worst.map_or(0, |(_, &c)| c as u64);
    if d == 0 {
        // Independent events, each of probability N < 1.
        let exact = missing_color_probability(r, k);
        return Ok(knuth_verdict(&exact, 0, worst.map(|(i, _)| i + 1), precision));
    }
    Ok(knuth_verdict(&p, d, worst.map(|(i, _)| i + 1), precision))
}

/// Contrapositive certificates that an `r`-uniform hypergraph is `k`-colourable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChromaticReport {
    pub r: u64,
    pub k: u64,
    /// `k^(r-1) / e`.
    pub intersection_threshold: RealInterval,
    /// `k^(r-1) / (e r)`.
    pub degree_threshold: RealInterval,
    /// `Holds` when the observed intersections are at most the threshold.
    pub intersections_certify: Decision,
    pub degree_certify: Option<Decision>,
}

impl ChromaticReport {
    pub fn certifies_k_colorable(&self) -> bool {
        self.intersections_certify.holds() || self.degree_certify.is_some_and(Decision::holds)
    }
}

/// Checks observed maxima against the thresholds above which a
/// `(k+1)`-chromatic `r`-uniform hypergraph must go. Staying at or below
/// either certifies `k`-colourability.
pub fn chromatic_consequence_check(
    r: u64,
    k: u64,
    max_intersections: u64,
    max_degree: Option<f64>,
    precision: Precision,
) -> Result<ChromaticReport> {
    if r < 2 || k < 2 {
        return Err(Error::InvalidInput(format!("need r, k >= 2, got r = {r}, k = {k}")));
    }
    let deg = match max_degree {
        Some(x) if !(x.is_finite() && x >= 0.0) => {
            return Err(Error::InvalidInput(format!("degree {x} must be finite and nonnegative")))
        }
        Some(x) => Some(Dyadic::from_f64(x).expect("finite")),
        None => None,
    };
    let base = |bits: u32| RealInterval::from_int(k, bits).powi(r - 1).div(&RealInterval::e(bits)).expect("e > 0");
    let (intersections_certify, intersection_threshold) =
        decide(precision, |bits| RealInterval::from_int(max_intersections, bits).sub(&base(bits)));
    let rr = RealInterval::from_int(r, precision.start);
    let degree_certify = deg.map(|x| {
        decide(precision, |bits| {
            let t = base(bits).div(&RealInterval::from_int(r, bits)).expect("r > 0");
            RealInterval::point(x.clone(), bits).sub(&t)
        })
        .0
    });
    let bits = intersection_threshold.precision_bits();
    Ok(ChromaticReport {
        r,
        k,
        intersection_threshold: base(bits),
        degree_threshold: base(bits).div(&rr).expect("r > 0"),
        intersections_certify,
        degree_certify,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ColoringMode {
    /// No monochromatic edge.
    Proper,
    /// Every edge sees all `k` colours.
    Rainbow,
}

impl ColoringMode {
    pub fn name(self) -> &'static str {
        match self {
            ColoringMode::Proper => "proper",
            ColoringMode::Rainbow => "rainbow",
        }
    }
}

impl fmt::Display for ColoringMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ColoringMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "proper" => Ok(ColoringMode::Proper),
            "rainbow" => Ok(ColoringMode::Rainbow),
            _ => Err(Error::InvalidInput(format!("unknown colouring mode `{s}` (expected proper or rainbow)"))),
        }
    }
}

fn edge_ok(colors: &[u32], mode: ColoringMode, k: u64) -> bool {
    match mode {
        ColoringMode::Proper => !NamedPredicate::Monochromatic.eval(colors),
        ColoringMode::Rainbow => !NamedPredicate::NotPanchromatic { k: k as u32 }.eval(colors),
    }
}

/// Checks a colouring of `h` with colours `0..k`; the error names the first
/// offending edge.
pub fn validate_coloring(h: &Hypergraph, coloring: &[u32], k: u64, mode: ColoringMode) -> Result<()> {
    if coloring.len() != h.n {
        return Err(Error::LengthMismatch { what: "coloring", expected: h.n, actual: coloring.len() });
    }
    if let Some((v, &c)) = coloring.iter().enumerate().find(|&(_, &c)| u64::from(c) >= k) {
        return Err(Error::InvalidColoring(format!("vertex {} has colour {c} outside 0..{k}", v + 1)));
    }
    let mut buf = Vec::new();
    for (i, e) in h.edges.iter().enumerate() {
        buf.clear();
        buf.extend(e.iter().map(|&v| coloring[v - 1]));
        if !edge_ok(&buf, mode, k) {
            let what = match mode {
                ColoringMode::Proper => "is monochromatic",
                ColoringMode::Rainbow => "misses a colour",
            };
            return Err(Error::InvalidColoring(format!("edge {} {what}", i + 1)));
        }
    }
    Ok(())
}

/// First valid colouring in lexicographic order, or `None`.
pub fn exhaustive_coloring(h: &Hypergraph, k: u64, mode: ColoringMode) -> Result<Option<Vec<u32>>> {
    let total = (k as u128).checked_pow(h.n as u32).unwrap_or(u128::MAX);
    if k == 0 || total > u128::from(EXHAUSTIVE_LIMIT) {
        return Err(Error::SizeGuard { size: h.n, cap: EXHAUSTIVE_LIMIT as usize });
    }
    let mut c = vec![0u32; h.n];
    loop {
        if validate_coloring(h, &c, k, mode).is_ok() {
            return Ok(Some(c));
        }
        // Odometer increment, last vertex fastest.
        let mut i = h.n;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            c[i] += 1;
            if u64::from(c[i]) < k {
                break;
            }
            c[i] = 0;
        }
    }
}

/// Events of the random-colouring argument: one per edge, scope = the edge.
pub fn coloring_events(h: &Hypergraph, k: u64, mode: ColoringMode) -> Vec<EventSpec> {
    h.edges
        .iter()
        .map(|e| {
            let scope: Vec<usize> = e.iter().map(|&v| v - 1).collect();
            let named = match mode {
                ColoringMode::Proper => NamedPredicate::Monochromatic,
                ColoringMode::Rainbow => NamedPredicate::NotPanchromatic { k: k as u32 },
            };
            let size = (k as u128).checked_pow(e.len() as u32).unwrap_or(u128::MAX);
            if size > u128::from(EXPLICIT_LIMIT) {
                return EventSpec::named(scope, named);
            }
            let bad: Vec<Vec<u32>> = match mode {
                ColoringMode::Proper => (0..k as u32).map(|c| vec![c; e.len()]).collect(),
                ColoringMode::Rainbow => all_tuples(e.len(), k as u32).filter(|t| named.eval(t)).collect(),
            };
            EventSpec::explicit(scope, bad)
        })
        .collect()
}

fn all_tuples(len: usize, k: u32) -> impl Iterator<Item = Vec<u32>> {
    let total = u64::from(k).pow(len as u32);
    (0..total).map(move |mut x| {
        let mut t = vec![0u32; len];
        for slot in t.iter_mut().rev() {
            *slot = (x % u64::from(k)) as u32;
            x /= u64::from(k);
        }
        t
    })
}

/// Result of [`solve_coloring`]. `coloring` is `None` when the step budget ran
/// out; `criterion` says whether the sufficient condition applied.
#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub mode: ColoringMode,
    pub k: u64,
    pub seed: u64,
    pub coloring: Option<Vec<u32>>,
    pub stats: ExecutionStats,
    pub criterion: CriterionVerdict,
}

/// Colours `h` by resampling monochromatic (or colour-missing) edges. A
/// returned colouring has been validated.
pub fn solve_coloring(
    h: &Hypergraph,
    k: u64,
    mode: ColoringMode,
    seed: u64,
    options: RunOptions,
    precision: Precision,
) -> Result<SolveReport> {
    if k < 2 || k > u64::from(u32::MAX) {
        return Err(Error::InvalidInput(format!("k must lie in [2, 2^32), got {k}")));
    }
    let criterion = match mode {
        ColoringMode::Proper => k_colorability_check(h, k, precision)?,
        ColoringMode::Rainbow => rainbow_criterion(h, k, true, precision)?,
    };
    let space = VariableSpace::uniform(h.n, k as u32, seed)?;
    let events = coloring_events(h, k, mode);
    let (log, stats) = run(&space, &events, options)?;
    let coloring = if log.terminated {
        validate_coloring(h, &log.final_assignment, k, mode)?;
        Some(log.final_assignment)
    } else {
        None
    };
    Ok(SolveReport { mode, k, seed, coloring, stats, criterion })
}

/// Exact `P(edge of size r is monochromatic) = k^(1-r)`; with the union bound
/// of the rainbow case it is one of the two event probabilities used above.
pub fn monochromatic_probability(r: u64, k: u64) -> BigRational {
    if r == 0 {
        return BigRational::zero();
    }
    pow_ratio(1, k, 0, r - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const P: Precision = Precision { start: 128, cap: 512 };

    fn k4_triples() -> Hypergraph {
        Hypergraph::new(4, vec![vec![1, 2, 3], vec![1, 2, 4], vec![1, 3, 4], vec![2, 3, 4]]).unwrap()
    }

    fn fano() -> Hypergraph {
        let lines = [[1, 2, 3], [1, 4, 5], [1, 6, 7], [2, 4, 6], [2, 5, 7], [3, 4, 7], [3, 5, 6]];
        Hypergraph::new(7, lines.iter().map(|l| l.to_vec()).collect()).unwrap()
    }

    /// Edges meeting edge `i`, by pairwise set intersection.
    fn brute_intersections(h: &Hypergraph) -> Vec<usize> {
        let e = h.edges();
        (0..e.len())
            .map(|i| (0..e.len()).filter(|&j| j != i && e[i].iter().any(|v| e[j].contains(v))).count())
            .collect()
    }

    #[test]
    fn intersections() {
        let disjoint = Hypergraph::new(6, vec![vec![1, 2], vec![3, 4], vec![5, 6]]).unwrap();
        assert_eq!(disjoint.max_edge_intersections(), 0);
        assert_eq!(k4_triples().max_edge_intersections(), 3);
        let star = Hypergraph::new(9, (2..=9).map(|v| vec![1, v]).collect()).unwrap();
        assert_eq!(star.max_edge_intersections(), 7);
        assert_eq!(star.max_degree(), 8);
        assert_eq!(fano().max_edge_intersections(), 6);
        let dup = Hypergraph::new(3, vec![vec![1, 2], vec![2, 1], vec![3]]).unwrap();
        assert_eq!(dup.duplicate_edges(), vec![(1, 2)]);
        assert_eq!(dup.intersection_counts(), vec![1, 1, 0]);
        assert!(Hypergraph::new(3, vec![vec![]]).is_err());
        assert!(matches!(Hypergraph::new(3, vec![vec![4]]), Err(Error::VertexOutOfRange { vertex: 4, n: 3 })));
        assert!(Hypergraph::new(3, vec![vec![1, 1]]).is_err());
    }

    #[test]
    fn parse_round_trip() {
        let h = parse_hypergraph("# fano-ish\nhypergraph 4 2\n1 2 3\n\n4 2  # tail\n").unwrap();
        assert_eq!(h.edges(), &[vec![1, 2, 3], vec![2, 4]]);
        assert_eq!(parse_hypergraph(&h.to_string()).unwrap(), h);
        assert!(matches!(parse_hypergraph("hypergraph 3 1\n1 x\n"), Err(Error::Parse { line: 2, column: 3, .. })));
        assert!(matches!(parse_hypergraph("hypergraph 3 2\n1 2\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_hypergraph("hypergraph 3 1\n1 2\n3\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_hypergraph("hypergraph 3 1\n1 4\n"), Err(Error::Parse { line: 2, column: 3, .. })));
        assert!(matches!(parse_hypergraph("graph 3\n"), Err(Error::Parse { line: 1, column: 1, .. })));
    }

    #[test]
    fn k_colorability_examples() {
        // e * 94 ~ 255.5 <= 2^8; e * 95 ~ 258.2 > 2^8.
        assert!(k_colorability_criterion(9, 94, 2, P).unwrap().passes());
        assert!(!k_colorability_criterion(9, 95, 2, P).unwrap().passes());
        assert!(!k_colorability_criterion(2, 1, 2, P).unwrap().passes());
        let v = k_colorability_criterion(3, 0, 2, P).unwrap();
        assert!(v.passes() && v.positivity_only && v.lower_bound.is_none());
        // A single-vertex edge is always monochromatic.
        assert!(!k_colorability_criterion(1, 0, 2, P).unwrap().passes());
        // Uniform b-regular: d = b r - 1.
        for (r, b, k, expect) in [(9, 9, 2, true), (8, 8, 2, false), (5, 5, 3, true), (4, 4, 3, false)] {
            assert_eq!(k_colorability_criterion(r, b * r - 1, k, P).unwrap().passes(), expect, "r = {r}, k = {k}");
        }
        assert!(!k_colorability_check(&fano(), 2, P).unwrap().passes());
    }

    #[test]
    fn regular_thresholds() {
        let got: Vec<_> = [2, 3, 4, 5, 9].iter().map(|&k| r_regular_color_threshold(k).unwrap()).collect();
        assert_eq!(got, vec![9, 5, 4, 3, 2]);
        assert_eq!(r_regular_color_threshold(8), Some(3));
        assert_eq!(r_regular_color_threshold(1), None);
        // Holds for every r past the threshold.
        for k in 2..12u64 {
            let r0 = r_regular_color_threshold(k).unwrap();
            for r in r0..r0 + 30 {
                assert!(std::f64::consts::E * (r * r - 1) as f64 <= (k as f64).powi(r as i32 - 1));
            }
        }
    }

    #[test]
    fn rainbow_table_rows() {
        let expected = [
            (21, 5, 7, 8),
            (22, 5, 9, 10),
            (19, 6, 1, 2),
            (28, 7, 3, 4),
            (35, 8, 4, 5),
            (41, 8, 10, 11),
            (48, 8, 27, 28),
        ];
        let rows = rainbow_table(P).unwrap();
        for (row, (r, k, a, b)) in rows.iter().zip(expected) {
            assert_eq!((row.r, row.k, row.a, row.b), (r, k, a, b));
        }
        let t = rainbow_thresholds(2, 2, P).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!((t.d.clone(), t.n.clone(), t.a, t.b), (half.clone(), half, 0, 0));
        assert!(rainbow_thresholds(3, 4, P).is_err());
    }

    #[test]
    fn rainbow_chain_and_two_formulas() {
        let one = BigRational::one();
        for k in 2..=10u64 {
            for r in k..=60 {
                let t = rainbow_thresholds(r, k, P).unwrap();
                assert!(t.n <= t.d, "N > D at ({r}, {k})");
                assert!(&t.d / (&one + &t.d) <= t.n, "second-moment bound at ({r}, {k})");
                assert!(t.b == t.a || t.b == t.a + 1);
                assert_eq!(t.n, missing_color_probability_alternating(r, k));
            }
        }
    }

    #[test]
    fn rainbow_criterion_examples() {
        let disjoint = Hypergraph::new(12, vec![(1..=4).collect(), (5..=8).collect(), (9..=12).collect()]).unwrap();
        for k in 2..=4 {
            assert!(rainbow_criterion(&disjoint, k, false, P).unwrap().passes());
        }
        // Edge 1 = {1..21} meets edges 2..=m through vertex 1 only; the rest are disjoint.
        let spoke = |m: usize| {
            let mut edges = vec![(1..=21).collect::<Vec<_>>()];
            let mut next = 22;
            for _ in 1..m {
                let mut e = vec![1];
                e.extend(next..next + 20);
                next += 20;
                edges.push(e);
            }
            Hypergraph::new(next - 1, edges).unwrap()
        };
        let h8 = spoke(9);
        assert_eq!(h8.max_edge_intersections(), 8);
        assert!(!rainbow_criterion(&h8, 5, false, P).unwrap().passes());
        assert!(rainbow_criterion(&h8, 5, true, P).unwrap().passes());
        let h9 = spoke(10);
        assert!(!rainbow_criterion(&h9, 5, false, P).unwrap().passes());
        assert!(!rainbow_criterion(&h9, 5, true, P).unwrap().passes());
        assert!(rainbow_criterion(&k4_triples(), 2, false, P).is_ok());
        let mixed = Hypergraph::new(3, vec![vec![1, 2], vec![1, 2, 3]]).unwrap();
        assert!(rainbow_criterion(&mixed, 2, false, P).is_err());
    }

    #[test]
    fn chromatic_certificates() {
        let c = chromatic_consequence_check(3, 2, 1, Some(0.4), P).unwrap();
        assert!(c.intersections_certify.holds() && c.degree_certify == Some(Decision::Holds));
        assert!(c.certifies_k_colorable());
        assert!(
            c.intersection_threshold.contains_f64(4.0 / std::f64::consts::E)
                || c.intersection_threshold.width().to_f64() < 1e-30
        );
        let c = chromatic_consequence_check(3, 2, 2, Some(0.5), P).unwrap();
        assert_eq!(c.intersections_certify, Decision::Fails);
        assert_eq!(c.degree_certify, Some(Decision::Fails));
        assert!(!c.certifies_k_colorable());
        assert!(chromatic_consequence_check(1, 2, 0, None, P).is_err());
    }

    #[test]
    fn solver_examples() {
        let single = Hypergraph::new(3, vec![vec![1, 2, 3]]).unwrap();
        let rep = solve_coloring(&single, 2, ColoringMode::Proper, 1, RunOptions::default(), P).unwrap();
        let c = rep.coloring.unwrap();
        assert!(c.iter().any(|&x| x != c[0]));

        let k4 = k4_triples();
        assert!(exhaustive_coloring(&k4, 2, ColoringMode::Proper).unwrap().is_some());
        for seed in 0..20 {
            let rep = solve_coloring(&k4, 2, ColoringMode::Proper, seed, RunOptions::default(), P).unwrap();
            validate_coloring(&k4, rep.coloring.as_ref().unwrap(), 2, ColoringMode::Proper).unwrap();
        }

        let f = fano();
        assert!(exhaustive_coloring(&f, 2, ColoringMode::Proper).unwrap().is_none());
        let opts = RunOptions { max_steps: 5000, ..RunOptions::default() };
        let rep = solve_coloring(&f, 2, ColoringMode::Proper, 3, opts, P).unwrap();
        assert!(rep.coloring.is_none());
        assert_eq!(rep.stats.steps, 5000);
        assert!(!rep.criterion.passes());

        let rainbow = Hypergraph::new(8, vec![(1..=5).collect(), (4..=8).collect()]).unwrap();
        let rep = solve_coloring(&rainbow, 3, ColoringMode::Rainbow, 5, RunOptions::default(), P).unwrap();
        validate_coloring(&rainbow, rep.coloring.as_ref().unwrap(), 3, ColoringMode::Rainbow).unwrap();
    }

    #[test]
    fn large_edges_use_predicates() {
        let h = Hypergraph::new(25, vec![(1..=25).collect()]).unwrap();
        let ev = coloring_events(&h, 2, ColoringMode::Proper);
        assert!(matches!(ev[0].bad_set(), crate::moser_tardos::BadSet::Named(_)));
        let small = coloring_events(&k4_triples(), 3, ColoringMode::Rainbow);
        let crate::moser_tardos::BadSet::Explicit(set) = small[0].bad_set() else { panic!() };
        // 27 colourings of a triple, 6 of them rainbow.
        assert_eq!(set.len(), 21);
    }

    #[test]
    fn validator_rejects() {
        let k4 = k4_triples();
        assert!(matches!(
            validate_coloring(&k4, &[0, 0, 0, 1], 2, ColoringMode::Proper),
            Err(Error::InvalidColoring(_))
        ));
        assert!(matches!(
            validate_coloring(&k4, &[0, 1, 2, 1], 2, ColoringMode::Proper),
            Err(Error::InvalidColoring(_))
        ));
        assert!(matches!(validate_coloring(&k4, &[0, 1], 2, ColoringMode::Proper), Err(Error::LengthMismatch { .. })));
    }

    fn arb_hypergraph() -> impl Strategy<Value = Hypergraph> {
        (2usize..=10).prop_flat_map(|n| {
            prop::collection::vec(prop::collection::btree_set(1..=n, 1..=n.min(4)), 0..8).prop_map(move |es| {
                Hypergraph::new(n, es.into_iter().map(|s| s.into_iter().collect()).collect()).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn intersections_match_pairwise(h in arb_hypergraph()) {
            prop_assert_eq!(h.intersection_counts(), brute_intersections(&h));
        }

        #[test]
        fn solver_agrees_with_exhaustive(h in arb_hypergraph(), k in 2u64..=3, seed in any::<u64>()) {
            let exists = exhaustive_coloring(&h, k, ColoringMode::Proper).unwrap();
            let opts = RunOptions { max_steps: 20_000, ..RunOptions::default() };
            let rep = solve_coloring(&h, k, ColoringMode::Proper, seed, opts, P).unwrap();
            if let Some(c) = &rep.coloring {
                prop_assert!(validate_coloring(&h, c, k, ColoringMode::Proper).is_ok());
            }
            if exists.is_none() {
                prop_assert!(rep.coloring.is_none());
            }
            // Validator against brute definition on the exhaustive answer.
            if let Some(c) = exists {
                for e in h.edges() {
                    prop_assert!(e.iter().any(|&v| c[v - 1] != c[e[0] - 1]));
                }
            }
        }
    }
}
