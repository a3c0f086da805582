//! Directed cycles of length divisible by `k`: the degree conditions that
//! guarantee one, and a constructive pipeline that colours the vertices mod
//! `k` with the resampling algorithm and then walks along colour successors.
//!
//! Vertices are labelled `1..=n`; colourings are indexed by `vertex - 1`.

use serde::{Deserialize, Serialize};

use crate::criteria::CriterionVerdict;
use crate::depgraph::DependencyDigraph;
use crate::error::{Error, Result};
use crate::moser_tardos::{run, EventSpec, ExecutionStats, NamedPredicate, RunOptions, VariableSpace};
use crate::numeric::{decide, decide_floor, Precision, RealInterval};

/// A simple digraph; the same type the dependency-graph reader produces.
pub type Digraph = DependencyDigraph;

/// Minimum out-degree and maximum in-degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeProfile {
    pub delta: usize,
    pub max_in: usize,
}

pub fn in_degrees(d: &Digraph) -> Vec<usize> {
    let mut deg = vec![0; d.len()];
    for (_, j) in d.arcs() {
        deg[j - 1] += 1;
    }
    deg
}

pub fn degree_profile(d: &Digraph) -> DegreeProfile {
    let delta = (1..=d.len()).map(|v| d.out_degree(v)).min().unwrap_or(0);
    let max_in = in_degrees(d).into_iter().max().unwrap_or(0);
    DegreeProfile { delta, max_in }
}

/// `e (delta Delta + 1) (1 - 1/k)^delta <= 1`, or with `relaxed` the
/// positivity-only `e delta Delta (1 - 1/k)^delta <= 1`. The slack is
/// `(1 - 1/k)^delta` minus the per-event threshold.
pub fn alon_linial_condition(
    delta: u64,
    max_in: u64,
    k: u64,
    relaxed: bool,
    precision: Precision,
) -> Result<CriterionVerdict> {
    if delta == 0 || max_in == 0 {
        return Err(Error::InvalidInput(format!(
            "need minimum out-degree and maximum in-degree at least 1, got {delta} and {max_in}"
        )));
    }
    if k < 2 {
        return Err(Error::InvalidInput(format!("k must be at least 2, got {k}")));
    }
    let dd = delta * max_in + u64::from(!relaxed);
    let (holds, slack) = decide(precision, |bits| {
        let p = RealInterval::from_ratio(&(k - 1).into(), &k.into(), bits).powi(delta);
        let t = RealInterval::e(bits).mul(&RealInterval::from_int(dd, bits)).recip().expect("positive");
        p.sub(&t)
    });
    Ok(CriterionVerdict { holds, lower_bound: None, positivity_only: relaxed, slack, worst_event: None })
}

/// `Delta <= 2^delta / (e delta)`: an even directed cycle exists.
pub fn even_cycle_condition(delta: u64, max_in: u64, precision: Precision) -> Result<CriterionVerdict> {
    alon_linial_condition(delta, max_in, 2, true, precision)
}

/// The real root of `2^x = e x^2` in `[7, 7.2]`; `d`-regular digraphs have
/// an even cycle once `d` exceeds it.
pub fn even_cycle_root() -> f64 {
    let g = |x: f64| x * std::f64::consts::LN_2 - 1.0 - 2.0 * x.ln();
    let (mut lo, mut hi) = (7.0, 7.2);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `floor(d / (1 + 2 ln d))`: every `k` from 2 up to this value has a cycle
/// of length divisible by `k` in every `d`-regular digraph.
pub fn max_mod_k_regular(d: u64, precision: Precision) -> Result<u64> {
    if d == 0 {
        return Err(Error::InvalidInput("d must be at least 1".into()));
    }
    if d == 1 {
        return Ok(1);
    }
    let f = decide_floor(precision, |bits| {
        let x = RealInterval::from_int(d, bits);
        let den = x.ln().expect("d > 0").mul_pow2(1).add(&RealInterval::from_int(1, bits));
        x.div(&den).expect("positive")
    })?;
    Ok(u64::try_from(f).expect("0 <= floor <= d"))
}

/// Keeps, at every vertex, the arcs to its `delta` lowest-labelled
/// out-neighbours.
pub fn reduce_out_degree(d: &Digraph, delta: usize) -> Result<Digraph> {
    let mut out = Digraph::new(d.len());
    for v in 1..=d.len() {
        let deg = d.out_degree(v);
        if deg < delta {
            return Err(Error::InvalidInput(format!("vertex {v} has out-degree {deg} < {delta}")));
        }
        for u in d.out_neighbors(v).take(delta) {
            out.add_arc(v, u)?;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModKColoring {
    pub k: u64,
    pub colors: Vec<u32>,
}

impl ModKColoring {
    /// Every vertex needs an out-neighbour coloured one more, mod `k`.
    pub fn validate(&self, d: &Digraph) -> Result<()> {
        if self.colors.len() != d.len() {
            return Err(Error::LengthMismatch { what: "coloring", expected: d.len(), actual: self.colors.len() });
        }
        if let Some(v) = self.colors.iter().position(|&c| u64::from(c) >= self.k) {
            return Err(Error::InvalidColoring(format!("vertex {} has colour outside 0..{}", v + 1, self.k)));
        }
        for v in 1..=d.len() {
            if self.successor(d, v).is_none() {
                return Err(Error::InvalidColoring(format!("vertex {v} has no out-neighbour with the next colour")));
            }
        }
        Ok(())
    }

    /// Lowest-labelled out-neighbour of `v` with colour `c(v) + 1 mod k`.
    pub fn successor(&self, d: &Digraph, v: usize) -> Option<usize> {
        let want = ((u64::from(self.colors[v - 1]) + 1) % self.k) as u32;
        d.out_neighbors(v).find(|&u| self.colors[u - 1] == want)
    }
}

/// Events `A_v`, one per vertex in label order, with scope `v` followed by
/// its out-neighbours.
pub fn mod_k_events(d: &Digraph, k: u64) -> Vec<EventSpec> {
    (1..=d.len())
        .map(|v| {
            let mut scope = vec![v - 1];
            scope.extend(d.out_neighbors(v).map(|u| u - 1));
            EventSpec::named(scope, NamedPredicate::NoModSuccessor { k: k as u32 })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ColoringReport {
    /// `None` when the step budget ran out.
    pub coloring: Option<ModKColoring>,
    pub stats: ExecutionStats,
}

/// Resamples the colours of `v` and its out-neighbours while some `A_v`
/// occurs. A returned colouring has been validated.
pub fn find_mod_k_coloring(d: &Digraph, k: u64, seed: u64, options: RunOptions) -> Result<ColoringReport> {
    if k < 2 || k > u64::from(u32::MAX) {
        return Err(Error::InvalidInput(format!("k must lie in [2, 2^32), got {k}")));
    }
    if let Some(v) = (1..=d.len()).find(|&v| d.out_degree(v) == 0) {
        return Err(Error::InvalidInput(format!("vertex {v} has no out-neighbour")));
    }
    let space = VariableSpace::uniform(d.len(), k as u32, seed)?;
    let (log, stats) = run(&space, &mod_k_events(d, k), options)?;
    let coloring = if log.terminated {
        let c = ModKColoring { k, colors: log.final_assignment };
        c.validate(d)?;
        Some(c)
    } else {
        None
    };
    Ok(ColoringReport { coloring, stats })
}

/// A directed cycle `v_0, ..., v_len = v_0` of length divisible by `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleCertificate {
    pub k: u64,
    pub vertices: Vec<usize>,
    pub length: usize,
}

impl CycleCertificate {
    pub fn verify(&self, d: &Digraph) -> Result<()> {
        let vs = &self.vertices;
        if self.length == 0 || vs.len() != self.length + 1 || vs.first() != vs.last() {
            return Err(Error::InvalidInput("certificate is not a closed walk of the stated length".into()));
        }
        if !(self.length as u64).is_multiple_of(self.k) {
            return Err(Error::InvalidInput(format!("length {} is not divisible by {}", self.length, self.k)));
        }
        let mut seen = std::collections::HashSet::new();
        if !vs[..self.length].iter().all(|v| seen.insert(v)) {
            return Err(Error::InvalidInput("certificate repeats a vertex".into()));
        }
        if let Some(w) = vs.windows(2).find(|w| !d.out_neighbors(w[0]).any(|u| u == w[1])) {
            return Err(Error::InvalidInput(format!("({}, {}) is not an arc", w[0], w[1])));
        }
        Ok(())
    }
}

/// Walks from vertex 1 along lowest-labelled colour successors until a
/// vertex repeats; the closed part is the cycle. Colours rise by one per
/// step, so its length is a multiple of `k`.
pub fn extract_mod_k_cycle(d: &Digraph, c: &ModKColoring) -> Result<CycleCertificate> {
    c.validate(d)?;
    if d.is_empty() {
        return Err(Error::InvalidInput("empty digraph".into()));
    }
    let mut pos = vec![usize::MAX; d.len() + 1];
    let mut walk = Vec::new();
    let mut v = 1;
    while pos[v] == usize::MAX {
        pos[v] = walk.len();
        walk.push(v);
        v = c.successor(d, v).expect("validated");
    }
    let mut vertices = walk.split_off(pos[v]);
    vertices.push(v);
    let cert = CycleCertificate { k: c.k, length: vertices.len() - 1, vertices };
    cert.verify(d)?;
    Ok(cert)
}

#[derive(Clone, Debug, Serialize)]
pub struct CycleReport {
    pub profile: DegreeProfile,
    /// The relaxed condition for the reduced digraph.
    pub criterion: Option<CriterionVerdict>,
    pub stats: ExecutionStats,
    /// `None` when the colouring step ran out of budget.
    pub certificate: Option<CycleCertificate>,
}

/// Reduce to minimum out-degree, colour mod `k`, extract the cycle.
pub fn find_mod_k_cycle(
    d: &Digraph,
    k: u64,
    seed: u64,
    options: RunOptions,
    precision: Precision,
) -> Result<CycleReport> {
    let profile = degree_profile(d);
    if profile.delta == 0 {
        return Err(Error::InvalidInput("some vertex has no out-neighbour".into()));
    }
    let reduced = reduce_out_degree(d, profile.delta)?;
    let reduced_profile = degree_profile(&reduced);
    let criterion =
        alon_linial_condition(reduced_profile.delta as u64, reduced_profile.max_in as u64, k, true, precision).ok();
    let report = find_mod_k_coloring(&reduced, k, seed, options)?;
    let certificate = match &report.coloring {
        Some(c) => {
            let cert = extract_mod_k_cycle(&reduced, c)?;
            cert.verify(d)?;
            Some(cert)
        }
        None => None,
    };
    Ok(CycleReport { profile, criterion, stats: report.stats, certificate })
}

/// Whether `d` has any directed cycle of length divisible by `k`, by
/// depth-first enumeration of simple cycles from their smallest vertex.
pub fn has_mod_k_cycle_exhaustive(d: &Digraph, k: u64) -> bool {
    fn dfs(d: &Digraph, start: usize, v: usize, len: u64, k: u64, on: &mut [bool]) -> bool {
        for u in d.out_neighbors(v) {
            if u == start && (len + 1).is_multiple_of(k) {
                return true;
            }
            if u > start && !on[u] {
                on[u] = true;
                if dfs(d, start, u, len + 1, k, on) {
                    return true;
                }
                on[u] = false;
            }
        }
        false
    }
    let mut on = vec![false; d.len() + 1];
    (1..=d.len()).any(|s| {
        on[s] = true;
        let found = dfs(d, s, s, 0, k, &mut on);
        on[s] = false;
        found
    })
}
