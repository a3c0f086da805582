//! Dependency digraphs and graphs over events `1..=n`, and the independent-set
//! sums that the cluster-expansion criterion is built from.

use std::collections::{BTreeSet, HashMap};

use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{Dyadic, RealInterval};

/// Default cap on the number of vertices an independent-set enumeration may span.
pub const DEFAULT_ENUMERATION_CAP: usize = 25;
/// Hard ceiling for any configured cap.
pub const MAX_ENUMERATION_CAP: usize = 64;

/// Directed dependency structure: arc `(i, j)` means event `i` may depend on event `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DependencyDigraph {
    n: usize,
    arcs: BTreeSet<(usize, usize)>,
}

impl DependencyDigraph {
    pub fn new(n: usize) -> Self {
        DependencyDigraph { n, arcs: BTreeSet::new() }
    }

    /// Builds a digraph from arcs; duplicates collapse, self-loops are rejected.
    pub fn from_arcs(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut d = DependencyDigraph::new(n);
        for (i, j) in arcs {
            d.add_arc(i, j)?;
        }
        Ok(d)
    }

    pub fn add_arc(&mut self, i: usize, j: usize) -> Result<()> {
        check_vertex(i, self.n)?;
        check_vertex(j, self.n)?;
        if i == j {
            return Err(Error::InvalidInput(format!("self-loop at vertex {i}")));
        }
        self.arcs.insert((i, j));
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.arcs.iter().copied()
    }

    pub fn out_neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.arcs.range((i, 0)..(i + 1, 0)).map(|&(_, j)| j)
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.out_neighbors(i).count()
    }

    /// Complete digraph minus loops: every event depends on every other.
    pub fn complete(n: usize) -> Self {
        let arcs = (1..=n).flat_map(|i| (1..=n).filter(move |&j| j != i).map(move |j| (i, j)));
        DependencyDigraph { n, arcs: arcs.collect() }
    }
}

/// Undirected dependency graph on `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependencyGraph {
    adj: Vec<BTreeSet<usize>>,
}

impl DependencyGraph {
    pub fn new(n: usize) -> Self {
        DependencyGraph { adj: vec![BTreeSet::new(); n + 1] }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = DependencyGraph::new(n);
        for (i, j) in edges {
            g.add_edge(i, j)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<()> {
        let n = self.len();
        check_vertex(i, n)?;
        check_vertex(j, n)?;
        if i == j {
            return Err(Error::InvalidInput(format!("self-loop at vertex {i}")));
        }
        self.adj[i].insert(j);
        self.adj[j].insert(i);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.adj.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj.get(i).map(|s| s.contains(&j)).unwrap_or(false)
    }

    /// Edges `{i, j}` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vertices().flat_map(move |i| self.adj[i].range(i + 1..).map(move |&j| (i, j)))
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    pub fn is_edgeless(&self) -> bool {
        self.adj.iter().all(|s| s.is_empty())
    }

    /// Open neighborhood `Γ(i)`.
    pub fn neighbors(&self, i: usize) -> Result<&BTreeSet<usize>> {
        check_vertex(i, self.len())?;
        Ok(&self.adj[i])
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj.get(i).map(|s| s.len()).unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.vertices().map(|i| self.degree(i)).max().unwrap_or(0)
    }

    /// Closed neighborhood `Γ⁺(i) = Γ(i) ∪ {i}`.
    pub fn closed_neighborhood(&self, i: usize) -> Result<BTreeSet<usize>> {
        let mut s = self.neighbors(i)?.clone();
        s.insert(i);
        Ok(s)
    }

    /// All independent subsets of `restrict` (including the empty set), ordered
    /// by size and then lexicographically by sorted members.
    pub fn independent_sets(&self, restrict: &BTreeSet<usize>) -> Result<Vec<Vec<usize>>> {
        self.independent_sets_capped(restrict, DEFAULT_ENUMERATION_CAP)
    }

    pub fn independent_sets_capped(&self, restrict: &BTreeSet<usize>, cap: usize) -> Result<Vec<Vec<usize>>> {
        let verts = self.checked_restriction(restrict, cap)?;
        let mut out = Vec::new();
        let mut current = Vec::new();
        self.collect_independent(&verts, 0, &mut current, &mut out);
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(out)
    }

    fn collect_independent(&self, verts: &[usize], from: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(current.clone());
        for idx in from..verts.len() {
            let v = verts[idx];
            if current.iter().all(|&u| !self.has_edge(u, v)) {
                current.push(v);
                self.collect_independent(verts, idx + 1, current, out);
                current.pop();
            }
        }
    }

    /// `Σ_{I ∈ Ind(G[restrict])} Π_{j ∈ I} y_j`, computed exactly and returned
    /// as an enclosure at `prec` bits. `y` is indexed by vertex (`y[0]` is vertex 1).
    pub fn independence_weight_sum(&self, restrict: &BTreeSet<usize>, y: &[f64], prec: u32) -> Result<RealInterval> {
        self.independence_weight_sum_capped(restrict, y, prec, DEFAULT_ENUMERATION_CAP)
    }

    pub fn independence_weight_sum_capped(
        &self,
        restrict: &BTreeSet<usize>,
        y: &[f64],
        prec: u32,
        cap: usize,
    ) -> Result<RealInterval> {
        let weights = positive_weights(y, self.len())?;
        let verts = self.checked_restriction(restrict, cap)?;
        let total = self.weighted_sum(&verts, &weights);
        Ok(RealInterval::point(total, prec))
    }

    /// Exact value of the weight sum, weights indexed by vertex.
    pub(crate) fn independence_weight_sum_exact<W: Weight>(
        &self,
        restrict: &BTreeSet<usize>,
        weights: &[W],
        cap: usize,
    ) -> Result<W> {
        let verts = self.checked_restriction(restrict, cap)?;
        Ok(self.weighted_sum(&verts, weights))
    }

    /// Exact independence polynomial of `G[verts]` at `weights` by
    /// `Z(S) = Z(S - v) + y_v Z(S - Γ⁺(v))`, memoized on vertex bitmasks.
    fn weighted_sum<W: Weight>(&self, verts: &[usize], weights: &[W]) -> W {
        let adj: Vec<u64> = verts
            .iter()
            .map(|&v| verts.iter().enumerate().filter(|&(_, &u)| self.has_edge(u, v)).fold(0, |m, (k, _)| m | 1 << k))
            .collect();
        let local: Vec<W> = verts.iter().map(|&v| weights[v - 1].clone()).collect();
        let full = if verts.len() == 64 { u64::MAX } else { (1u64 << verts.len()) - 1 };
        let mut memo = HashMap::new();
        z_mask(full, &adj, &local, &mut memo)
    }

    fn checked_restriction(&self, restrict: &BTreeSet<usize>, cap: usize) -> Result<Vec<usize>> {
        let cap = cap.min(MAX_ENUMERATION_CAP);
        if restrict.len() > cap {
            return Err(Error::SizeGuard { size: restrict.len(), cap });
        }
        for &v in restrict {
            check_vertex(v, self.len())?;
        }
        Ok(restrict.iter().copied().collect())
    }

    pub fn all_vertices(&self) -> BTreeSet<usize> {
        self.vertices().collect()
    }
}

/// Undirected graph in which `{i, j}` is an edge iff `(i, j)` or `(j, i)` is an arc.
pub fn symmetrize(d: &DependencyDigraph) -> DependencyGraph {
    let mut g = DependencyGraph::new(d.len());
    for (i, j) in d.arcs() {
        g.add_edge(i, j).expect("arcs are validated on insertion");
    }
    g
}

/// A parsed graph file: either header kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphFile {
    Digraph(DependencyDigraph),
    Graph(DependencyGraph),
}

impl GraphFile {
    /// The undirected view; digraphs are symmetrized.
    pub fn into_graph(self) -> DependencyGraph {
        match self {
            GraphFile::Digraph(d) => symmetrize(&d),
            GraphFile::Graph(g) => g,
        }
    }
}

/// Parses the line format `digraph n` / `graph n` followed by one `i j` per
/// line. `#` starts a comment; blank lines are skipped.
pub fn parse_graph(text: &str) -> Result<GraphFile> {
    let mut header: Option<GraphFile> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(line);
        if tokens.is_empty() {
            continue;
        }
        match header.as_mut() {
            None => {
                let (col, kind) = tokens[0];
                if tokens.len() != 2 {
                    return Err(Error::parse(line_no, col, "expected `digraph n` or `graph n`"));
                }
                let n = parse_usize(tokens[1], line_no)?;
                header = Some(match kind {
                    "digraph" => GraphFile::Digraph(DependencyDigraph::new(n)),
                    "graph" => GraphFile::Graph(DependencyGraph::new(n)),
                    _ => return Err(Error::parse(line_no, col, format!("unknown header `{kind}`"))),
                });
            }
            Some(g) => {
                if tokens.len() != 2 {
                    let col = tokens.get(2).map(|t| t.0).unwrap_or(tokens[0].0);
                    return Err(Error::parse(line_no, col, "expected two vertex labels"));
                }
                let i = parse_usize(tokens[0], line_no)?;
                let j = parse_usize(tokens[1], line_no)?;
                let added = match g {
                    GraphFile::Digraph(d) => d.add_arc(i, j),
                    GraphFile::Graph(g) => g.add_edge(i, j),
                };
                added.map_err(|e| Error::parse(line_no, tokens[0].0, e.to_string()))?;
            }
        }
    }
    header.ok_or_else(|| Error::parse(1, 1, "missing `digraph n` or `graph n` header"))
}

/// Whitespace-separated tokens with their 1-based column.
pub(crate) fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

pub(crate) fn parse_usize((col, tok): (usize, &str), line: usize) -> Result<usize> {
    tok.parse().map_err(|_| Error::parse(line, col, format!("expected a nonnegative integer, got `{tok}`")))
}

fn z_mask<W: Weight>(mask: u64, adj: &[u64], y: &[W], memo: &mut HashMap<u64, W>) -> W {
    if mask == 0 {
        return W::one();
    }
    if let Some(z) = memo.get(&mask) {
        return z.clone();
    }
    let v = mask.trailing_zeros() as usize;
    let rest = mask & !(1 << v);
    let z = if adj[v] & rest == 0 {
        W::one().add(&y[v]).mul(&z_mask(rest, adj, y, memo))
    } else {
        let without = z_mask(rest, adj, y, memo);
        without.add(&y[v].mul(&z_mask(rest & !adj[v], adj, y, memo)))
    };
    memo.insert(mask, z.clone());
    z
}

/// Exact scalars the independence polynomial can be evaluated over.
pub(crate) trait Weight: Clone {
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
}

impl Weight for Dyadic {
    fn one() -> Self {
        Dyadic::one()
    }
    fn add(&self, other: &Self) -> Self {
        Dyadic::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Dyadic::mul(self, other)
    }
}

impl Weight for BigRational {
    fn one() -> Self {
        num_traits::One::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

pub(crate) fn positive_weights(y: &[f64], n: usize) -> Result<Vec<Dyadic>> {
    if y.len() != n {
        return Err(Error::LengthMismatch { what: "weights", expected: n, actual: y.len() });
    }
    y.iter()
        .enumerate()
        .map(|(i, &w)| {
            if w > 0.0 && w.is_finite() {
                Ok(Dyadic::from_f64(w).expect("finite"))
            } else {
                Err(Error::InvalidInput(format!("weight y_{} = {w} must be positive", i + 1)))
            }
        })
        .collect()
}

fn check_vertex(v: usize, n: usize) -> Result<()> {
    if v == 0 || v > n {
        Err(Error::VertexOutOfRange { vertex: v, n })
    } else {
        Ok(())
    }
}
