use std::collections::HashSet;
use std::fmt;

use num_rational::BigRational;
use num_traits::One;
use rand::Rng;
use serde::Serialize;

use super::build_dependency_graph;
use super::event::EventSpec;
use super::execution::ExecutionLog;
use crate::depgraph::DependencyGraph;
use crate::error::{Error, Result};
use crate::numeric::{Dyadic, RealInterval};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessNode {
    pub label: usize,
    /// Step of the execution this vertex came from; `None` for sampled trees.
    pub step: Option<u64>,
    pub parent: Option<usize>,
    /// Distance from the root.
    pub depth: usize,
    pub children: Vec<usize>,
}

/// A rooted tree labelled by events. Node 0 is the root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessTree {
    nodes: Vec<WitnessNode>,
}

impl WitnessTree {
    pub fn single(label: usize, step: Option<u64>) -> Self {
        WitnessTree { nodes: vec![WitnessNode { label, step, parent: None, depth: 0, children: Vec::new() }] }
    }

    /// Appends a child under `parent` and returns its index.
    pub fn add_child(&mut self, parent: usize, label: usize, step: Option<u64>) -> usize {
        let idx = self.nodes.len();
        let depth = self.nodes[parent].depth + 1;
        self.nodes.push(WitnessNode { label, step, parent: Some(parent), depth, children: Vec::new() });
        self.nodes[parent].children.push(idx);
        idx
    }

    pub fn root_label(&self) -> usize {
        self.nodes[0].label
    }

    pub fn nodes(&self) -> &[WitnessNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of vertices on a longest root-to-leaf path.
    pub fn height(&self) -> usize {
        self.nodes.iter().map(|n| n.depth + 1).max().unwrap_or(0)
    }

    pub fn labels(&self) -> impl Iterator<Item = usize> + '_ {
        self.nodes.iter().map(|n| n.label)
    }

    /// The labelled shape, forgetting step indices and child order.
    pub fn shape(&self) -> TreeShape {
        self.shape_at(0)
    }

    fn shape_at(&self, idx: usize) -> TreeShape {
        let mut children: Vec<TreeShape> = self.nodes[idx].children.iter().map(|&c| self.shape_at(c)).collect();
        children.sort();
        TreeShape { label: self.nodes[idx].label, children }
    }

    pub fn from_shape(shape: &TreeShape) -> Self {
        let mut t = WitnessTree::single(shape.label, None);
        fn grow(t: &mut WitnessTree, at: usize, s: &TreeShape) {
            for c in &s.children {
                let idx = t.add_child(at, c.label, None);
                grow(t, idx, c);
            }
        }
        grow(&mut t, 0, shape);
        t
    }
}

/// Canonical form of a labelled rooted tree: equal shapes are equal trees.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TreeShape {
    pub label: usize,
    pub children: Vec<TreeShape>,
}

impl TreeShape {
    pub fn leaf(label: usize) -> Self {
        TreeShape { label, children: Vec::new() }
    }

    pub fn node(label: usize, mut children: Vec<TreeShape>) -> Self {
        children.sort();
        TreeShape { label, children }
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(TreeShape::size).sum::<usize>()
    }
}

/// Written as `1(2(1),3)`.
impl fmt::Display for TreeShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)?;
        if !self.children.is_empty() {
            f.write_str("(")?;
            for (i, c) in self.children.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{c}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for TreeShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bytes: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let shape = parse_shape(&bytes, &mut pos)?;
        if pos != bytes.len() {
            return Err(Error::parse(1, pos + 1, "trailing input after tree"));
        }
        Ok(shape)
    }
}

fn parse_shape(s: &[char], pos: &mut usize) -> Result<TreeShape> {
    let start = *pos;
    while *pos < s.len() && s[*pos].is_ascii_digit() {
        *pos += 1;
    }
    let label: usize = s[start..*pos]
        .iter()
        .collect::<String>()
        .parse()
        .map_err(|_| Error::parse(1, start + 1, "expected an event label"))?;
    let mut children = Vec::new();
    if s.get(*pos) == Some(&'(') {
        *pos += 1;
        loop {
            children.push(parse_shape(s, pos)?);
            match s.get(*pos) {
                Some(',') => *pos += 1,
                Some(')') => {
                    *pos += 1;
                    break;
                }
                _ => return Err(Error::parse(1, *pos + 1, "expected `,` or `)`")),
            }
        }
    }
    Ok(TreeShape::node(label, children))
}

/// `W_t`: the witness tree of step `t` (1-based) of a logged execution.
///
/// Steps `t-1, ..., 1` are scanned backwards. A step's event joins the tree
/// when its scope meets the scope of some vertex already present, as a child
/// of the deepest such vertex; among equally deep candidates the one created
/// from the smallest step index wins.
pub fn witness_tree(log: &ExecutionLog, events: &[EventSpec], t: usize) -> Result<WitnessTree> {
    let labels = checked_labels(log, events)?;
    if t == 0 || t > labels.len() {
        return Err(Error::InvalidInput(format!("step {t} outside 1..={}", labels.len())));
    }
    Ok(backward(&labels, &build_dependency_graph(events), t))
}

/// `W_1, ..., W_T` for the whole log.
pub fn witness_trees(log: &ExecutionLog, events: &[EventSpec]) -> Result<Vec<WitnessTree>> {
    let labels = checked_labels(log, events)?;
    let g = build_dependency_graph(events);
    Ok((1..=labels.len()).map(|t| backward(&labels, &g, t)).collect())
}

fn checked_labels(log: &ExecutionLog, events: &[EventSpec]) -> Result<Vec<usize>> {
    log.events().map(|e| if e >= 1 && e <= events.len() { Ok(e) } else { Err(Error::UnknownEvent(e)) }).collect()
}

pub(crate) fn overlaps(g: &DependencyGraph, a: usize, b: usize) -> bool {
    a == b || g.has_edge(a, b)
}

pub(crate) fn backward(labels: &[usize], g: &DependencyGraph, t: usize) -> WitnessTree {
    let mut tree = WitnessTree::single(labels[t - 1], Some(t as u64));
    for s in (1..t).rev() {
        let b = labels[s - 1];
        // Steps are added in decreasing order, so among equal depths the
        // latest-added node has the smallest step.
        let best = tree
            .nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| overlaps(g, n.label, b))
            .max_by(|(i, x), (j, y)| x.depth.cmp(&y.depth).then(i.cmp(j)))
            .map(|(i, _)| i);
        if let Some(parent) = best {
            tree.add_child(parent, b, Some(s as u64));
        }
    }
    tree
}

/// Both defining properties: every child's scope meets its parent's, and
/// the children of a vertex carry distinct labels.
pub fn is_proper_witness_tree(tree: &WitnessTree, events: &[EventSpec]) -> Result<bool> {
    is_proper_on_graph(tree, &build_dependency_graph(events))
}

/// [`is_proper_witness_tree`] with scope overlap read off a dependency graph.
pub fn is_proper_on_graph(tree: &WitnessTree, g: &DependencyGraph) -> Result<bool> {
    for n in &tree.nodes {
        if n.label == 0 || n.label > g.len() {
            return Err(Error::UnknownEvent(n.label));
        }
    }
    for n in &tree.nodes {
        let mut seen = HashSet::new();
        for &c in &n.children {
            let l = tree.nodes[c].label;
            if !overlaps(g, n.label, l) || !seen.insert(l) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Limits on a sampled tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GwCaps {
    /// Largest allowed height (vertices on a root-to-leaf path).
    pub depth_cap: usize,
    pub node_cap: usize,
}

impl Default for GwCaps {
    fn default() -> Self {
        GwCaps { depth_cap: 64, node_cap: 100_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GwOutcome {
    Tree(WitnessTree),
    /// The process was still alive at generation `depth_cap`.
    DepthExceeded,
    /// More than `node_cap` vertices were generated.
    SizeExceeded,
}

/// The branching process on a dependency graph with weights `x`: a vertex
/// labelled `B` gets, independently for each `C` in `Γ⁺(B)`, a child
/// labelled `C` with probability `x(C)`.
#[derive(Clone, Debug)]
pub struct GaltonWatson {
    x: Vec<f64>,
    closed: Vec<Vec<usize>>,
}

impl GaltonWatson {
    pub fn new(g: &DependencyGraph, x: &[f64]) -> Result<Self> {
        check_open_weights(x, g.len())?;
        let closed = g.vertices().map(|v| g.closed_neighborhood(v).expect("in range").into_iter().collect()).collect();
        Ok(GaltonWatson { x: x.to_vec(), closed })
    }

    pub fn sample<R: Rng + ?Sized>(&self, root: usize, rng: &mut R, caps: GwCaps) -> Result<GwOutcome> {
        if root == 0 || root > self.closed.len() {
            return Err(Error::UnknownEvent(root));
        }
        let mut tree = WitnessTree::single(root, None);
        let mut next = 0;
        while next < tree.len() {
            let (label, depth) = (tree.nodes[next].label, tree.nodes[next].depth);
            for &c in &self.closed[label - 1] {
                if rng.gen::<f64>() < self.x[c - 1] {
                    if depth + 2 > caps.depth_cap {
                        return Ok(GwOutcome::DepthExceeded);
                    }
                    if tree.len() >= caps.node_cap {
                        return Ok(GwOutcome::SizeExceeded);
                    }
                    tree.add_child(next, c, None);
                }
            }
            next += 1;
        }
        Ok(GwOutcome::Tree(tree))
    }
}

/// One sample of the branching process rooted at `root`.
pub fn galton_watson_sample<R: Rng + ?Sized>(
    root: usize,
    x: &[f64],
    g: &DependencyGraph,
    rng: &mut R,
    caps: GwCaps,
) -> Result<GwOutcome> {
    GaltonWatson::new(g, x)?.sample(root, rng, caps)
}

/// `p_τ = (1 - x(A))/x(A) * prod_v x([v]) prod_{C in Γ([v])} (1 - x(C))`,
/// the probability that the branching process rooted at `A` yields `τ`.
pub fn tree_probability(tree: &WitnessTree, x: &[f64], g: &DependencyGraph, prec: u32) -> Result<RealInterval> {
    Ok(RealInterval::from_rational(&tree_probability_exact(tree, x, g)?, prec))
}

pub fn tree_probability_exact(tree: &WitnessTree, x: &[f64], g: &DependencyGraph) -> Result<BigRational> {
    check_open_weights(x, g.len())?;
    if !is_proper_on_graph(tree, g)? {
        return Err(Error::ImproperTree(format!("{}", tree.shape())));
    }
    let one = BigRational::one();
    let xs: Vec<BigRational> = x.iter().map(|&v| Dyadic::from_f64(v).expect("finite").to_rational()).collect();
    let weight = |b: usize| -> BigRational {
        g.neighbors(b).expect("in range").iter().fold(xs[b - 1].clone(), |acc, &c| acc * (&one - &xs[c - 1]))
    };
    let a = &xs[tree.root_label() - 1];
    let prefactor = (&one - a) / a;
    Ok(tree.labels().fold(prefactor, |acc, l| acc * weight(l)))
}

/// Every proper tree rooted at `root` with at most `max_vertices` vertices.
pub fn enumerate_proper_trees(g: &DependencyGraph, root: usize, max_vertices: usize) -> Result<Vec<TreeShape>> {
    if root == 0 || root > g.len() {
        return Err(Error::UnknownEvent(root));
    }
    let closed: Vec<Vec<usize>> =
        g.vertices().map(|v| g.closed_neighborhood(v).expect("in range").into_iter().collect()).collect();
    let mut out: Vec<TreeShape> = shapes(root, max_vertices, &closed).into_iter().map(|(s, _)| s).collect();
    out.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| a.cmp(b)));
    Ok(out)
}

fn shapes(label: usize, budget: usize, closed: &[Vec<usize>]) -> Vec<(TreeShape, usize)> {
    if budget == 0 {
        return Vec::new();
    }
    child_sets(&closed[label - 1], budget - 1, closed)
        .into_iter()
        .map(|(children, size)| (TreeShape::node(label, children), size + 1))
        .collect()
}

/// Choices of at most one subtree per candidate label, within `budget` vertices.
fn child_sets(cands: &[usize], budget: usize, closed: &[Vec<usize>]) -> Vec<(Vec<TreeShape>, usize)> {
    let Some((&c, rest)) = cands.split_first() else {
        return vec![(Vec::new(), 0)];
    };
    let mut out = child_sets(rest, budget, closed);
    for (sub, size) in shapes(c, budget, closed) {
        for (mut others, used) in child_sets(rest, budget - size, closed) {
            others.push(sub.clone());
            out.push((others, used + size));
        }
    }
    out
}

fn check_open_weights(x: &[f64], n: usize) -> Result<()> {
    if x.len() != n {
        return Err(Error::LengthMismatch { what: "x", expected: n, actual: x.len() });
    }
    if let Some((i, v)) = x.iter().enumerate().find(|(_, &v)| !(v > 0.0 && v < 1.0)) {
        return Err(Error::InvalidInput(format!("x_{} = {v} must lie in (0, 1)", i + 1)));
    }
    Ok(())
}
