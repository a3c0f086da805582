use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::space::VariableSpace;
use crate::error::{Error, Result};

/// Largest scope-assignment count enumerated when computing `P(A)`.
pub const EXHAUSTIVE_LIMIT: u64 = 1_000_000;

/// A bad-event predicate over scope values, in scope order.
pub type Predicate = Arc<dyn Fn(&[u32]) -> bool + Send + Sync>;

/// Built-in predicates used by the colouring pipelines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedPredicate {
    /// All scope values are equal.
    Monochromatic,
    /// Some value of `0..k` is missing from the scope.
    NotPanchromatic { k: u32 },
    /// No value after the first equals the first plus one, mod `k`.
    NoModSuccessor { k: u32 },
}

impl NamedPredicate {
    pub fn name(self) -> &'static str {
        match self {
            NamedPredicate::Monochromatic => "monochromatic",
            NamedPredicate::NotPanchromatic { .. } => "not_panchromatic",
            NamedPredicate::NoModSuccessor { .. } => "no_mod_successor",
        }
    }

    pub fn eval(self, values: &[u32]) -> bool {
        match self {
            NamedPredicate::Monochromatic => values.windows(2).all(|w| w[0] == w[1]),
            NamedPredicate::NotPanchromatic { k } => {
                let mut seen = vec![false; k as usize];
                for &v in values {
                    if let Some(s) = seen.get_mut(v as usize) {
                        *s = true;
                    }
                }
                !seen.iter().all(|&s| s)
            }
            NamedPredicate::NoModSuccessor { k } => match values.split_first() {
                None => true,
                Some((&c, rest)) => {
                    let want = (c + 1) % k;
                    !rest.iter().any(|&u| u % k == want)
                }
            },
        }
    }
}

/// How an event's bad set is represented.
#[derive(Clone)]
pub enum BadSet {
    /// The bad scope-assignments, listed.
    Explicit(HashSet<Vec<u32>>),
    Named(NamedPredicate),
    /// A deterministic callback.
    Custom(Predicate),
}

impl fmt::Debug for BadSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BadSet::Explicit(s) => f.debug_tuple("Explicit").field(&s.len()).finish(),
            BadSet::Named(p) => f.debug_tuple("Named").field(p).finish(),
            BadSet::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// A bad event: a scope of variable indices and the set of scope values that
/// make it occur. Events are identified by their 1-based position in a list.
#[derive(Clone, Debug)]
pub struct EventSpec {
    scope: Vec<usize>,
    bad: BadSet,
}

impl EventSpec {
    pub fn explicit(scope: Vec<usize>, bad: impl IntoIterator<Item = Vec<u32>>) -> Self {
        EventSpec { scope, bad: BadSet::Explicit(bad.into_iter().collect()) }
    }

    pub fn named(scope: Vec<usize>, predicate: NamedPredicate) -> Self {
        EventSpec { scope, bad: BadSet::Named(predicate) }
    }

    pub fn custom(scope: Vec<usize>, predicate: impl Fn(&[u32]) -> bool + Send + Sync + 'static) -> Self {
        EventSpec { scope, bad: BadSet::Custom(Arc::new(predicate)) }
    }

    pub fn scope(&self) -> &[usize] {
        &self.scope
    }

    pub fn bad_set(&self) -> &BadSet {
        &self.bad
    }

    /// Whether scope values `values` (in scope order) make the event occur.
    pub fn is_bad(&self, values: &[u32]) -> bool {
        match &self.bad {
            BadSet::Explicit(s) => s.contains(values),
            BadSet::Named(p) => p.eval(values),
            BadSet::Custom(f) => f(values),
        }
    }

    /// Whether the event occurs under a full assignment.
    pub fn is_bad_under(&self, assignment: &[u32], buf: &mut Vec<u32>) -> bool {
        buf.clear();
        buf.extend(self.scope.iter().map(|&v| assignment[v]));
        self.is_bad(buf)
    }

    pub fn overlaps(&self, other: &EventSpec) -> bool {
        self.scope.iter().any(|v| other.scope.contains(v))
    }

    pub(crate) fn validate(&self, id: usize, space: &VariableSpace) -> Result<()> {
        if self.scope.is_empty() {
            return Err(Error::InvalidInput(format!("event {id} has an empty scope")));
        }
        let mut seen = HashSet::new();
        for &v in &self.scope {
            if v >= space.len() {
                return Err(Error::InvalidInput(format!(
                    "event {id} uses variable {v}, but there are only {} variables",
                    space.len()
                )));
            }
            if !seen.insert(v) {
                return Err(Error::InvalidInput(format!("event {id} repeats variable {v}")));
            }
        }
        if let BadSet::Explicit(set) = &self.bad {
            if let Some(a) = set.iter().find(|a| a.len() != self.scope.len()) {
                return Err(Error::InvalidInput(format!(
                    "event {id}: bad assignment {a:?} does not match a scope of size {}",
                    self.scope.len()
                )));
            }
        }
        Ok(())
    }

    /// `P(A)` under the product measure of `space`. Explicit bad sets are
    /// summed directly; otherwise all scope assignments are enumerated,
    /// which requires at most [`EXHAUSTIVE_LIMIT`] of them.
    pub fn probability(&self, space: &VariableSpace) -> Result<f64> {
        let weight =
            |a: &[u32]| -> f64 { a.iter().zip(&self.scope).map(|(&x, &v)| space.variable(v).prob(x)).product() };
        if let BadSet::Explicit(set) = &self.bad {
            return Ok(set.iter().map(|a| weight(a)).sum());
        }
        let mut total = 0.0;
        for_each_assignment(self, space, |a| {
            if self.is_bad(a) {
                total += weight(a);
            }
        })?;
        Ok(total)
    }

    /// The same event with its bad set listed explicitly.
    pub fn to_explicit(&self, space: &VariableSpace) -> Result<EventSpec> {
        if let BadSet::Explicit(_) = self.bad {
            return Ok(self.clone());
        }
        let mut bad = HashSet::new();
        for_each_assignment(self, space, |a| {
            if self.is_bad(a) {
                bad.insert(a.to_vec());
            }
        })?;
        Ok(EventSpec { scope: self.scope.clone(), bad: BadSet::Explicit(bad) })
    }
}

/// Calls `f` on every assignment of the scope, in odometer order.
fn for_each_assignment(event: &EventSpec, space: &VariableSpace, mut f: impl FnMut(&[u32])) -> Result<()> {
    let domains: Vec<u32> = event.scope.iter().map(|&v| space.variable(v).domain()).collect();
    let count = domains.iter().try_fold(1u64, |acc, &d| acc.checked_mul(d as u64)).unwrap_or(u64::MAX);
    if count > EXHAUSTIVE_LIMIT {
        return Err(Error::SizeGuard { size: count.min(usize::MAX as u64) as usize, cap: EXHAUSTIVE_LIMIT as usize });
    }
    let mut a = vec![0u32; domains.len()];
    loop {
        f(&a);
        let mut i = 0;
        loop {
            if i == a.len() {
                return Ok(());
            }
            a[i] += 1;
            if a[i] < domains[i] {
                break;
            }
            a[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moser_tardos::space::Variable;

    #[test]
    fn named_predicates() {
        let mono = NamedPredicate::Monochromatic;
        assert!(mono.eval(&[1, 1, 1]));
        assert!(!mono.eval(&[1, 0, 1]));
        let pan = NamedPredicate::NotPanchromatic { k: 3 };
        assert!(!pan.eval(&[2, 0, 1, 1]));
        assert!(pan.eval(&[2, 0, 0, 2]));
        let succ = NamedPredicate::NoModSuccessor { k: 3 };
        assert!(!succ.eval(&[2, 1, 0]));
        assert!(succ.eval(&[2, 2, 1]));
        assert!(succ.eval(&[0]));
    }

    #[test]
    fn probabilities() {
        let space = VariableSpace::uniform(3, 2, 0).unwrap();
        let mono = EventSpec::named(vec![0, 1, 2], NamedPredicate::Monochromatic);
        assert_eq!(mono.probability(&space).unwrap(), 0.25);
        let explicit = mono.to_explicit(&space).unwrap();
        assert_eq!(explicit.probability(&space).unwrap(), 0.25);
        let skewed = VariableSpace::new(vec![Variable::with_pmf(vec![0.9, 0.1]).unwrap(); 2], 0);
        let e = EventSpec::custom(vec![0, 1], |v| v[0] == 1 || v[1] == 1);
        assert!((e.probability(&skewed).unwrap() - 0.19).abs() < 1e-15);
        let big = VariableSpace::uniform(7, 10, 0).unwrap();
        let e = EventSpec::named((0..7).collect(), NamedPredicate::Monochromatic);
        assert!(matches!(e.probability(&big), Err(Error::SizeGuard { .. })));
    }

    #[test]
    fn validation() {
        let space = VariableSpace::uniform(3, 2, 0).unwrap();
        assert!(EventSpec::named(vec![], NamedPredicate::Monochromatic).validate(1, &space).is_err());
        assert!(EventSpec::named(vec![0, 0], NamedPredicate::Monochromatic).validate(1, &space).is_err());
        assert!(EventSpec::named(vec![3], NamedPredicate::Monochromatic).validate(1, &space).is_err());
        assert!(EventSpec::explicit(vec![0, 1], [vec![1]]).validate(1, &space).is_err());
        assert!(EventSpec::explicit(vec![0, 1], [vec![1, 0]]).validate(1, &space).is_ok());
    }
}
