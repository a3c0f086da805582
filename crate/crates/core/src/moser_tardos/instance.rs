use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::build_dependency_graph;
use super::event::{BadSet, EventSpec, NamedPredicate};
use super::execution::{run, ExecutionLog, ExecutionStats, RunOptions};
use super::space::{Variable, VariableSpace};
use crate::depgraph::DependencyGraph;
use crate::error::{Error, Result};

/// A validated variable-setting instance.
///
/// The JSON form is
///
/// ```json
/// {
///   "variables": [2, {"domain": 3, "pmf": [0.2, 0.3, 0.5]}],
///   "events": [
///     {"scope": [0, 1], "bad_assignments": [[0, 0], [1, 1]]},
///     {"scope": [1, 2], "predicate": "monochromatic"}
///   ],
///   "seed": 7
/// }
/// ```
///
/// Variables are indexed from 0 and events from 1 in list order. Predicates
/// are `monochromatic`, `not_panchromatic` and `no_mod_successor`; the
/// latter two take `k` from an optional `"k"` field, defaulting to the domain
/// size of the first scope variable.
#[derive(Clone, Debug)]
pub struct Instance {
    pub space: VariableSpace,
    pub events: Vec<EventSpec>,
}

#[derive(Deserialize, Serialize)]
#[serde(untagged)]
enum RawVariable {
    Domain(u32),
    Full {
        domain: u32,
        #[serde(default)]
        pmf: Option<Vec<f64>>,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEvent {
    scope: Vec<usize>,
    #[serde(default)]
    bad_assignments: Option<Vec<Vec<u32>>>,
    #[serde(default)]
    predicate: Option<String>,
    #[serde(default)]
    k: Option<u32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    variables: Vec<RawVariable>,
    events: Vec<RawEvent>,
    #[serde(default)]
    seed: u64,
}

impl Instance {
    pub fn new(space: VariableSpace, events: Vec<EventSpec>) -> Result<Self> {
        for (i, e) in events.iter().enumerate() {
            e.validate(i + 1, &space)?;
        }
        Ok(Instance { space, events })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawInstance = serde_json::from_str(text)?;
        let variables = raw
            .variables
            .into_iter()
            .map(|v| match v {
                RawVariable::Domain(d) | RawVariable::Full { domain: d, pmf: None } => Variable::uniform(d),
                RawVariable::Full { domain, pmf: Some(p) } => {
                    if p.len() != domain as usize {
                        return Err(Error::InvalidInput(format!(
                            "pmf has {} entries for a domain of size {domain}",
                            p.len()
                        )));
                    }
                    Variable::with_pmf(p)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let space = VariableSpace::new(variables, raw.seed);
        let events =
            raw.events.into_iter().enumerate().map(|(i, e)| raw_event(i + 1, e, &space)).collect::<Result<Vec<_>>>()?;
        Instance::new(space, events)
    }

    /// JSON text for this instance; fails on events with custom predicates.
    pub fn to_json(&self) -> Result<String> {
        let variables: Vec<Value> = self
            .space
            .variables()
            .iter()
            .map(|v| match v.pmf() {
                None => json!(v.domain()),
                Some(p) => json!({ "domain": v.domain(), "pmf": p }),
            })
            .collect();
        let events = self
            .events
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let mut obj = json!({ "scope": e.scope() });
                match e.bad_set() {
                    BadSet::Explicit(set) => {
                        let mut list: Vec<&Vec<u32>> = set.iter().collect();
                        list.sort();
                        obj["bad_assignments"] = json!(list);
                    }
                    BadSet::Named(p) => {
                        obj["predicate"] = json!(p.name());
                        if let NamedPredicate::NotPanchromatic { k } | NamedPredicate::NoModSuccessor { k } = p {
                            obj["k"] = json!(k);
                        }
                    }
                    BadSet::Custom(_) => {
                        return Err(Error::InvalidInput(format!(
                            "event {} has a custom predicate, which has no JSON form",
                            i + 1
                        )))
                    }
                }
                Ok(obj)
            })
            .collect::<Result<Vec<_>>>()?;
        let doc = json!({ "variables": variables, "events": events, "seed": self.space.seed() });
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn dependency_graph(&self) -> DependencyGraph {
        build_dependency_graph(&self.events)
    }

    pub fn run(&self, options: RunOptions) -> Result<(ExecutionLog, ExecutionStats)> {
        run(&self.space, &self.events, options)
    }

    pub fn with_seed(&self, seed: u64) -> Instance {
        Instance { space: self.space.with_seed(seed), events: self.events.clone() }
    }
}

fn raw_event(id: usize, e: RawEvent, space: &VariableSpace) -> Result<EventSpec> {
    match (e.bad_assignments, e.predicate) {
        (Some(bad), None) => Ok(EventSpec::explicit(e.scope, bad)),
        (None, Some(name)) => {
            let k = || -> Result<u32> {
                match (e.k, e.scope.first()) {
                    (Some(k), _) => Ok(k),
                    (None, Some(&v)) if v < space.len() => Ok(space.variable(v).domain()),
                    _ => Err(Error::InvalidInput(format!("event {id}: cannot infer k"))),
                }
            };
            let p = match name.as_str() {
                "monochromatic" => NamedPredicate::Monochromatic,
                "not_panchromatic" => NamedPredicate::NotPanchromatic { k: k()? },
                "no_mod_successor" => NamedPredicate::NoModSuccessor { k: k()? },
                other => return Err(Error::InvalidInput(format!("event {id}: unknown predicate `{other}`"))),
            };
            Ok(EventSpec::named(e.scope, p))
        }
        _ => Err(Error::InvalidInput(format!("event {id} needs exactly one of `bad_assignments` and `predicate`"))),
    }
}
