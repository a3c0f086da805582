//! The resampling algorithm in the variable setting: run it, log it, replay
//! it, and inspect the witness trees behind its running-time bound.

mod estimate;
mod event;
mod execution;
mod instance;
mod space;
mod witness;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use estimate::{
    estimate_appearance_probability, summarize, tree_appears, trial_seed, wilson_interval, AppearanceEstimate,
    MIN_TRIALS, Z_95,
};
pub use event::{BadSet, EventSpec, NamedPredicate, Predicate, EXHAUSTIVE_LIMIT};
pub use execution::{
    replay_assignment, run, Execution, ExecutionLog, ExecutionStats, LogStep, RunOptions, Selection, DEFAULT_MAX_STEPS,
};
pub use instance::Instance;
pub use space::{ResamplingTable, Variable, VariableSpace, PMF_TOLERANCE};
pub use witness::{
    enumerate_proper_trees, galton_watson_sample, is_proper_on_graph, is_proper_witness_tree, tree_probability,
    tree_probability_exact, witness_tree, witness_trees, GaltonWatson, GwCaps, GwOutcome, TreeShape, WitnessNode,
    WitnessTree,
};

use crate::depgraph::DependencyGraph;
use crate::error::{Error, Result};
use crate::numeric::{Dyadic, RealInterval};

/// Events `A`, `B` (1-based, list order) are adjacent iff their scopes meet.
pub fn build_dependency_graph(events: &[EventSpec]) -> DependencyGraph {
    let mut by_var: std::collections::HashMap<usize, Vec<usize>> = std::collections::HashMap::new();
    for (i, e) in events.iter().enumerate() {
        for &v in e.scope() {
            by_var.entry(v).or_default().push(i + 1);
        }
    }
    let mut g = DependencyGraph::new(events.len());
    for ids in by_var.values() {
        for (k, &a) in ids.iter().enumerate() {
            for &b in &ids[k + 1..] {
                if a != b {
                    g.add_edge(a, b).expect("ids in range");
                }
            }
        }
    }
    g
}

/// `sum_A x(A) / (1 - x(A))`, the bound on the expected total number of resamplings.
pub fn expected_resampling_bound(x: &[f64], prec: u32) -> Result<RealInterval> {
    let xs = x
        .iter()
        .map(|&v| {
            Dyadic::from_f64(v)
                .map(|d| d.to_rational())
                .ok_or_else(|| Error::InvalidInput(format!("x = {v} is not finite")))
        })
        .collect::<Result<Vec<_>>>()?;
    expected_resampling_bound_exact(&xs, prec)
}

pub fn expected_resampling_bound_exact(x: &[BigRational], prec: u32) -> Result<RealInterval> {
    let one = BigRational::one();
    let mut total = BigRational::zero();
    for (i, xi) in x.iter().enumerate() {
        if xi.is_negative() || *xi >= one {
            return Err(Error::InvalidInput(format!("x_{} = {xi} must lie in [0, 1)", i + 1)));
        }
        total += xi / (&one - xi);
    }
    Ok(RealInterval::from_rational(&total, prec))
}
