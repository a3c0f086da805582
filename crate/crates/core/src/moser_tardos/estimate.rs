use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::build_dependency_graph;
use super::event::EventSpec;
use super::execution::{Execution, RunOptions};
use super::space::VariableSpace;
use super::witness::{backward, TreeShape};
use crate::error::{Error, Result};

/// Normal quantile for a two-sided 95% interval.
pub const Z_95: f64 = 1.959963984540054;

pub const MIN_TRIALS: u64 = 100;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AppearanceEstimate {
    pub hits: u64,
    pub trials: u64,
    /// `hits / trials`.
    pub estimate: f64,
    /// Half the width of the Wilson 95% interval.
    pub ci_halfwidth: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
}

/// Wilson score interval for `hits` successes out of `trials`.
pub fn wilson_interval(hits: u64, trials: u64, z: f64) -> (f64, f64) {
    let n = trials as f64;
    let p = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if hits == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if hits == trials { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

/// Seed of trial `i` derived from a base seed.
pub fn trial_seed(base: u64, i: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(u64::MAX - 1);
    rng.set_word_pos(u128::from(i) * 2);
    rng.next_u64()
}

/// Whether `W_t = tree` for some step `t` of one execution on `space`.
pub fn tree_appears(
    tree: &TreeShape,
    space: &VariableSpace,
    events: &[EventSpec],
    options: RunOptions,
) -> Result<bool> {
    if tree.label == 0 || tree.label > events.len() {
        return Err(Error::UnknownEvent(tree.label));
    }
    let g = build_dependency_graph(events);
    let mut ex = Execution::new(space, events, options.selection)?;
    let mut labels = Vec::new();
    let size = tree.size();
    while ex.steps_taken() < options.max_steps {
        let Some(e) = ex.step() else { break };
        labels.push(e);
        if e == tree.label {
            let w = backward(&labels, &g, labels.len());
            if w.len() == size && w.shape() == *tree {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Fraction of independent executions in which `tree` appears as some
/// `W_t`, with a Wilson 95% interval. Trial `i` runs with seed
/// `trial_seed(space.seed(), i)`.
pub fn estimate_appearance_probability(
    tree: &TreeShape,
    space: &VariableSpace,
    events: &[EventSpec],
    trials: u64,
    options: RunOptions,
) -> Result<AppearanceEstimate> {
    if trials < MIN_TRIALS {
        return Err(Error::InvalidInput(format!("need at least {MIN_TRIALS} trials, got {trials}")));
    }
    let mut hits = 0;
    for i in 0..trials {
        let s = space.with_seed(trial_seed(space.seed(), i));
        hits += tree_appears(tree, &s, events, options)? as u64;
    }
    Ok(summarize(hits, trials))
}

pub fn summarize(hits: u64, trials: u64) -> AppearanceEstimate {
    let (lo, hi) = wilson_interval(hits, trials, Z_95);
    AppearanceEstimate {
        hits,
        trials,
        estimate: hits as f64 / trials as f64,
        ci_halfwidth: (hi - lo) / 2.0,
        wilson_lo: lo,
        wilson_hi: hi,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_known_values() {
        // 50/100: center 0.5, halfwidth z*sqrt(0.25/100 + z^2/40000)/(1 + z^2/100).
        let (lo, hi) = wilson_interval(50, 100, Z_95);
        assert!((lo - 0.4038).abs() < 1e-4 && (hi - 0.5962).abs() < 1e-4);
        let (lo, hi) = wilson_interval(0, 100, Z_95);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.0370).abs() < 1e-4);
    }

    #[test]
    fn trial_seeds_differ() {
        let s: std::collections::HashSet<u64> = (0..1000).map(|i| trial_seed(9, i)).collect();
        assert_eq!(s.len(), 1000);
        assert_eq!(trial_seed(9, 5), trial_seed(9, 5));
    }
}
