use std::collections::HashMap;
use std::path::PathBuf;

use lll::moser_tardos::{
    enumerate_proper_trees, is_proper_witness_tree, summarize, tree_probability, trial_seed, witness_tree,
    GaltonWatson, GwCaps, GwOutcome, Instance, RunOptions, Selection, TreeShape, DEFAULT_MAX_STEPS,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::CliError;
use crate::input::{parse_file, parse_numbers, read};
use crate::output::{interval, Doc};
use crate::{Ctx, Outcome};

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum SelectionArg {
    LowestIndex,
    RandomUniform,
}

impl From<SelectionArg> for Selection {
    fn from(s: SelectionArg) -> Self {
        match s {
            SelectionArg::LowestIndex => Selection::LowestIndex,
            SelectionArg::RandomUniform => Selection::RandomUniform,
        }
    }
}

/// Runs on an instance file. `--seed` replaces the instance's own seed.
#[derive(clap::Args, Debug)]
pub struct Args {
    /// Instance JSON: `variables`, `events`, optional `seed`.
    #[arg(long)]
    instance: PathBuf,
    /// Which occurring event to resample.
    #[arg(long, value_enum, default_value = "lowest-index")]
    selection: SelectionArg,
    /// Resampling budget; the run reports non-termination when it is spent.
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
    max_steps: u64,
    /// Also emit the witness tree of step t (1-based).
    #[arg(long)]
    witness_tree: Option<usize>,
    /// Branching-process experiment rooted at this event.
    #[arg(long, requires_all = ["gw_x", "gw_trials"])]
    gw_root: Option<usize>,
    /// Weights x(A), one per event.
    #[arg(long, requires = "gw_root")]
    gw_x: Option<PathBuf>,
    /// Number of sampled trees.
    #[arg(long, requires = "gw_root")]
    gw_trials: Option<u64>,
    /// Largest tree (in vertices) tabulated by the experiment.
    #[arg(long, default_value_t = 3)]
    gw_max_vertices: usize,
}

#[derive(Serialize)]
struct GwRow {
    shape: String,
    vertices: usize,
    count: u64,
    frequency: f64,
    ci_halfwidth: f64,
    p_tau: lll::numeric::RealInterval,
}

pub fn run(a: Args, ctx: &Ctx) -> Result<(Doc, Outcome), CliError> {
    let text = read(&a.instance)?;
    let inst = Instance::from_json(&text)
        .map_err(|source| CliError::File { path: a.instance.display().to_string(), source })?;
    let inst = match ctx.seed {
        Some(s) => inst.with_seed(s),
        None => inst,
    };
    if let Some(root) = a.gw_root {
        return gw(&inst, root, a, ctx);
    }

    let opts = RunOptions { selection: a.selection.into(), max_steps: a.max_steps };
    let (log, stats) = inst.run(opts)?;
    let mut doc = json!({ "log": log, "stats": stats });
    let mut plain = format!(
        "{} after {} resamplings (seed {})\n",
        if log.terminated { "terminated" } else { "step budget exhausted" },
        stats.total_resamples,
        log.seed
    );
    plain.push_str(&format!("events: {:?}\n", log.events().collect::<Vec<_>>()));
    plain.push_str(&format!("final assignment: {:?}\n", log.final_assignment));
    if let Some(t) = a.witness_tree {
        let tree = witness_tree(&log, &inst.events, t)?;
        let proper = is_proper_witness_tree(&tree, &inst.events)?;
        plain.push_str(&format!("W_{t} = {} (proper: {proper})\n", tree.shape()));
        doc["witness_tree"] =
            json!({ "t": t, "shape": tree.shape().to_string(), "proper": proper, "nodes": tree.nodes() });
    }
    let rows = log.steps.iter().map(|s| vec![s.step.to_string(), s.event.to_string()]).collect();
    let out = Doc::new(&doc, &["step", "event"], rows, plain)?;
    Ok((out, Outcome::from_bool(log.terminated)))
}

fn gw(inst: &Instance, root: usize, a: Args, ctx: &Ctx) -> Result<(Doc, Outcome), CliError> {
    let x_path = a.gw_x.expect("clap requires it");
    let x = parse_file(&x_path, parse_numbers)?;
    let trials = a.gw_trials.expect("clap requires it");
    if trials == 0 {
        return Err(CliError::Usage("--gw-trials must be positive".into()));
    }
    let g = inst.dependency_graph();
    let process = GaltonWatson::new(&g, &x)?;
    let shapes = enumerate_proper_trees(&g, root, a.gw_max_vertices)?;
    let base = ctx.seed.unwrap_or(inst.space.seed());

    let counts: HashMap<TreeShape, u64> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(base, i));
            let cap = GwCaps { depth_cap: a.gw_max_vertices.max(1), node_cap: a.gw_max_vertices.max(1) };
            process.sample(root, &mut rng, cap).map(|o| match o {
                GwOutcome::Tree(t) => Some(t.shape()),
                _ => None,
            })
        })
        .try_fold(HashMap::new, |mut m, s| {
            if let Some(s) = s? {
                *m.entry(s).or_insert(0) += 1;
            }
            Ok::<_, lll::Error>(m)
        })
        .try_reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            Ok(a)
        })?;

    let mut rows = Vec::new();
    for s in &shapes {
        let count = counts.get(s).copied().unwrap_or(0);
        let est = summarize(count, trials);
        let tree = lll::moser_tardos::WitnessTree::from_shape(s);
        rows.push(GwRow {
            shape: s.to_string(),
            vertices: s.size(),
            count,
            frequency: est.estimate,
            ci_halfwidth: est.ci_halfwidth,
            p_tau: tree_probability(&tree, &x, &g, ctx.precision.start)?,
        });
    }
    let mut plain = format!("{trials} samples rooted at event {root}\n");
    plain.push_str(&format!("{:<20}{:>10}{:>12}  p_tau\n", "shape", "count", "frequency"));
    for r in &rows {
        plain.push_str(&format!("{:<20}{:>10}{:>12.6}  {}\n", r.shape, r.count, r.frequency, interval(&r.p_tau)));
    }
    let csv = rows
        .iter()
        .map(|r| {
            vec![
                r.shape.clone(),
                r.count.to_string(),
                r.frequency.to_string(),
                r.p_tau.lo_f64().to_string(),
                r.p_tau.hi_f64().to_string(),
            ]
        })
        .collect();
    let doc = Doc::new(
        &json!({ "root": root, "trials": trials, "seed": base, "rows": rows }),
        &["shape", "count", "frequency", "p_tau_lo", "p_tau_hi"],
        csv,
        plain,
    )?;
    Ok((doc, Outcome::Pass))
}
