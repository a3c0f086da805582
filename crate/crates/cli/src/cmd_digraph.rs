use std::path::{Path, PathBuf};

use clap::Subcommand;
use lll::depgraph::{parse_graph, GraphFile};
use lll::digraph_cycles::{
    alon_linial_condition, degree_profile, extract_mod_k_cycle, find_mod_k_cycle, reduce_out_degree, Digraph,
    ModKColoring,
};
use lll::moser_tardos::{RunOptions, DEFAULT_MAX_STEPS};
use lll::numeric::Decision;
use serde_json::json;

use crate::error::CliError;
use crate::input::{parse_file, read};
use crate::output::{interval, Doc};
use crate::{Ctx, Outcome};

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Strict and relaxed conditions on the out-degree-reduced digraph.
    Check {
        /// `digraph n` or `graph n` file.
        #[arg(long)]
        file: PathBuf,
        /// Cycle length must be divisible by k.
        #[arg(long)]
        k: u64,
    },
    /// Colour mod k by resampling and extract a cycle certificate.
    Solve {
        /// `digraph n` or `graph n` file.
        #[arg(long)]
        file: PathBuf,
        /// Cycle length must be divisible by k.
        #[arg(long)]
        k: u64,
        /// Resampling budget.
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: u64,
    },
    /// Extract a certificate from a given colouring (`{"k": .., "colors": [..]}`).
    Cycle {
        /// `digraph n` or `graph n` file.
        #[arg(long)]
        file: PathBuf,
        /// Colouring JSON.
        #[arg(long)]
        coloring: PathBuf,
    },
}

/// Undirected files are read as symmetric digraphs.
fn load(path: &Path) -> Result<Digraph, CliError> {
    Ok(match parse_file(path, parse_graph)? {
        GraphFile::Digraph(d) => d,
        GraphFile::Graph(g) => {
            let mut d = Digraph::new(g.len());
            for (i, j) in g.edges() {
                d.add_arc(i, j)?;
                d.add_arc(j, i)?;
            }
            d
        }
    })
}

fn word(d: Decision) -> &'static str {
    match d {
        Decision::Holds => "pass",
        Decision::Fails => "fail",
        Decision::Indeterminate => "indeterminate",
    }
}

pub fn run(cmd: Cmd, ctx: &Ctx) -> Result<(Doc, Outcome), CliError> {
    match cmd {
        Cmd::Check { file, k } => {
            let d = load(&file)?;
            let profile = degree_profile(&d);
            if profile.delta == 0 {
                return Err(lll::Error::InvalidInput("some vertex has no out-neighbour".into()).into());
            }
            let reduced = degree_profile(&reduce_out_degree(&d, profile.delta)?);
            let (delta, max_in) = (reduced.delta as u64, reduced.max_in as u64);
            let strict = alon_linial_condition(delta, max_in, k, false, ctx.precision)?;
            let relaxed = alon_linial_condition(delta, max_in, k, true, ctx.precision)?;
            let mut text = format!(
                "minimum out-degree {}, maximum in-degree {} (after reduction {})\n",
                profile.delta, profile.max_in, reduced.max_in
            );
            let mut rows = Vec::new();
            for (name, v) in [("strict", &strict), ("relaxed", &relaxed)] {
                text.push_str(&format!("{name:<8} {}  slack {}\n", word(v.holds), interval(&v.slack)));
                rows.push(vec![
                    name.into(),
                    word(v.holds).into(),
                    v.slack.lo_f64().to_string(),
                    v.slack.hi_f64().to_string(),
                ]);
            }
            let doc = Doc::new(
                &json!({ "k": k, "profile": profile, "reduced_profile": reduced, "strict": strict, "relaxed": relaxed }),
                &["condition", "verdict", "slack_lo", "slack_hi"],
                rows,
                text,
            )?;
            Ok((doc, Outcome::from_decision(relaxed.holds)))
        }
        Cmd::Solve { file, k, max_steps } => {
            let d = load(&file)?;
            let opts = RunOptions { max_steps, ..RunOptions::default() };
            let rep = find_mod_k_cycle(&d, k, ctx.seed(), opts, ctx.precision)?;
            let mut text = format!("{} resamplings\n", rep.stats.total_resamples);
            if let Some(c) = &rep.criterion {
                text.push_str(&format!("relaxed condition {}\n", word(c.holds)));
            }
            let rows = match &rep.certificate {
                Some(c) => {
                    text.push_str(&format!("cycle of length {}: {:?}\n", c.length, c.vertices));
                    c.vertices.iter().enumerate().map(|(i, v)| vec![i.to_string(), v.to_string()]).collect()
                }
                None => {
                    text.push_str(&format!("no colouring within {max_steps} resamplings\n"));
                    Vec::new()
                }
            };
            let outcome = Outcome::from_bool(rep.certificate.is_some());
            let doc = Doc::new(&rep, &["position", "vertex"], rows, text)?;
            Ok((doc, outcome))
        }
        Cmd::Cycle { file, coloring } => {
            let d = load(&file)?;
            let c: ModKColoring = serde_json::from_str(&read(&coloring)?)
                .map_err(|e| CliError::File { path: coloring.display().to_string(), source: e.into() })?;
            let cert = extract_mod_k_cycle(&d, &c)?;
            let text = format!("cycle of length {}: {:?}\n", cert.length, cert.vertices);
            let rows = cert.vertices.iter().enumerate().map(|(i, v)| vec![i.to_string(), v.to_string()]).collect();
            let doc = Doc::new(&cert, &["position", "vertex"], rows, text)?;
            Ok((doc, Outcome::Pass))
        }
    }
}
