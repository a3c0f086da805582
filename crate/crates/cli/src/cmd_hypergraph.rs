use std::path::PathBuf;

use clap::Subcommand;
use lll::hypergraph::{
    k_colorability_check, parse_hypergraph, rainbow_criterion, rainbow_thresholds, solve_coloring, ColoringMode,
    Hypergraph, RainbowThresholds, TABLE_PAIRS,
};
use lll::moser_tardos::{RunOptions, DEFAULT_MAX_STEPS};
use rayon::prelude::*;
use serde_json::json;

use crate::error::CliError;
use crate::input::{parse_file, parse_range};
use crate::output::{interval, Doc};
use crate::{Ctx, Outcome};

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// The rows (r, k, A, B), plus an optional (r, k) grid.
    Table2 {
        /// Grid of r values, `a..b`.
        #[arg(long, requires = "k_range")]
        r_range: Option<String>,
        /// Grid of k values, `a..b`; pairs with r < k are skipped.
        #[arg(long, requires = "r_range")]
        k_range: Option<String>,
    },
    /// Run the colouring criteria on a hypergraph file.
    Check {
        /// Hypergraph file (`hypergraph n m`, then one edge per line).
        #[arg(long)]
        file: PathBuf,
        /// Number of colours.
        #[arg(long)]
        k: u64,
        /// `proper` (no monochromatic edge) or `rainbow` (every edge sees all colours).
        #[arg(long, value_parser = parse_mode, default_value = "proper")]
        mode: ColoringMode,
    },
    /// Find a colouring with the resampling algorithm.
    Solve {
        /// Hypergraph file (`hypergraph n m`, then one edge per line).
        #[arg(long)]
        file: PathBuf,
        /// Number of colours.
        #[arg(long)]
        k: u64,
        /// `proper` (no monochromatic edge) or `rainbow` (every edge sees all colours).
        #[arg(long, value_parser = parse_mode, default_value = "proper")]
        mode: ColoringMode,
        /// Resampling budget.
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: u64,
    },
}

fn parse_mode(s: &str) -> Result<ColoringMode, String> {
    s.parse().map_err(|e: lll::Error| e.to_string())
}

fn profile(h: &Hypergraph) -> serde_json::Value {
    json!({
        "vertices": h.num_vertices(),
        "edges": h.edge_count(),
        "uniformity": h.uniformity(),
        "min_edge_size": h.min_edge_size(),
        "max_degree": h.max_degree(),
        "max_edge_intersections": h.max_edge_intersections(),
        "duplicate_edges": h.duplicate_edges(),
    })
}

fn profile_text(h: &Hypergraph) -> String {
    let mut s = format!(
        "{} vertices, {} edges, max degree {}, max edge intersections {}\n",
        h.num_vertices(),
        h.edge_count(),
        h.max_degree(),
        h.max_edge_intersections()
    );
    for (i, j) in h.duplicate_edges() {
        s.push_str(&format!("warning: edges {i} and {j} are identical\n"));
    }
    s
}

pub fn run(cmd: Cmd, ctx: &Ctx) -> Result<(Doc, Outcome), CliError> {
    match cmd {
        Cmd::Table2 { r_range, k_range } => table2(r_range, k_range, ctx),
        Cmd::Check { file, k, mode } => {
            let h = parse_file(&file, parse_hypergraph)?;
            let mut text = profile_text(&h);
            let (verdicts, outcome) = match mode {
                ColoringMode::Proper => {
                    let v = k_colorability_check(&h, k, ctx.precision)?;
                    let o = Outcome::from_decision(v.holds);
                    (vec![("proper", v)], o)
                }
                ColoringMode::Rainbow => {
                    let plain = rainbow_criterion(&h, k, false, ctx.precision)?;
                    let sharp = rainbow_criterion(&h, k, true, ctx.precision)?;
                    let o = Outcome::from_decision(sharp.holds);
                    (vec![("rainbow", plain), ("rainbow_sharpened", sharp)], o)
                }
            };
            let mut rows = Vec::new();
            for (name, v) in &verdicts {
                let word = if v.passes() {
                    "pass"
                } else if v.holds == lll::numeric::Decision::Fails {
                    "fail"
                } else {
                    "indeterminate"
                };
                text.push_str(&format!("{name:<18} {word}  slack {}\n", interval(&v.slack)));
                rows.push(vec![
                    name.to_string(),
                    word.into(),
                    v.slack.lo_f64().to_string(),
                    v.slack.hi_f64().to_string(),
                ]);
            }
            let named: Vec<_> = verdicts.iter().map(|(n, v)| json!({ "criterion": n, "verdict": v })).collect();
            let doc = Doc::new(
                &json!({ "k": k, "mode": mode, "hypergraph": profile(&h), "verdicts": named }),
                &["criterion", "verdict", "slack_lo", "slack_hi"],
                rows,
                text,
            )?;
            Ok((doc, outcome))
        }
        Cmd::Solve { file, k, mode, max_steps } => {
            let h = parse_file(&file, parse_hypergraph)?;
            let opts = RunOptions { max_steps, ..RunOptions::default() };
            let rep = solve_coloring(&h, k, mode, ctx.seed(), opts, ctx.precision)?;
            let mut text = profile_text(&h);
            let rows = match &rep.coloring {
                Some(c) => {
                    text.push_str(&format!("{mode} {k}-colouring after {} resamplings\n", rep.stats.total_resamples));
                    let line: Vec<String> = c.iter().map(u32::to_string).collect();
                    text.push_str(&line.join(" "));
                    text.push('\n');
                    c.iter().enumerate().map(|(v, c)| vec![(v + 1).to_string(), c.to_string()]).collect()
                }
                None => {
                    text.push_str(&format!("no colouring within {max_steps} resamplings\n"));
                    let word = if rep.criterion.passes() { "holds" } else { "fails" };
                    text.push_str(&format!(
                        "sufficient condition {word} for this hypergraph (slack {})\n",
                        interval(&rep.criterion.slack)
                    ));
                    Vec::new()
                }
            };
            let outcome = Outcome::from_bool(rep.coloring.is_some());
            let doc = Doc::new(&rep, &["vertex", "color"], rows, text)?;
            Ok((doc, outcome))
        }
    }
}

fn table2(r_range: Option<String>, k_range: Option<String>, ctx: &Ctx) -> Result<(Doc, Outcome), CliError> {
    let mut pairs: Vec<(u64, u64)> = TABLE_PAIRS.to_vec();
    if let (Some(r), Some(k)) = (r_range, k_range) {
        let (r0, r1) = parse_range(&r)?;
        let (k0, k1) = parse_range(&k)?;
        for k in k0.max(2)..=k1 {
            for r in r0.max(k)..=r1 {
                pairs.push((r, k));
            }
        }
    }
    let rows: Vec<RainbowThresholds> =
        pairs.par_iter().map(|&(r, k)| rainbow_thresholds(r, k, ctx.precision)).collect::<lll::Result<_>>()?;
    let all_close = rows.iter().all(|t| t.b == t.a || t.b == t.a + 1);
    let mut text = format!("{:>4}{:>4}{:>10}{:>10}\n", "r", "k", "A", "B");
    for t in &rows {
        text.push_str(&format!("{:>4}{:>4}{:>10}{:>10}\n", t.r, t.k, t.a, t.b));
    }
    let csv = rows.iter().map(|t| vec![t.r.to_string(), t.k.to_string(), t.a.to_string(), t.b.to_string()]).collect();
    let doc = Doc::new(&json!({ "rows": rows }), &["r", "k", "A", "B"], csv, text)?;
    Ok((doc, Outcome::from_bool(all_close)))
}
