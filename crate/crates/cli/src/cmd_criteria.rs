use std::path::PathBuf;

use clap::ArgGroup;
use lll::criteria::{
    abstract_lll, cluster_expansion, half_shift_check, shearer_f, symmetric_check, symmetric_threshold,
    CriterionVerdict, SymmetricParams, SymmetricVariant,
};
use lll::depgraph::{parse_graph, GraphFile};
use lll::numeric::Decision;
use serde::Serialize;
use serde_json::json;

use crate::error::CliError;
use crate::input::{parse_file, parse_numbers};
use crate::output::{interval, opt, Doc};
use crate::{Ctx, Outcome};

/// Symmetric mode takes `--p --d [--n] [--variant]`; graph mode takes
/// `--graph --probs` with `--x` (abstract) or `--y` (cluster expansion).
#[derive(clap::Args, Debug)]
#[command(group(ArgGroup::new("mode").args(["p", "graph", "half_shift"]).required(true)))]
pub struct Args {
    /// Bound on every event probability.
    #[arg(long, requires = "d")]
    p: Option<f64>,
    /// Bound on the number of events each event depends on.
    #[arg(long)]
    d: Option<u64>,
    /// Number of events.
    #[arg(long, default_value_t = 1)]
    n: u64,
    /// Symmetric variant, or `all`.
    #[arg(long, default_value = "e_d_plus_1")]
    variant: String,
    /// Dependency (di)graph file.
    #[arg(long, requires = "probs")]
    graph: Option<PathBuf>,
    /// Event probabilities, one number per event.
    #[arg(long)]
    probs: Option<PathBuf>,
    /// Abstract-criterion weights x in [0, 1).
    #[arg(long, conflicts_with = "y", requires = "graph")]
    x: Option<PathBuf>,
    /// Cluster-expansion weights y > 0.
    #[arg(long, requires = "graph")]
    y: Option<PathBuf>,
    /// Check d^d/(d+1)^(d+1) >= 1/(e(d+1/2)) for d = 1..=N.
    #[arg(long)]
    half_shift: Option<u64>,
}

#[derive(Serialize)]
struct Named<'a> {
    criterion: String,
    threshold: Option<lll::numeric::RealInterval>,
    #[serde(flatten)]
    verdict: &'a CriterionVerdict,
}

fn verdict_word(d: Decision) -> &'static str {
    match d {
        Decision::Holds => "pass",
        Decision::Fails => "fail",
        Decision::Indeterminate => "indeterminate",
    }
}

const HEADER: [&str; 9] = [
    "criterion",
    "verdict",
    "positivity_only",
    "bound_lo",
    "bound_hi",
    "slack_lo",
    "slack_hi",
    "worst_event",
    "threshold",
];

fn row(n: &Named) -> Vec<String> {
    let v = n.verdict;
    vec![
        n.criterion.clone(),
        verdict_word(v.holds).into(),
        v.positivity_only.to_string(),
        opt(v.lower_bound.as_ref().map(|b| b.lo_f64())),
        opt(v.lower_bound.as_ref().map(|b| b.hi_f64())),
        v.slack.lo_f64().to_string(),
        v.slack.hi_f64().to_string(),
        opt(v.worst_event),
        n.threshold.as_ref().map(interval).unwrap_or_default(),
    ]
}

fn plain(n: &Named) -> String {
    let v = n.verdict;
    let mut s = format!("{:<16} {}", n.criterion, verdict_word(v.holds));
    if v.positivity_only && v.passes() {
        s.push_str(" (positive probability only)");
    }
    s.push('\n');
    if let Some(t) = &n.threshold {
        s.push_str(&format!("  threshold    {}\n", interval(t)));
    }
    if let Some(b) = &v.lower_bound {
        s.push_str(&format!("  lower bound  {}\n", interval(b)));
    }
    s.push_str(&format!("  slack        {}\n", interval(&v.slack)));
    if let Some(w) = v.worst_event {
        s.push_str(&format!("  worst event  {w}\n"));
    }
    s
}

/// Pass if any criterion passes; otherwise undecided if any is undecided.
fn combine(vs: &[&CriterionVerdict]) -> Outcome {
    if vs.iter().any(|v| v.passes()) {
        Outcome::Pass
    } else if vs.iter().any(|v| v.holds == Decision::Indeterminate) {
        Outcome::Indeterminate
    } else {
        Outcome::Fail
    }
}

fn render(mode: &str, extra: serde_json::Value, named: &[Named], preface: String) -> Result<Doc, CliError> {
    let rows = named.iter().map(row).collect();
    let mut text = preface;
    for n in named {
        text.push_str(&plain(n));
    }
    Doc::new(&json!({ "mode": mode, "input": extra, "verdicts": named }), &HEADER, rows, text)
}

pub fn run(a: Args, ctx: &Ctx) -> Result<(Doc, Outcome), CliError> {
    if let Some(d_max) = a.half_shift {
        let report = half_shift_check(d_max, ctx.precision)?;
        let mut text = match report.first_failure {
            None => format!("holds for every d in 1..={d_max}\n"),
            Some(d) => format!("fails first at d = {d}\n"),
        };
        let mut rows = Vec::new();
        for w in &report.optimality {
            text.push_str(&format!(
                "d = {:<6} gap {}  alpha = 0.49 fails: {}\n",
                w.d,
                interval(&w.gap),
                w.smaller_alpha_fails
            ));
            rows.push(vec![
                w.d.to_string(),
                w.gap.lo_f64().to_string(),
                w.gap.hi_f64().to_string(),
                w.smaller_alpha_fails.to_string(),
            ]);
        }
        let doc = Doc::new(
            &json!({ "mode": "half_shift", "report": report }),
            &["d", "gap_lo", "gap_hi", "smaller_alpha_fails"],
            rows,
            text,
        )?;
        return Ok((doc, Outcome::from_bool(report.holds())));
    }

    if let (Some(p), Some(d)) = (a.p, a.d) {
        let variants: Vec<SymmetricVariant> = if a.variant == "all" {
            SymmetricVariant::ALL.to_vec()
        } else {
            vec![a.variant.parse().map_err(|e: lll::Error| CliError::Usage(e.to_string()))?]
        };
        let params = SymmetricParams { p, d, n: a.n };
        let verdicts =
            variants.iter().map(|&v| symmetric_check(params, v, ctx.precision)).collect::<lll::Result<Vec<_>>>()?;
        let named: Vec<Named> = variants
            .iter()
            .zip(&verdicts)
            .map(|(v, verdict)| Named {
                criterion: v.name().into(),
                threshold: (d > 0).then(|| symmetric_threshold(*v, d, ctx.precision.start)).transpose().ok().flatten(),
                verdict,
            })
            .collect();
        let mut preface = format!("p = {p}, d = {d}, n = {}\n", a.n);
        if d > 0 {
            preface.push_str(&format!("optimal threshold f(d) = {}\n", interval(&shearer_f(d, ctx.precision.start)?)));
        }
        let outcome = combine(&verdicts.iter().collect::<Vec<_>>());
        let doc = render("symmetric", json!({ "p": p, "d": d, "n": a.n }), &named, preface)?;
        return Ok((doc, outcome));
    }

    let (Some(graph), Some(probs)) = (a.graph, a.probs) else {
        return Err(CliError::Usage("--graph needs --probs".into()));
    };
    let file = parse_file(&graph, parse_graph)?;
    let p = parse_file(&probs, parse_numbers)?;
    let (mode, verdict) = match (a.x, a.y) {
        (Some(x), None) => {
            let x = parse_file(&x, parse_numbers)?;
            let digraph = match file {
                GraphFile::Digraph(d) => d,
                GraphFile::Graph(g) => {
                    let mut d = lll::depgraph::DependencyDigraph::new(g.len());
                    for (i, j) in g.edges() {
                        d.add_arc(i, j)?;
                        d.add_arc(j, i)?;
                    }
                    d
                }
            };
            ("abstract", abstract_lll(&p, &digraph, &x, ctx.precision)?)
        }
        (None, Some(y)) => {
            let y = parse_file(&y, parse_numbers)?;
            ("cluster", cluster_expansion(&p, &file.into_graph(), &y, ctx.precision)?)
        }
        _ => return Err(CliError::Usage("graph mode needs exactly one of --x and --y".into())),
    };
    let named = [Named { criterion: mode.into(), threshold: None, verdict: &verdict }];
    let outcome = combine(&[&verdict]);
    let doc = render(mode, json!({ "events": p.len() }), &named, String::new())?;
    Ok((doc, outcome))
}
