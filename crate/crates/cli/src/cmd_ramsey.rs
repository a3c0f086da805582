use lll::ramsey::{k0_approx, k0_exact, k0_scan, max_n, CurvePoint, RamseyQuery, RamseyVariant, MAX_K};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::CliError;
use crate::input::{parse_grid, parse_range};
use crate::output::Doc;
use crate::{Ctx, Outcome};

/// Table rows are lower bounds `R(k,k) >= n + 1`, where `n` is the largest
/// value passing the condition.
#[derive(clap::Args, Debug)]
pub struct Args {
    /// `a..b` or a single k.
    #[arg(long, default_value = "10..40")]
    k: String,
    /// Stride through the k range.
    #[arg(long, default_value_t = 5)]
    step: u64,
    /// `ver3`, `ver4` or `both`.
    #[arg(long, default_value = "both")]
    variant: String,
    /// Emit (epsilon, k0, approximation) rows instead of the table.
    #[arg(long)]
    figure1: bool,
    /// `a:b:step` grid of epsilon values for --figure1.
    #[arg(long, default_value = "0.05:0.95:0.05")]
    eps_grid: String,
}

#[derive(Serialize)]
struct Row {
    k: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    ver3: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ver4: Option<u64>,
}

pub fn run(a: Args, ctx: &Ctx) -> Result<(Doc, Outcome), CliError> {
    if a.figure1 {
        return curve(&a.eps_grid);
    }
    let (lo, hi) = parse_range(&a.k)?;
    if lo < 3 || hi > MAX_K {
        return Err(CliError::Usage(format!("k must lie in [3, {MAX_K}]")));
    }
    if a.step == 0 {
        return Err(CliError::Usage("--step must be positive".into()));
    }
    let variants: Vec<RamseyVariant> = match a.variant.as_str() {
        "both" => RamseyVariant::ALL.to_vec(),
        v => vec![v.parse().map_err(|e: lll::Error| CliError::Usage(e.to_string()))?],
    };
    let ks: Vec<u64> = (lo..=hi).step_by(a.step as usize).collect();
    let rows: Vec<Row> = ks
        .par_iter()
        .map(|&k| {
            let bound = |v: RamseyVariant| -> lll::Result<Option<u64>> {
                if !variants.contains(&v) {
                    return Ok(None);
                }
                Ok(Some(max_n(RamseyQuery::new(k, v)?, ctx.precision)? + 1))
            };
            Ok(Row { k, ver3: bound(RamseyVariant::Ver3)?, ver4: bound(RamseyVariant::Ver4)? })
        })
        .collect::<lll::Result<_>>()?;

    let mut header = vec!["k"];
    header.extend(variants.iter().map(|v| v.name()));
    let cells = |r: &Row| {
        let mut c = vec![r.k.to_string()];
        c.extend(variants.iter().map(|v| match v {
            RamseyVariant::Ver3 => r.ver3.unwrap_or_default().to_string(),
            RamseyVariant::Ver4 => r.ver4.unwrap_or_default().to_string(),
        }));
        c
    };
    let mut text = String::from("lower bounds R(k,k) >= n + 1, n the largest value passing the condition\n");
    text.push_str(&header.iter().map(|h| format!("{h:>12}")).collect::<String>());
    text.push('\n');
    for r in &rows {
        text.push_str(&cells(r).iter().map(|c| format!("{c:>12}")).collect::<String>());
        text.push('\n');
    }
    let csv_rows = rows.iter().map(cells).collect();
    let doc = Doc::new(&json!({ "convention": "R(k,k) >= value", "rows": rows }), &header, csv_rows, text)?;
    Ok((doc, Outcome::Pass))
}

fn curve(grid: &str) -> Result<(Doc, Outcome), CliError> {
    let grid = parse_grid(grid)?;
    if grid.iter().any(|&e| !(e > 0.0 && e < 1.0)) {
        return Err(CliError::Usage("epsilon grid must lie in (0, 1)".into()));
    }
    let points: Vec<CurvePoint> = grid
        .par_iter()
        .map(|&epsilon| {
            let k0 = match k0_exact(epsilon) {
                Ok(k) => k,
                Err(lll::Error::Domain(_)) => k0_scan(epsilon)?,
                Err(e) => return Err(e),
            };
            Ok(CurvePoint { epsilon, k0_exact: k0, k0_approx: k0_approx(epsilon)? })
        })
        .collect::<lll::Result<_>>()?;
    let rows: Vec<Vec<String>> =
        points.iter().map(|p| vec![p.epsilon.to_string(), p.k0_exact.to_string(), p.k0_approx.to_string()]).collect();
    let mut text = format!("{:>10}{:>10}{:>14}\n", "epsilon", "k0", "approx");
    for p in &points {
        text.push_str(&format!("{:>10.4}{:>10}{:>14.3}\n", p.epsilon, p.k0_exact, p.k0_approx));
    }
    let doc = Doc::new(&json!({ "rows": points }), &["epsilon", "k0_exact", "k0_approx"], rows, text)?;
    Ok((doc, Outcome::Pass))
}
