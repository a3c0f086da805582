use std::fs;
use std::path::Path;

use crate::error::CliError;

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Runs a core parser on a file's contents, tagging errors with the path.
pub fn parse_file<T>(path: &Path, parse: impl FnOnce(&str) -> lll::Result<T>) -> Result<T, CliError> {
    let text = read(path)?;
    parse(&text).map_err(|source| CliError::File { path: path.display().to_string(), source })
}

/// Whitespace-separated reals, `#` comments allowed.
pub fn parse_numbers(text: &str) -> lll::Result<Vec<f64>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        let mut col = 0;
        for tok in body.split_whitespace() {
            let at = body[col..].find(tok).map_or(col, |p| col + p);
            col = at + tok.len();
            let v: f64 = tok.parse().map_err(|_| lll::Error::Parse {
                line: i + 1,
                column: at + 1,
                message: format!("expected a number, got `{tok}`"),
            })?;
            out.push(v);
        }
    }
    Ok(out)
}

/// `a..b` (inclusive) or a single value.
pub fn parse_range(s: &str) -> Result<(u64, u64), CliError> {
    let bad = || CliError::Usage(format!("expected `a..b` or a single integer, got `{s}`"));
    match s.split_once("..") {
        Some((a, b)) => {
            let a = a.trim().parse().map_err(|_| bad())?;
            let b = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            Ok((a, b))
        }
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            Ok((v, v))
        }
    }
}

/// `a:b:step` with both ends included (up to rounding).
pub fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("expected `a:b:step`, got `{s}`"));
    let parts: Vec<f64> = s.split(':').map(|p| p.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
    let [a, b, step] = parts[..] else { return Err(bad()) };
    if ![a, b, step].iter().all(|x| x.is_finite()) || step <= 0.0 || a > b {
        return Err(bad());
    }
    let n = ((b - a) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| a + step * i as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_and_ranges() {
        assert_eq!(parse_numbers("0.1 0.2\n# c\n3 # x\n").unwrap(), vec![0.1, 0.2, 3.0]);
        match parse_numbers("0.1\n 2 z") {
            Err(lll::Error::Parse { line: 2, column: 4, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert_eq!(parse_range("10..40").unwrap(), (10, 40));
        assert_eq!(parse_range("7").unwrap(), (7, 7));
        assert!(parse_range("9..3").is_err());
        let g = parse_grid("0.05:0.95:0.05").unwrap();
        assert_eq!(g.len(), 19);
        assert!((g[18] - 0.95).abs() < 1e-12);
        assert!(parse_grid("1:0:0.1").is_err());
    }
}
