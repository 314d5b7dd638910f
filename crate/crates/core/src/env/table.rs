//! Mean-table text format.
//!
//! ```text
//! K P
//! m_0_1 m_0_2 ... m_0_P
//! ...
//! m_{K-1}_1 ... m_{K-1}_P
//! ```
//!
//! UTF-8, `.` as decimal separator, LF line endings. Column `j` holds the
//! means at every `t` with `(t - 1) mod P == j`.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

pub fn parse_mean_table(text: &str, path: &Path) -> Result<Vec<Vec<f64>>> {
    let bad = |reason: String| Error::Table {
        path: path.to_path_buf(),
        reason,
    };
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| bad("empty file".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|w| w.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| bad(format!("header `{header}`: {e}")))?;
    let [arms, period] = dims[..] else {
        return Err(bad(format!("header must be `K P`, got `{header}`")));
    };
    if arms == 0 || period == 0 {
        return Err(bad("K and P must be positive".into()));
    }
    let mut rows = Vec::with_capacity(arms);
    for (k, line) in lines.enumerate() {
        if k >= arms {
            return Err(bad(format!("more than {arms} rows")));
        }
        let row: Vec<f64> = line
            .split_whitespace()
            .map(|w| w.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| bad(format!("row {}: {e}", k + 1)))?;
        if row.len() != period {
            return Err(bad(format!(
                "row {} has {} values, expected {period}",
                k + 1,
                row.len()
            )));
        }
        rows.push(row);
    }
    if rows.len() != arms {
        return Err(bad(format!("expected {arms} rows, found {}", rows.len())));
    }
    Ok(rows)
}

pub fn format_mean_table(rows: &[Vec<f64>]) -> String {
    let period = rows.first().map_or(0, Vec::len);
    let mut out = format!("{} {}\n", rows.len(), period);
    for row in rows {
        let mut first = true;
        for v in row {
            if !first {
                out.push(' ');
            }
            first = false;
            // `{}` on f64 prints the shortest string that round-trips
            write!(out, "{v}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn read_mean_table(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_mean_table(&text, path)
}

pub fn write_mean_table(path: &Path, rows: &[Vec<f64>]) -> Result<()> {
    std::fs::write(path, format_mean_table(rows)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_figure_one() {
        let rows = parse_mean_table("2 2\n0.6 1\n0.4 0.8\n", Path::new("f")).unwrap();
        assert_eq!(rows, vec![vec![0.6, 1.0], vec![0.4, 0.8]]);
    }

    #[test]
    fn rejects_malformed() {
        let p = Path::new("f");
        assert!(parse_mean_table("", p).is_err());
        assert!(parse_mean_table("2\n0.1\n", p).is_err());
        assert!(parse_mean_table("2 2\n0.1 0.2\n", p).is_err());
        assert!(parse_mean_table("1 2\n0.1\n", p).is_err());
        assert!(parse_mean_table("1 1\n0,5\n", p).is_err());
        assert!(parse_mean_table("1 1\n0.5\n0.5\n", p).is_err());
    }

    #[test]
    fn format_has_no_trailing_whitespace() {
        let s = format_mean_table(&[vec![0.25, 1.0], vec![0.1, 0.3]]);
        assert_eq!(s, "2 2\n0.25 1\n0.1 0.3\n");
    }
}
