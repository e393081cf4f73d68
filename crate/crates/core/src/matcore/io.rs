//! Plain-text matrix format: a `rows cols` header line followed by `rows`
//! lines of whitespace-separated entries. Entries are written with 17
//! significant digits so that a write/read round trip is lossless.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

use super::{from_rows, Mat};

pub fn format_matrix(a: &Mat) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", a.nrows(), a.ncols());
    for row in a.row_iter() {
        let line: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

pub fn parse_matrix(text: &str) -> Result<Mat> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad header token {t:?}: {e}")))
        })
        .collect::<Result<_>>()?;
    let (rows, cols) = match dims.as_slice() {
        [r, c] if *r > 0 && *c > 0 => (*r, *c),
        _ => {
            return Err(Error::Parse(format!(
                "header must be 'rows cols', got {header:?}"
            )))
        }
    };
    let mut data = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {rows} rows, found {i}")))?;
        let before = data.len();
        for tok in line.split_whitespace() {
            let v: f64 = tok
                .parse()
                .map_err(|e| Error::Parse(format!("bad entry {tok:?} in row {i}: {e}")))?;
            data.push(v);
        }
        if data.len() - before != cols {
            return Err(Error::Parse(format!(
                "row {i} has {} entries, expected {cols}",
                data.len() - before
            )));
        }
    }
    if lines.next().is_some() {
        return Err(Error::Parse(format!("more than {rows} rows of data")));
    }
    from_rows(rows, cols, &data)
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<Mat> {
    parse_matrix(&std::fs::read_to_string(path)?)
}

pub fn write_matrix(path: impl AsRef<Path>, a: &Mat) -> Result<()> {
    std::fs::write(path, format_matrix(a))?;
    Ok(())
}
