//! Line-oriented helpers shared by the digraph, family and matrix text formats.
//!
//! All formats allow `#` comment lines anywhere. Line numbers reported in
//! errors are 1-based and refer to the original input.

use crate::error::{Error, Result};

/// A non-comment input line together with its 1-based line number.
pub(crate) struct Line<'a> {
    pub number: usize,
    pub text: &'a str,
}

/// Lines of `input` that are not comments. Blank lines are kept: the family
/// format gives them meaning.
pub(crate) fn data_lines(input: &str) -> impl Iterator<Item = Line<'_>> {
    input
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim_start().starts_with('#'))
        .map(|(i, l)| Line {
            number: i + 1,
            text: l.trim_end_matches('\r'),
        })
}

pub(crate) fn parse_count(line: &Line<'_>, what: &str) -> Result<usize> {
    let t = line.text.trim();
    t.parse::<usize>().map_err(|_| {
        let column = line.text.find(|c: char| !c.is_whitespace()).unwrap_or(0) + 1;
        Error::parse(line.number, column, format!("expected {what}, found {t:?}"))
    })
}

/// Parses a row of exactly `n` characters from `{0,1}`.
pub(crate) fn parse_bit_row(line: &Line<'_>, n: usize) -> Result<Vec<bool>> {
    let row = line.text.trim_end();
    let mut bits = Vec::with_capacity(n);
    for (i, c) in row.chars().enumerate() {
        match c {
            '0' => bits.push(false),
            '1' => bits.push(true),
            other => {
                return Err(Error::parse(
                    line.number,
                    i + 1,
                    format!("expected '0' or '1', found {other:?}"),
                ))
            }
        }
    }
    if bits.len() != n {
        return Err(Error::parse(
            line.number,
            bits.len().min(n) + 1,
            format!("expected {n} entries, found {}", bits.len()),
        ));
    }
    Ok(bits)
}

/// Reads `n` followed by `n` rows of `n` bits. Blank lines are skipped.
pub(crate) fn parse_square_bits(input: &str) -> Result<Vec<Vec<bool>>> {
    let mut lines = data_lines(input).filter(|l| !l.text.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::parse(1, 1, "missing vertex count"))?;
    let n = parse_count(&header, "a count")?;
    let mut rows = Vec::with_capacity(n);
    let mut last = header.number;
    for _ in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| Error::parse(last + 1, 1, format!("expected {n} rows, found {}", rows.len())))?;
        last = line.number;
        rows.push(parse_bit_row(&line, n)?);
    }
    if let Some(extra) = lines.next() {
        return Err(Error::parse(extra.number, 1, "unexpected data after the last row"));
    }
    Ok(rows)
}
