//! Plain-text formats.
//!
//! Matrix: `m` lines of `m` space-separated residues, row-major, unit diagonal.
//!
//! Equation file:
//!
//! ```text
//! p 3
//! n 3
//! matrix g1
//! 1 1 0
//! 0 1 2
//! 0 0 1
//! word x g1 x
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use crate::error::{Error, Result};
use crate::field::Prime;
use crate::group::GroupElement;
use crate::word::{CoefficientTable, Word};

pub fn render_matrix(g: &GroupElement) -> String {
    let mut out = String::new();
    for row in g.to_matrix() {
        let line: Vec<String> = row.iter().map(u32::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
}

fn parse_row(line_no: usize, line: &str) -> Result<Vec<u32>> {
    let mut row = Vec::new();
    let mut offset = 0;
    for tok in line.split_whitespace() {
        let column = offset + line[offset..].find(tok).expect("token comes from line") + 1;
        offset = column - 1 + tok.len();
        row.push(tok.parse().map_err(|_| {
            parse_error(
                line_no,
                column,
                format!("expected a residue, found `{tok}`"),
            )
        })?);
    }
    Ok(row)
}

fn build_matrix(p: Prime, rows: &[(usize, Vec<u32>)], size: usize) -> Result<GroupElement> {
    for (line_no, row) in rows {
        if row.len() != size {
            return Err(parse_error(
                *line_no,
                1,
                format!("expected {size} entries, found {}", row.len()),
            ));
        }
    }
    let body: Vec<Vec<u32>> = rows.iter().map(|(_, r)| r.clone()).collect();
    GroupElement::from_matrix(p, &body).map_err(|e| {
        let line = rows.first().map_or(1, |(l, _)| *l);
        parse_error(line, 1, e.to_string())
    })
}

/// Parses a standalone matrix; the size is the number of rows.
pub fn parse_matrix(p: Prime, text: &str) -> Result<GroupElement> {
    let rows: Vec<(usize, Vec<u32>)> = content_lines(text)
        .map(|(n, l)| parse_row(n, l).map(|r| (n, r)))
        .collect::<Result<_>>()?;
    if rows.is_empty() {
        return Err(parse_error(1, 1, "empty matrix"));
    }
    let size = rows.len();
    build_matrix(p, &rows, size)
}

/// Contents of an equation file.
#[derive(Clone, Debug)]
pub struct EquationFile {
    pub p: Prime,
    pub n: usize,
    /// Coefficient names in declaration order.
    pub names: Vec<String>,
    pub table: CoefficientTable,
    pub word: Word,
}

fn header_value(lines: &mut dyn Iterator<Item = (usize, &str)>, key: &str) -> Result<(usize, u64)> {
    let (line_no, line) = lines
        .next()
        .ok_or_else(|| parse_error(1, 1, format!("missing `{key}` line")))?;
    let mut toks = line.split_whitespace();
    if toks.next() != Some(key) {
        return Err(parse_error(line_no, 1, format!("expected `{key} <value>`")));
    }
    let value = toks.next().and_then(|v| v.parse().ok()).ok_or_else(|| {
        parse_error(
            line_no,
            key.len() + 2,
            format!("expected an integer after `{key}`"),
        )
    })?;
    if toks.next().is_some() {
        return Err(parse_error(line_no, 1, "trailing tokens"));
    }
    Ok((line_no, value))
}

impl EquationFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (p_line, p_raw) = header_value(&mut lines, "p")?;
        let p = u32::try_from(p_raw)
            .ok()
            .and_then(|v| Prime::new(v).ok())
            .ok_or_else(|| parse_error(p_line, 3, format!("{p_raw} is not a prime")))?;
        let (n_line, n_raw) = header_value(&mut lines, "n")?;
        let n = n_raw as usize;
        if n < 2 {
            return Err(parse_error(n_line, 3, "n must be at least 2"));
        }
        let mut table = CoefficientTable::new(p, n);
        let mut names = Vec::new();
        let mut word_line = None;
        while let Some((line_no, line)) = lines.next() {
            let trimmed = line.trim_start();
            let indent = line.len() - trimmed.len();
            if let Some(rest) = trimmed.strip_prefix("matrix") {
                let name = rest.trim();
                if name.is_empty() || name == "x" || !rest.starts_with(char::is_whitespace) {
                    return Err(parse_error(line_no, indent + 1, "expected `matrix <name>`"));
                }
                if table.get(name).is_some() {
                    return Err(parse_error(
                        line_no,
                        indent + 8,
                        format!("duplicate matrix `{name}`"),
                    ));
                }
                let mut rows = Vec::with_capacity(n);
                for _ in 0..n {
                    let (row_no, row) = lines.next().ok_or_else(|| {
                        parse_error(line_no, 1, format!("matrix `{name}` needs {n} rows"))
                    })?;
                    rows.push((row_no, parse_row(row_no, row)?));
                }
                table.insert(name, build_matrix(p, &rows, n)?)?;
                names.push(name.to_string());
            } else if let Some(rest) = trimmed.strip_prefix("word") {
                if !rest.starts_with(char::is_whitespace) {
                    return Err(parse_error(line_no, indent + 1, "expected `word <tokens>`"));
                }
                word_line = Some((line_no, indent + 5, rest.to_string()));
                if let Some((extra, _)) = lines.next() {
                    return Err(parse_error(
                        extra,
                        1,
                        "unexpected content after the word line",
                    ));
                }
                break;
            } else {
                return Err(parse_error(
                    line_no,
                    indent + 1,
                    "expected `matrix <name>` or `word <tokens>`",
                ));
            }
        }
        let (line_no, col, text) = word_line
            .ok_or_else(|| parse_error(text.lines().count().max(1), 1, "missing `word` line"))?;
        let word = Word::parse_at(&text, &table, line_no, col)?;
        Ok(EquationFile {
            p,
            n,
            names,
            table,
            word,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "p 3\nn 3\n# comment\nmatrix g1\n1 1 0\n0 1 2\n0 0 1\n\nmatrix g2\n1 0 1\n0 1 0\n0 0 1\nword x g1 x g2\n";

    #[test]
    fn parses_sample() {
        let f = EquationFile::parse(SAMPLE).unwrap();
        assert_eq!(f.p.get(), 3);
        assert_eq!(f.n, 3);
        assert_eq!(f.names, vec!["g1", "g2"]);
        assert_eq!(f.word.render(), "x g1 x g2");
        assert_eq!(f.table.get("g1").unwrap().entry(1, 2), 2);
    }

    #[test]
    fn reports_positions() {
        let bad = SAMPLE.replace("0 1 2", "0 1 z");
        match EquationFile::parse(&bad) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (6, 5)),
            other => panic!("{other:?}"),
        }
        let bad = SAMPLE.replace("word x g1 x g2", "word x g1 y");
        match EquationFile::parse(&bad) {
            Err(Error::Parse {
                line,
                column,
                message,
            }) => {
                assert_eq!((line, column), (13, 11));
                assert!(message.contains("unknown token `y`"));
            }
            other => panic!("{other:?}"),
        }
        assert!(EquationFile::parse("p 4\nn 3\nword x\n").is_err());
        assert!(EquationFile::parse("p 3\nn 3\n").is_err());
        let not_unit = SAMPLE.replace("1 1 0\n0 1 2", "2 1 0\n0 1 2");
        assert!(matches!(
            EquationFile::parse(&not_unit),
            Err(Error::Parse { line: 5, .. })
        ));
    }

    #[test]
    fn matrix_round_trip() {
        let p = Prime::new(5).unwrap();
        let g = parse_matrix(p, "1 2 3\n0 1 4\n0 0 1\n").unwrap();
        assert_eq!(render_matrix(&g), "1 2 3\n0 1 4\n0 0 1\n");
        assert_eq!(parse_matrix(p, &render_matrix(&g)).unwrap(), g);
        assert!(parse_matrix(p, "1 2\n0 1 0\n").is_err());
        assert!(parse_matrix(p, "").is_err());
    }
}
