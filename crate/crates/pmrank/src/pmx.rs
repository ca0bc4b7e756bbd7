//! The `.pmx` text format for partial matrices.
//!
//! ```text
//! field q            (rationals)  |  field gf 5   (GF(5))
//! 3 3
//! 1 1 ?
//! ? 1 1
//! 2 ? 1
//! ```
//!
//! The writer emits the canonical form: single spaces, normalized scalar
//! literals, `?` for unknowns, one trailing newline.

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::ExactMatrix;
use crate::partial::PartialMatrix;

fn parse_err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

/// Tokens of a line together with their 1-based starting columns.
fn tokens_with_columns(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (idx, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..idx]));
            }
        } else if start.is_none() {
            start = Some(idx);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

pub fn parse(text: &str) -> Result<PartialMatrix> {
    let mut lines = text.lines().enumerate();

    let (idx, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, 1, "empty input, expected a field header"))?;
    let header_tokens = tokens_with_columns(header);
    let spec = match header_tokens.as_slice() {
        [(_, "field"), (_, "q")] => FieldSpec::RATIONALS,
        [(_, "field"), (_, "gf"), (col, p)] => {
            let p: u64 = p
                .parse()
                .map_err(|_| parse_err(idx + 1, *col, format!("`{p}` is not a modulus")))?;
            FieldSpec::prime(p)
                .map_err(|_| parse_err(idx + 1, *col, format!("{p} is not prime")))?
        }
        _ => {
            return Err(parse_err(
                idx + 1,
                1,
                "expected `field q` or `field gf <p>`",
            ))
        }
    };

    let (idx, dims) = lines
        .next()
        .ok_or_else(|| parse_err(2, 1, "expected `<rows> <cols>`"))?;
    let dim_tokens = tokens_with_columns(dims);
    let [(rc, rows_tok), (cc, cols_tok)] = dim_tokens.as_slice() else {
        return Err(parse_err(idx + 1, 1, "expected `<rows> <cols>`"));
    };
    let rows: usize = rows_tok
        .parse()
        .map_err(|_| parse_err(idx + 1, *rc, format!("`{rows_tok}` is not a dimension")))?;
    let cols: usize = cols_tok
        .parse()
        .map_err(|_| parse_err(idx + 1, *cc, format!("`{cols_tok}` is not a dimension")))?;

    let mut data: Vec<Vec<Option<Scalar>>> = Vec::with_capacity(rows);
    for r in 0..rows {
        let (idx, line) = lines
            .next()
            .ok_or_else(|| parse_err(3 + r, 1, format!("expected {rows} data rows, found {r}")))?;
        let toks = tokens_with_columns(line);
        if toks.len() != cols {
            return Err(parse_err(
                idx + 1,
                1,
                format!("expected {cols} entries, found {}", toks.len()),
            ));
        }
        let mut row = Vec::with_capacity(cols);
        for (col, tok) in toks {
            if tok == "?" {
                row.push(None);
            } else {
                let s = Scalar::parse(spec, tok).map_err(|msg| parse_err(idx + 1, col, msg))?;
                row.push(Some(s));
            }
        }
        data.push(row);
    }
    for (idx, line) in lines {
        if !line.trim().is_empty() {
            return Err(parse_err(idx + 1, 1, "unexpected trailing content"));
        }
    }
    PartialMatrix::from_rows(spec, data)
}

pub fn write(a: &PartialMatrix) -> String {
    let mut out = String::new();
    out.push_str(&format!("field {}\n", a.spec()));
    out.push_str(&format!("{} {}\n", a.rows(), a.cols()));
    for i in 1..=a.rows() {
        for j in 1..=a.cols() {
            if j > 1 {
                out.push(' ');
            }
            match a.value((i, j)) {
                Some(v) => out.push_str(&v.to_string()),
                None => out.push('?'),
            }
        }
        out.push('\n');
    }
    out
}

/// A full matrix as a `.pmx` file without any `?`.
pub fn write_matrix(m: &ExactMatrix) -> String {
    let mut out = String::new();
    out.push_str(&format!("field {}\n", m.spec()));
    out.push_str(&format!("{} {}\n", m.rows(), m.cols()));
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if j > 0 {
                out.push(' ');
            }
            out.push_str(&m.get(i, j).to_string());
        }
        out.push('\n');
    }
    out
}

/// Parse a `.pmx` file that must be fully known.
pub fn parse_matrix(text: &str) -> Result<ExactMatrix> {
    let partial = parse(text)?;
    if let Some(&pos) = partial.unknown_positions().first() {
        return Err(parse_err(
            pos.0 + 2,
            pos.1,
            "expected a fully known matrix, found `?`",
        ));
    }
    partial.complete(&Default::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_rational() {
        let text = "field q\n2 3\n1/2 ? -3\n? 0 22/7\n";
        let a = parse(text).unwrap();
        assert_eq!(write(&a), text);
    }

    #[test]
    fn round_trip_gf() {
        let text = "field gf 5\n2 2\n3 ?\n? 4\n";
        let a = parse(text).unwrap();
        assert_eq!(write(&a), text);
    }

    #[test]
    fn writer_canonicalizes() {
        let messy = "field q\n1 2\n  2/4\t ?\n";
        let a = parse(messy).unwrap();
        assert_eq!(write(&a), "field q\n1 2\n1/2 ?\n");
    }

    #[test]
    fn parse_reduces_gf_values() {
        let a = parse("field gf 3\n1 2\n5 -1\n").unwrap();
        assert_eq!(a.value((1, 1)).unwrap().residue(), Some(2));
        assert_eq!(a.value((1, 2)).unwrap().residue(), Some(2));
    }

    #[test]
    fn errors_carry_line_and_column() {
        let err = parse("field q\n2 2\n1 x\n3 4\n").unwrap_err();
        match err {
            Error::Parse { line, col, msg } => {
                assert_eq!(line, 3);
                assert_eq!(col, 3);
                assert!(msg.contains('x'));
            }
            other => panic!("unexpected error {other:?}"),
        }

        assert!(matches!(
            parse("field gf 6\n1 1\n1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse("field q\n2 2\n1 2\n"),
            Err(Error::Parse { line: 4, .. })
        ));
        assert!(matches!(
            parse("field q\n2 2\n1 2 3\n4 5\n"),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn full_matrix_round_trip() {
        let m = ExactMatrix::from_ints(FieldSpec::prime(7).unwrap(), &[&[1, 2], &[3, 4]]);
        let text = write_matrix(&m);
        assert_eq!(parse_matrix(&text).unwrap(), m);
        assert!(parse_matrix("field q\n1 1\n?\n").is_err());
    }
}
