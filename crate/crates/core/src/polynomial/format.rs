//! Text formats.
//!
//! A polynomial lists its terms, variables numbered from 1:
//!
//! ```text
//! poly vars 3
//! term 1,2 depth 0
//! term 3 depth 1
//! end
//! ```
//!
//! A table lists `2^n` values as `num/prec` (meaning `num / 2^prec`) in
//! point order, optionally preceded by declared degree and depth:
//!
//! ```text
//! polytable vars 1
//! declared 2 1
//! 0/0
//! 1/2
//! end
//! ```

use std::iter::Peekable;

use super::table::PolyTable;
use super::torus::{DyadicTorus, MAX_PREC};
use super::NonclassicalPoly;
use crate::error::{Error, ParseErrorKind, Result};
use crate::matroid::format::content_lines;

fn syntax(line: usize, msg: impl Into<String>) -> Error {
    Error::parse(line, ParseErrorKind::Syntax, msg)
}

fn parse_num<T: std::str::FromStr>(line: usize, s: &str, what: &str) -> Result<T> {
    s.parse()
        .map_err(|_| syntax(line, format!("bad {what} {s:?}")))
}

pub(crate) fn read_poly<'a, I>(lines: &mut Peekable<I>) -> Result<NonclassicalPoly>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    let (hl, header) = lines
        .next()
        .ok_or_else(|| syntax(0, "expected `poly vars <n>`"))?;
    let n: usize = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["poly", "vars", n] => parse_num(hl, n, "variable count")?,
        _ => return Err(syntax(hl, "expected `poly vars <n>`")),
    };
    if n == 0 || n > 63 {
        return Err(syntax(hl, "variable count must be in 1..=63"));
    }
    let mut terms = Vec::new();
    loop {
        let (no, line) = lines.next().ok_or_else(|| syntax(hl, "missing `end`"))?;
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            ["end"] => break,
            ["term", vars, "depth", k] => {
                let mut s = 0u64;
                for v in vars.split(',') {
                    let i: usize = parse_num(no, v, "variable")?;
                    if i == 0 || i > n {
                        return Err(syntax(no, format!("variable {i} outside 1..={n}")));
                    }
                    if s >> (i - 1) & 1 == 1 {
                        return Err(Error::parse(
                            no,
                            ParseErrorKind::Duplicate,
                            format!("variable {i} repeated"),
                        ));
                    }
                    s |= 1 << (i - 1);
                }
                let k: u32 = parse_num(no, k, "depth")?;
                if k >= MAX_PREC {
                    return Err(syntax(no, format!("depth {k} too large")));
                }
                if terms.contains(&(s, k)) {
                    return Err(Error::parse(no, ParseErrorKind::Duplicate, "repeated term"));
                }
                terms.push((s, k));
            }
            _ => return Err(syntax(no, format!("unexpected line {line:?}"))),
        }
    }
    NonclassicalPoly::new(n, terms)
}

pub fn parse_poly(text: &str) -> Result<NonclassicalPoly> {
    let mut lines = content_lines(text).peekable();
    let p = read_poly(&mut lines)?;
    if let Some((no, _)) = lines.next() {
        return Err(syntax(no, "trailing input after `end`"));
    }
    Ok(p)
}

pub fn write_poly(p: &NonclassicalPoly) -> String {
    let mut out = format!("poly vars {}\n", p.dim());
    for (s, k) in p.terms() {
        let vars: Vec<String> = (0..64)
            .filter(|i| s >> i & 1 == 1)
            .map(|i| (i + 1).to_string())
            .collect();
        out.push_str(&format!("term {} depth {k}\n", vars.join(",")));
    }
    out.push_str("end\n");
    out
}

pub fn parse_poly_table(text: &str) -> Result<PolyTable> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| syntax(0, "empty input"))?;
    let n: usize = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["polytable", "vars", n] => parse_num(hl, n, "variable count")?,
        _ => return Err(syntax(hl, "expected `polytable vars <n>`")),
    };
    if n > crate::gf2::MAX_DENSE_DIM {
        return Err(syntax(hl, "dimension too large for a table"));
    }
    let mut declared = (None, None);
    let mut values = Vec::with_capacity(1 << n);
    let mut end_line = hl;
    let mut ended = false;
    for (no, line) in lines {
        if ended {
            return Err(syntax(no, "trailing input after `end`"));
        }
        end_line = no;
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            ["end"] => ended = true,
            ["declared", d, k] if values.is_empty() => {
                declared = (
                    Some(parse_num(no, d, "degree")?),
                    Some(parse_num(no, k, "depth")?),
                );
            }
            [v] => {
                let (num, prec) = v
                    .split_once('/')
                    .ok_or_else(|| syntax(no, "expected num/prec"))?;
                let prec: u32 = parse_num(no, prec, "precision")?;
                if prec > MAX_PREC {
                    return Err(syntax(no, "precision too large"));
                }
                values.push(DyadicTorus::new(parse_num(no, num, "numerator")?, prec));
            }
            _ => return Err(syntax(no, format!("unexpected line {line:?}"))),
        }
    }
    if !ended {
        return Err(syntax(end_line, "missing `end`"));
    }
    if values.len() != 1 << n {
        return Err(Error::parse(
            end_line,
            ParseErrorKind::WrongLength,
            format!("expected {} values, found {}", 1u64 << n, values.len()),
        ));
    }
    Ok(PolyTable::from_values(n, &values)?.with_declared(declared.0, declared.1))
}

pub fn write_poly_table(t: &PolyTable) -> String {
    let mut out = format!("polytable vars {}\n", t.dim());
    if let (Some(d), Some(k)) = (t.declared_degree(), t.declared_depth()) {
        out.push_str(&format!("declared {d} {k}\n"));
    }
    for v in t.iter() {
        out.push_str(&format!("{v}\n"));
    }
    out.push_str("end\n");
    out
}
