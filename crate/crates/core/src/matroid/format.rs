//! Plain-text matroid files.
//!
//! ```text
//! # Fano plane
//! rank 3
//! 001
//! 010
//! ...
//! ```
//!
//! Each element is a binary string of length `rank`, most significant
//! coordinate first. `#` starts a comment.

use super::Matroid;
use crate::error::{Error, ParseErrorKind, Result};
use crate::gf2::{rank_of_bits, PointSet, MAX_DENSE_DIM};

pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

pub(crate) fn parse_bits(line_no: usize, s: &str, len: usize) -> Result<u64> {
    if !s.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(Error::parse(
            line_no,
            ParseErrorKind::Syntax,
            format!("not a binary string: {s:?}"),
        ));
    }
    if s.len() != len {
        return Err(Error::parse(
            line_no,
            ParseErrorKind::WrongLength,
            format!("expected {len} bits, found {}", s.len()),
        ));
    }
    Ok(s.bytes()
        .fold(0u64, |acc, b| (acc << 1) | u64::from(b - b'0')))
}

pub(crate) fn bit_string(x: u64, len: usize) -> String {
    (0..len)
        .rev()
        .map(|i| if x >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

pub fn parse_matroid(text: &str) -> Result<Matroid> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| Error::parse(0, ParseErrorKind::Syntax, "empty input"))?;
    let rank: usize = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["rank", r] => r.parse().map_err(|_| {
            Error::parse(
                header_line,
                ParseErrorKind::Syntax,
                format!("bad rank {r:?}"),
            )
        })?,
        _ => {
            return Err(Error::parse(
                header_line,
                ParseErrorKind::Syntax,
                "expected `rank <r>`",
            ));
        }
    };
    if rank == 0 || rank > MAX_DENSE_DIM {
        return Err(Error::parse(
            header_line,
            ParseErrorKind::Syntax,
            format!("rank must be in 1..={MAX_DENSE_DIM}"),
        ));
    }
    let mut pts = PointSet::empty(rank);
    let mut last_line = header_line;
    for (no, line) in lines {
        let x = parse_bits(no, line, rank)?;
        if x == 0 {
            return Err(Error::parse(no, ParseErrorKind::ZeroVector, "zero vector"));
        }
        if pts.contains(x) {
            return Err(Error::parse(
                no,
                ParseErrorKind::Duplicate,
                format!("duplicate element {line}"),
            ));
        }
        pts.insert(x);
        last_line = no;
    }
    let r = rank_of_bits(pts.iter());
    if r != rank {
        return Err(Error::parse(
            last_line,
            ParseErrorKind::RankDeficient,
            format!("elements span rank {r}, header says {rank}"),
        ));
    }
    Matroid::new(rank, pts)
}

pub fn write_matroid(m: &Matroid) -> String {
    let mut out = format!("rank {}\n", m.rank());
    for x in m.elements().iter() {
        out.push_str(&bit_string(x, m.rank()));
        out.push('\n');
    }
    out
}
