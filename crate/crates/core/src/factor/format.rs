//! Factor files: a `factor C <c> vars <n>` header followed by `c`
//! polynomials in the polynomial text format. `vars <n>` may be omitted
//! when `c > 0`.

use super::PolynomialFactor;
use crate::error::{Error, ParseErrorKind, Result};
use crate::matroid::format::content_lines;
use crate::polynomial::format::read_poly;
use crate::polynomial::write_poly;

pub fn parse_factor(text: &str) -> Result<PolynomialFactor> {
    let mut lines = content_lines(text).peekable();
    let (hl, header) = lines
        .next()
        .ok_or_else(|| Error::parse(0, ParseErrorKind::Syntax, "empty input"))?;
    let bad = |msg: &str| Error::parse(hl, ParseErrorKind::Syntax, msg.to_string());
    let words: Vec<&str> = header.split_whitespace().collect();
    let (c, vars): (usize, Option<usize>) = match words.as_slice() {
        ["factor", "C", c] => (c.parse().map_err(|_| bad("bad complexity"))?, None),
        ["factor", "C", c, "vars", n] => (
            c.parse().map_err(|_| bad("bad complexity"))?,
            Some(n.parse().map_err(|_| bad("bad variable count"))?),
        ),
        _ => return Err(bad("expected `factor C <c>`")),
    };
    let mut polys = Vec::with_capacity(c);
    for _ in 0..c {
        polys.push(read_poly(&mut lines)?);
    }
    if let Some((no, _)) = lines.next() {
        return Err(Error::parse(
            no,
            ParseErrorKind::Syntax,
            "more polynomials than declared",
        ));
    }
    let n = match (vars, polys.first()) {
        (Some(n), _) => n,
        (None, Some(p)) => p.dim(),
        (None, None) => return Err(bad("an empty factor needs `vars <n>`")),
    };
    PolynomialFactor::new(n, polys)
}

pub fn write_factor(b: &PolynomialFactor) -> String {
    let mut out = format!("factor C {} vars {}\n", b.complexity(), b.dim());
    for p in b.polys() {
        out.push_str(&write_poly(p));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::NonclassicalPoly;

    #[test]
    fn round_trip() {
        let b = PolynomialFactor::new(
            3,
            vec![
                NonclassicalPoly::new(3, [(0b011, 1)]).unwrap(),
                NonclassicalPoly::linear(3, 0b100),
            ],
        )
        .unwrap();
        assert_eq!(parse_factor(&write_factor(&b)).unwrap(), b);
        let e = PolynomialFactor::empty(5);
        assert_eq!(parse_factor(&write_factor(&e)).unwrap(), e);
    }

    #[test]
    fn count_mismatch() {
        assert!(parse_factor("factor C 2\npoly vars 2\nterm 1 depth 0\nend\n").is_err());
        assert!(parse_factor("factor C 0\npoly vars 2\nterm 1 depth 0\nend\n").is_err());
        assert!(parse_factor("factor C 0\n").is_err());
    }
}
