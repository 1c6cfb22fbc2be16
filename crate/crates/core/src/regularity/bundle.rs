//! On-disk decomposition bundles: a directory holding `f1.tbl`, `f2.tbl`,
//! `f3.tbl` (one real per line), `factor.txt` and `params.json`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Decomposition, DecompositionParams};
use crate::error::{Error, ParseErrorKind, Result};
use crate::factor::{parse_factor, write_factor};
use crate::RealTable;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsFile {
    format_version: u32,
    #[serde(flatten)]
    params: DecompositionParams,
}

pub fn write_table(t: &RealTable) -> String {
    t.values().iter().map(|v| format!("{v}\n")).collect()
}

pub fn parse_table(text: &str) -> Result<RealTable> {
    let mut vals = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        vals.push(line.parse::<f64>().map_err(|_| {
            Error::parse(
                i + 1,
                ParseErrorKind::Syntax,
                format!("not a number: {line:?}"),
            )
        })?);
    }
    RealTable::new(vals)
}

pub fn write_bundle(dir: &Path, dec: &Decomposition) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("f1.tbl"), write_table(&dec.f1))?;
    fs::write(dir.join("f2.tbl"), write_table(&dec.f2))?;
    fs::write(dir.join("f3.tbl"), write_table(&dec.f3))?;
    fs::write(dir.join("factor.txt"), write_factor(&dec.factor))?;
    let p = ParamsFile {
        format_version: crate::FORMAT_VERSION,
        params: dec.params,
    };
    fs::write(dir.join("params.json"), serde_json::to_string_pretty(&p)?)?;
    Ok(())
}

pub fn read_bundle(dir: &Path) -> Result<Decomposition> {
    let read = |name: &str| fs::read_to_string(dir.join(name));
    let f1 = parse_table(&read("f1.tbl")?)?;
    let f2 = parse_table(&read("f2.tbl")?)?;
    let f3 = parse_table(&read("f3.tbl")?)?;
    let factor = parse_factor(&read("factor.txt")?)?;
    let p: ParamsFile = serde_json::from_str(&read("params.json")?)?;
    if p.format_version != crate::FORMAT_VERSION {
        return Err(Error::parameter(format!(
            "unsupported bundle format version {}",
            p.format_version
        )));
    }
    for t in [&f2, &f3] {
        if t.dim() != f1.dim() {
            return Err(Error::DimensionMismatch {
                expected: f1.dim(),
                found: t.dim(),
            });
        }
    }
    if factor.dim() != f1.dim() {
        return Err(Error::DimensionMismatch {
            expected: f1.dim(),
            found: factor.dim(),
        });
    }
    Ok(Decomposition {
        f1,
        f2,
        f3,
        factor,
        params: p.params,
    })
}

#[cfg(test)]
mod tests {
    use super::super::decompose_linear;
    use super::*;
    use crate::matroid::{make_geometry, Geometry};

    #[test]
    fn bundle_round_trip() {
        let dir = std::env::temp_dir().join(format!("matcount-bundle-{}", std::process::id()));
        let f = make_geometry(Geometry::BoseBurton { rank: 5, c: 2 })
            .unwrap()
            .indicator();
        let (dec, _) = decompose_linear(&f, 0.1).unwrap();
        write_bundle(&dir, &dec).unwrap();
        let back = read_bundle(&dir).unwrap();
        assert_eq!(back, dec);
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn table_text() {
        let t = RealTable::new(vec![0.1, -2.5, 1e-17, 3.0]).unwrap();
        assert_eq!(parse_table(&write_table(&t)).unwrap(), t);
        assert!(parse_table("1\n2\n3\n").is_err());
    }
}
