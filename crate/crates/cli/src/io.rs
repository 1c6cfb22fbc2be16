use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use matcount::matroid::{make_geometry, parse_matroid};
use matcount::{Error, Geometry, Matroid};
use serde::{Deserialize, Serialize};

use crate::args::Format;

/// Parameters shared by the randomized experiments.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: Option<usize>,
    pub density: Option<f64>,
    pub seed: Option<u64>,
    pub delta: Option<f64>,
    pub ell: Option<usize>,
}

impl ExperimentConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| param(format!("config {}: {e}", path.display())))
    }
}

pub fn missing(flag: &str) -> anyhow::Error {
    anyhow!(Error::Parameter(format!("{flag} is required")))
}

pub fn param(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(Error::Parameter(msg.into()))
}

fn geometry(spec: &str) -> Option<Result<Geometry>> {
    let (kind, rest) = spec.split_once(':')?;
    let nums: std::result::Result<Vec<usize>, _> = rest.split(',').map(str::parse).collect();
    let Ok(nums) = nums else {
        return Some(Err(param(format!("bad geometry parameters in {spec:?}"))));
    };
    let g = match (kind.to_ascii_lowercase().as_str(), nums.as_slice()) {
        ("pg", &[rank]) => Geometry::Projective { rank },
        ("ag", &[rank]) => Geometry::Affine { rank },
        ("bb", &[rank, c]) => Geometry::BoseBurton { rank, c },
        ("n", &[ell, c, k]) => Geometry::Extended { ell, c, k },
        _ => return Some(Err(param(format!("unknown geometry {spec:?}")))),
    };
    Some(Ok(g))
}

/// A matroid from a file path or a geometry spec.
pub fn load_matroid(spec: Option<&str>, flag: &str) -> Result<Matroid> {
    let spec = spec.ok_or_else(|| missing(flag))?;
    if !Path::new(spec).exists() {
        if let Some(g) = geometry(spec) {
            return Ok(make_geometry(g?)?);
        }
    }
    let text = fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?;
    parse_matroid(&text).with_context(|| format!("in {spec}"))
}

pub fn read_path(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub struct Output {
    pub path: Option<PathBuf>,
    pub format: Format,
}

impl Output {
    fn write(&self, text: &str) -> Result<()> {
        match &self.path {
            Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())?;
                out.flush()?;
                Ok(())
            }
        }
    }

    pub fn json<T: Serialize + ?Sized>(&self, value: &T) -> Result<()> {
        if self.format == Format::Csv {
            return Err(param("csv output is only available for tabular scans"));
        }
        self.write(&(serde_json::to_string(value)? + "\n"))
    }

    pub fn rows<T: Serialize>(&self, rows: &[T]) -> Result<()> {
        if self.format == Format::Json {
            return self.json(rows);
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in rows {
            w.serialize(r)?;
        }
        self.write(&String::from_utf8(w.into_inner()?)?)
    }

    pub fn text(&self, text: &str) -> Result<()> {
        self.write(text)
    }
}
