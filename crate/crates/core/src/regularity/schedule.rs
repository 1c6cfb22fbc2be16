use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A non-increasing function `η: N -> R+` of the factor complexity.
#[derive(Debug, Clone, PartialEq)]
pub enum EtaSchedule {
    Constant(f64),
    /// `a · 2^(-b·C)`.
    Exponential {
        a: f64,
        b: f64,
    },
    /// `values[C]`, with the last entry repeated beyond the end.
    Table(Vec<f64>),
}

impl EtaSchedule {
    /// `η(C) = (ζ/3)^m · 2^(-d·C·m - 3)`.
    pub fn counting_default(zeta: f64, m: usize, d: usize) -> Self {
        EtaSchedule::Exponential {
            a: (zeta / 3.0).powi(m as i32) / 8.0,
            b: (d * m) as f64,
        }
    }

    pub fn eval(&self, c: usize) -> f64 {
        match self {
            EtaSchedule::Constant(v) => *v,
            EtaSchedule::Exponential { a, b } => a * 2f64.powf(-b * c as f64),
            EtaSchedule::Table(v) => v[c.min(v.len() - 1)],
        }
    }

    fn validate(self) -> Result<Self> {
        let ok = match &self {
            EtaSchedule::Constant(v) => *v > 0.0 && v.is_finite(),
            EtaSchedule::Exponential { a, b } => {
                *a > 0.0 && *b >= 0.0 && a.is_finite() && b.is_finite()
            }
            EtaSchedule::Table(v) => {
                !v.is_empty()
                    && v.iter().all(|x| *x > 0.0 && x.is_finite())
                    && v.windows(2).all(|w| w[1] <= w[0])
            }
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::parameter(format!(
                "η schedule {self} must be positive and non-increasing"
            )))
        }
    }
}

/// Accepts `0.01`, `0.5*2^(-3*C)` or a comma-separated table `0.1,0.05,0.01`.
impl FromStr for EtaSchedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let num = |t: &str| -> Result<f64> {
            t.parse()
                .map_err(|_| Error::parameter(format!("bad number {t:?} in η schedule")))
        };
        let sched = if let Some((a, rest)) = s.split_once("*2^(-") {
            let b = rest
                .strip_suffix("*C)")
                .ok_or_else(|| Error::parameter(format!("expected `a*2^(-b*C)`, got {s:?}")))?;
            EtaSchedule::Exponential {
                a: num(a)?,
                b: num(b)?,
            }
        } else if s.contains(',') {
            EtaSchedule::Table(s.split(',').map(num).collect::<Result<_>>()?)
        } else {
            EtaSchedule::Constant(num(&s)?)
        };
        sched.validate()
    }
}

impl fmt::Display for EtaSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EtaSchedule::Constant(v) => write!(f, "{v}"),
            EtaSchedule::Exponential { a, b } => write!(f, "{a}*2^(-{b}*C)"),
            EtaSchedule::Table(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "{}", parts.join(","))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_eval() {
        let e: EtaSchedule = "0.5*2^(-3*C)".parse().unwrap();
        assert_eq!(e.eval(0), 0.5);
        assert_eq!(e.eval(1), 0.0625);
        let t: EtaSchedule = "0.1, 0.05".parse().unwrap();
        assert_eq!(t.eval(7), 0.05);
        assert_eq!(
            "0.25".parse::<EtaSchedule>().unwrap(),
            EtaSchedule::Constant(0.25)
        );
        for s in [e, t] {
            assert_eq!(s.to_string().parse::<EtaSchedule>().unwrap(), s);
        }
    }

    #[test]
    fn rejects_increasing_or_nonpositive() {
        assert!("0.1,0.2".parse::<EtaSchedule>().is_err());
        assert!("-1".parse::<EtaSchedule>().is_err());
        assert!("x".parse::<EtaSchedule>().is_err());
    }

    #[test]
    fn counting_default_value() {
        let e = EtaSchedule::counting_default(0.9, 3, 1);
        assert!((e.eval(0) - 0.3f64.powi(3) / 8.0).abs() < 1e-15);
        assert!((e.eval(2) - 0.3f64.powi(3) / 8.0 / 64.0).abs() < 1e-15);
    }
}
