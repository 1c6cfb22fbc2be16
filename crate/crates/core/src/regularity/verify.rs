use serde::Serialize;

use super::{conditional_expectation, Decomposition, EtaSchedule};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::factor::factor_uniformity;
use crate::gowers::{gowers_norm_real, GowersStrategy};
use crate::RealTable;

const TOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct ConditionCheck {
    pub condition: &'static str,
    pub description: &'static str,
    pub passed: bool,
    pub measured: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PartitionReport {
    pub checks: Vec<ConditionCheck>,
    pub passed: bool,
}

impl PartitionReport {
    pub fn check(&self, condition: &str) -> Option<&ConditionCheck> {
        self.checks.iter().find(|c| c.condition == condition)
    }
}

fn max_abs_diff(a: &RealTable, b: &RealTable) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Range violation: how far the values stray outside `[lo, hi]`.
fn range_excess(t: &RealTable, lo: f64, hi: f64) -> f64 {
    t.values()
        .iter()
        .map(|&v| (lo - v).max(v - hi).max(0.0))
        .fold(0.0, f64::max)
}

/// Checks conditions (i)–(vi) of a regular partition of `f`:
///
/// * (i) `f = f1 + f2 + f3`
/// * (ii) `f1 = E[f | B]`
/// * (iii) `‖f2‖_{U^{d+1}} <= η(C)`
/// * (iv) `‖f3‖_2 <= δ`
/// * (v) `f1, f1+f3 ∈ [0,1]` and `f2, f3 ∈ [-1,1]`
/// * (vi) `B` has degree at most `d` and measured uniformity below `ε_target`
///
/// Every failure is reported rather than returned as an error.
pub fn verify_partition(
    f: &RealTable,
    dec: &Decomposition,
    delta: f64,
    eta: &EtaSchedule,
    d: usize,
    epsilon_target: f64,
    budget: &Budget,
) -> Result<PartitionReport> {
    let n = f.dim();
    for t in [&dec.f1, &dec.f2, &dec.f3] {
        if t.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: t.dim(),
            });
        }
    }
    let mut checks = Vec::new();
    let mut push = |condition, description, measured: f64, bound: f64| {
        checks.push(ConditionCheck {
            condition,
            description,
            passed: measured <= bound,
            measured,
            bound,
        });
    };

    let sum = RealTable::from_fn(n, |x| dec.f1.get(x) + dec.f2.get(x) + dec.f3.get(x));
    push("i", "f = f1 + f2 + f3", max_abs_diff(f, &sum), TOL);

    let cond = conditional_expectation(f, &dec.factor)?;
    push("ii", "f1 = E[f|B]", max_abs_diff(&dec.f1, &cond), TOL);

    let strategy = GowersStrategy::fastest_for(d + 1);
    let u = gowers_norm_real(&dec.f2, d + 1, strategy, budget)?;
    push(
        "iii",
        "‖f2‖_{U^{d+1}} <= η(|B|)",
        u,
        eta.eval(dec.factor.complexity()) + TOL,
    );

    let l2 = dec.f3.values().iter().map(|v| v * v).sum::<f64>() / dec.f3.len() as f64;
    push("iv", "‖f3‖_2 <= δ", l2.sqrt(), delta + TOL);

    let f1f3 = dec.f1.zip_with(&dec.f3, |a, b| a + b)?;
    let excess = range_excess(&dec.f1, 0.0, 1.0)
        .max(range_excess(&f1f3, 0.0, 1.0))
        .max(range_excess(&dec.f2, -1.0, 1.0))
        .max(range_excess(&dec.f3, -1.0, 1.0));
    push("v", "ranges of f1, f1+f3, f2, f3", excess, TOL);

    let deg = dec.factor.degree();
    let eps = if deg <= d {
        factor_uniformity(&dec.factor, budget)?
    } else {
        f64::INFINITY
    };
    checks.push(ConditionCheck {
        condition: "vi",
        description: "deg B <= d and B is ε-uniform",
        passed: deg <= d && eps < epsilon_target,
        measured: eps,
        bound: epsilon_target,
    });

    let passed = checks.iter().all(|c| c.passed);
    Ok(PartitionReport { checks, passed })
}

#[cfg(test)]
mod tests {
    use super::super::decompose_linear;
    use super::*;
    use crate::factor::PolynomialFactor;
    use crate::matroid::{make_geometry, Geometry};
    use crate::regularity::DecompositionParams;

    #[test]
    fn decompose_linear_output_passes() {
        let f = make_geometry(Geometry::BoseBurton { rank: 6, c: 2 })
            .unwrap()
            .indicator();
        let (dec, _) = decompose_linear(&f, 0.05).unwrap();
        let r = verify_partition(
            &f,
            &dec,
            0.0,
            &EtaSchedule::Constant(dec.params.eta),
            1,
            0.1,
            &Budget::default(),
        )
        .unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn injected_f3_fails_only_condition_iv() {
        let n = 5;
        let f = make_geometry(Geometry::Affine { rank: n })
            .unwrap()
            .indicator();
        let (mut dec, _) = decompose_linear(&f, 0.05).unwrap();
        let delta = 0.05;
        // Shift 2δ toward 1/2 into f3 and compensate in f2.
        let f1 = dec.f1.clone();
        dec.f3 = RealTable::from_fn(n, |x| {
            if f1.get(x) > 0.5 {
                -2.0 * delta
            } else {
                2.0 * delta
            }
        });
        dec.f2 = RealTable::from_fn(n, |x| f.get(x) - dec.f1.get(x) - dec.f3.get(x));
        let eta = EtaSchedule::Constant(1.0);
        let r = verify_partition(&f, &dec, delta, &eta, 1, 0.1, &Budget::default()).unwrap();
        let failed: Vec<&str> = r
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.condition)
            .collect();
        assert_eq!(failed, vec!["iv"]);
        assert!((r.check("iv").unwrap().measured - 2.0 * delta).abs() < 1e-12);
    }

    #[test]
    fn planted_character_in_f2() {
        let n = 4;
        let f2 = RealTable::from_fn(n, |x| if x & 1 == 0 { 0.5 } else { -0.5 });
        let f1 = RealTable::constant(n, 0.5);
        let f = f1.zip_with(&f2, |a, b| a + b).unwrap();
        let dec = Decomposition {
            f1,
            f2,
            f3: RealTable::zeros(n),
            factor: PolynomialFactor::empty(n),
            params: DecompositionParams {
                delta: 0.0,
                eta: 0.4,
                d: 1,
            },
        };
        let r = verify_partition(
            &f,
            &dec,
            0.0,
            &EtaSchedule::Constant(0.4),
            1,
            0.1,
            &Budget::default(),
        )
        .unwrap();
        let iii = r.check("iii").unwrap();
        assert!((iii.measured - 0.5).abs() < 1e-12);
        assert!(!iii.passed);
    }
}
