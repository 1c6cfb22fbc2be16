use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use super::consistency::{consistency_group, ConsistencyGroup};
use super::{factor_uniformity, PolynomialFactor};
use crate::budget::Budget;
use crate::counting::LinearFormSystem;
use crate::error::{Error, Result};
use crate::polynomial::DyadicTorus;

pub(crate) fn groups_for(
    b: &PolynomialFactor,
    l: &LinearFormSystem,
    budget: &Budget,
) -> Result<Vec<ConsistencyGroup>> {
    let mut cache: HashMap<(usize, u32), ConsistencyGroup> = HashMap::new();
    let mut out = Vec::new();
    for p in b.polys() {
        let key = (p.degree().max(1), p.depth());
        if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(key) {
            let g = consistency_group(l, key.0, key.1, l.vars() + key.0, budget)?;
            e.insert(g);
        }
        out.push(cache[&key].clone());
    }
    Ok(out)
}

/// `K = Π_i |Φ_{d_i,k_i}(N)|`.
pub fn k_product(groups: &[ConsistencyGroup]) -> f64 {
    groups.iter().map(|g| g.size as f64).product()
}

/// `|Pr_X[P_i(L_j(X)) = β_{i,j} for all i, j] - 1/K|` for one assignment,
/// given as `C` rows of `m` values.
pub fn equidistribution_report(
    b: &PolynomialFactor,
    l: &LinearFormSystem,
    beta: &[Vec<DyadicTorus>],
    budget: &Budget,
) -> Result<f64> {
    if beta.len() != b.complexity() {
        return Err(Error::DimensionMismatch {
            expected: b.complexity(),
            found: beta.len(),
        });
    }
    let groups = groups_for(b, l, budget)?;
    for (i, (row, g)) in beta.iter().zip(&groups).enumerate() {
        if !g.contains(row) {
            return Err(Error::contract(format!(
                "row {} of the assignment is not consistent with N",
                i + 1
            )));
        }
    }
    budget.check_log2("equidistribution_report", (b.dim() * l.vars()) as f64)?;
    let targets: Vec<u64> = (0..l.len())
        .map(|j| {
            let col: Vec<DyadicTorus> = beta.iter().map(|row| row[j]).collect();
            b.encode(&col).map(|a| a.0)
        })
        .collect::<Result<_>>()?;
    let hits = count_tuples(b, l)
        .into_iter()
        .find(|(t, _)| *t == targets)
        .map_or(0, |(_, c)| c);
    let p = hits as f64 / 2f64.powi((b.dim() * l.vars()) as i32);
    Ok((p - 1.0 / k_product(&groups)).abs())
}

/// Counts of atom tuples `(atom(L_1(X)), …, atom(L_m(X)))` over all `X`.
fn count_tuples(b: &PolynomialFactor, l: &LinearFormSystem) -> BTreeMap<Vec<u64>, u64> {
    let atoms = b.atom_table();
    let n = b.dim();
    let ell = l.vars();
    let rest_bits = n * ell.saturating_sub(1);
    let shards: Vec<BTreeMap<Vec<u64>, u64>> = (0..1u64 << n)
        .into_par_iter()
        .map(|x0| {
            let mut local = BTreeMap::new();
            let mut xs = vec![0u64; ell];
            for rest in 0u64..1 << rest_bits {
                xs[0] = x0;
                for (i, x) in xs.iter_mut().enumerate().skip(1) {
                    *x = (rest >> ((i - 1) * n)) & ((1 << n) - 1);
                }
                let key: Vec<u64> = (0..l.len())
                    .map(|j| atoms[l.eval(j, &xs) as usize])
                    .collect();
                *local.entry(key).or_insert(0) += 1;
            }
            local
        })
        .collect();
    let mut total = BTreeMap::new();
    for s in shards {
        for (k, c) in s {
            *total.entry(k).or_insert(0) += c;
        }
    }
    total
}

#[derive(Debug, Clone, Serialize)]
pub struct EquidistributionReport {
    #[serde(rename = "K")]
    pub k: f64,
    pub assignments_observed: usize,
    /// Observed tuples that fall outside `Π Φ_i`; always 0 for genuine
    /// polynomials of the recorded degrees.
    pub inconsistent_observed: usize,
    pub max_deviation: f64,
    pub uniformity_measured: f64,
    /// False when the factor is not `ε`-uniform, in which case the
    /// deviation carries no guarantee.
    pub uniform: bool,
}

/// Deviation from `1/K` maximized over every consistent assignment.
pub fn equidistribution_scan(
    b: &PolynomialFactor,
    l: &LinearFormSystem,
    epsilon: f64,
    budget: &Budget,
) -> Result<EquidistributionReport> {
    let groups = groups_for(b, l, budget)?;
    budget.check_log2("equidistribution_scan", (b.dim() * l.vars()) as f64)?;
    let k = k_product(&groups);
    let total = 2f64.powi((b.dim() * l.vars()) as i32);
    let counts = count_tuples(b, l);
    let mut inconsistent = 0;
    let mut dev: f64 = 0.0;
    for (tuple, &c) in &counts {
        let cols: Vec<Vec<DyadicTorus>> = tuple
            .iter()
            .map(|&a| b.decode(super::AtomIndex(a)))
            .collect();
        let ok = groups
            .iter()
            .enumerate()
            .all(|(i, g)| g.contains(&cols.iter().map(|col| col[i]).collect::<Vec<_>>()));
        if ok {
            dev = dev.max((c as f64 / total - 1.0 / k).abs());
        } else {
            inconsistent += 1;
        }
    }
    let consistent_seen = counts.len() - inconsistent;
    if (consistent_seen as f64) < k {
        dev = dev.max(1.0 / k);
    }
    let eps = factor_uniformity(b, budget)?;
    Ok(EquidistributionReport {
        k,
        assignments_observed: counts.len(),
        inconsistent_observed: inconsistent,
        max_deviation: dev,
        uniformity_measured: eps,
        uniform: eps < epsilon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::NonclassicalPoly;

    fn linear_factor(n: usize, xis: &[u64]) -> PolynomialFactor {
        PolynomialFactor::new(
            n,
            xis.iter()
                .map(|&x| NonclassicalPoly::linear(n, x))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn single_form_exact() {
        let b = linear_factor(4, &[1, 6]);
        let l = LinearFormSystem::new(1, vec![1]).unwrap();
        let half = DyadicTorus::new(1, 1);
        let dev = equidistribution_report(
            &b,
            &l,
            &[vec![half], vec![DyadicTorus::ZERO]],
            &Budget::default(),
        )
        .unwrap();
        assert_eq!(dev, 0.0);
    }

    #[test]
    fn triangle_over_linear_factor() {
        let b = linear_factor(6, &[0b000011, 0b011100]);
        let l = LinearFormSystem::new(2, vec![1, 2, 3]).unwrap();
        let r = equidistribution_scan(&b, &l, 0.1, &Budget::default()).unwrap();
        assert_eq!(r.k, 16.0);
        assert_eq!(r.inconsistent_observed, 0);
        assert!(r.max_deviation <= r.uniformity_measured + 1e-12);
        assert!(r.uniform);
    }

    #[test]
    fn inconsistent_assignment_rejected() {
        let b = linear_factor(3, &[1]);
        let l = LinearFormSystem::new(2, vec![1, 2, 3]).unwrap();
        let h = DyadicTorus::new(1, 1);
        let z = DyadicTorus::ZERO;
        assert!(matches!(
            equidistribution_report(&b, &l, &[vec![h, z, z]], &Budget::default()),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn duplicated_factor_is_flagged() {
        let b = linear_factor(4, &[3, 3]);
        let l = LinearFormSystem::new(1, vec![1]).unwrap();
        let r = equidistribution_scan(&b, &l, 0.5, &Budget::default()).unwrap();
        assert!(!r.uniform);
    }
}
