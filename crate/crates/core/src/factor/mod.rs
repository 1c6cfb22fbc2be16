//! Polynomial factors: the partition of `F_2^n` into joint level sets
//! ("atoms") of finitely many polynomials.

mod consistency;
mod equidist;
mod format;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

pub use consistency::{consistency_group, consistency_group_literal, ConsistencyGroup};
pub(crate) use equidist::groups_for;
pub use equidist::{
    equidistribution_report, equidistribution_scan, k_product, EquidistributionReport,
};
pub use format::{parse_factor, write_factor};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::gf2::Gf2Vector;
use crate::gowers::{gowers_norm, CTable, GowersStrategy};
use crate::polynomial::{derivative, DyadicTorus, NonclassicalPoly, PolyTable};

/// Ordered list of polynomials on a common `F_2^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolynomialFactor {
    n: usize,
    polys: Vec<NonclassicalPoly>,
    #[serde(skip)]
    tables: Vec<PolyTable>,
}

/// Mixed-radix atom label; digit `i` is the numerator of `P_i(x)` over
/// `2^{k_i+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AtomIndex(pub u64);

impl PolynomialFactor {
    pub fn new(n: usize, polys: Vec<NonclassicalPoly>) -> Result<Self> {
        if let Some(p) = polys.iter().find(|p| p.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.dim(),
            });
        }
        let bits: u32 = polys.iter().map(|p| p.depth() + 1).sum();
        if bits > 62 {
            return Err(Error::parameter(format!(
                "factor order 2^{bits} is too large"
            )));
        }
        let tables = polys.iter().map(|p| p.table()).collect();
        Ok(PolynomialFactor { n, polys, tables })
    }

    /// From value tables, which must vanish at 0.
    pub fn from_tables(n: usize, tables: &[PolyTable]) -> Result<Self> {
        let polys = tables
            .iter()
            .map(NonclassicalPoly::from_table)
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, polys)
    }

    pub fn empty(n: usize) -> Self {
        Self::new(n, Vec::new()).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn polys(&self) -> &[NonclassicalPoly] {
        &self.polys
    }

    pub fn tables(&self) -> &[PolyTable] {
        &self.tables
    }

    /// Number of polynomials `C`.
    pub fn complexity(&self) -> usize {
        self.polys.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.polys.iter().map(|p| p.degree()).collect()
    }

    pub fn depths(&self) -> Vec<u32> {
        self.polys.iter().map(|p| p.depth()).collect()
    }

    /// Largest degree among the polynomials, 0 for the empty factor.
    pub fn degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// `‖B‖ = Π 2^{k_i+1}`.
    pub fn order(&self) -> u64 {
        1u64 << self.polys.iter().map(|p| p.depth() + 1).sum::<u32>()
    }

    pub fn push(&mut self, p: NonclassicalPoly) -> Result<()> {
        let mut polys = std::mem::take(&mut self.polys);
        polys.push(p);
        *self = Self::new(self.n, polys)?;
        Ok(())
    }

    pub fn atom_of_bits(&self, x: u64) -> AtomIndex {
        let mut idx = 0u64;
        let mut shift = 0;
        for (p, t) in self.polys.iter().zip(&self.tables) {
            let k1 = p.depth() + 1;
            idx |= t.get(x).numerator_at(k1) << shift;
            shift += k1;
        }
        AtomIndex(idx)
    }

    pub fn atom_of(&self, x: Gf2Vector) -> Result<AtomIndex> {
        if x.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.dim(),
            });
        }
        Ok(self.atom_of_bits(x.bits()))
    }

    /// Atom of every point, in point order.
    pub fn atom_table(&self) -> Vec<u64> {
        (0..1u64 << self.n)
            .into_par_iter()
            .map(|x| self.atom_of_bits(x).0)
            .collect()
    }

    /// Values `(P_1, …, P_C)` labelling an atom.
    pub fn decode(&self, a: AtomIndex) -> Vec<DyadicTorus> {
        let mut shift = 0;
        self.polys
            .iter()
            .map(|p| {
                let k1 = p.depth() + 1;
                let v = DyadicTorus::new((a.0 >> shift) & ((1 << k1) - 1), k1);
                shift += k1;
                v
            })
            .collect()
    }

    /// Encodes one value per polynomial; each must lie in `U_{k_i+1}`.
    pub fn encode(&self, values: &[DyadicTorus]) -> Result<AtomIndex> {
        if values.len() != self.polys.len() {
            return Err(Error::DimensionMismatch {
                expected: self.polys.len(),
                found: values.len(),
            });
        }
        let mut idx = 0;
        let mut shift = 0;
        for (p, v) in self.polys.iter().zip(values) {
            let k1 = p.depth() + 1;
            if !v.in_group(k1) {
                return Err(Error::contract(format!("value {v} is outside U_{k1}")));
            }
            idx |= v.numerator_at(k1) << shift;
            shift += k1;
        }
        Ok(AtomIndex(idx))
    }

    pub fn atom_histogram(&self) -> AtomHistogram {
        let mut counts = BTreeMap::new();
        for a in self.atom_table() {
            *counts.entry(a).or_insert(0u64) += 1;
        }
        AtomHistogram::new(counts, self.n, self.order())
    }

    /// `B_h = (P_1, …, P_C, Δ_h P_1, …, Δ_h P_C)`.
    pub fn shift_extend(&self, h: u64) -> PolynomialFactor {
        let mut tables = self.tables.clone();
        tables.extend(self.tables.iter().map(|t| derivative(t, h)));
        Self::from_tables(self.n, &tables).expect("derivatives vanish at 0")
    }

    /// True iff the atom of `x` under `B_h` determines the atom of `x + h`
    /// under `B`, so that `1_D(x+h)` is constant on `B_h` atoms for every
    /// union `D` of `B` atoms.
    pub fn shift_compatible(&self, extended: &PolynomialFactor, h: u64) -> bool {
        let mut seen: BTreeMap<u64, u64> = BTreeMap::new();
        let base = self.atom_table();
        let ext = extended.atom_table();
        (0..1usize << self.n).all(|x| {
            let target = base[x ^ h as usize];
            *seen.entry(ext[x]).or_insert(target) == target
        })
    }
}

/// Atom sizes of a factor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AtomHistogram {
    pub counts: BTreeMap<u64, u64>,
    pub total: u64,
    pub order: u64,
    pub atom_count: usize,
    /// `max_b |Pr[x ∈ b] - 1/‖B‖|` over all `‖B‖` labels, empty ones included.
    pub max_deviation: f64,
}

impl AtomHistogram {
    fn new(counts: BTreeMap<u64, u64>, n: usize, order: u64) -> Self {
        let total = 1u64 << n;
        let inv = 1.0 / order as f64;
        let mut dev = counts
            .values()
            .map(|&c| (c as f64 / total as f64 - inv).abs())
            .fold(0.0, f64::max);
        if (counts.len() as u64) < order {
            dev = dev.max(inv);
        }
        AtomHistogram {
            atom_count: counts.len(),
            counts,
            total,
            order,
            max_deviation: dev,
        }
    }
}

/// Summary of a factor's uniformity and atom sizes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniformityReport {
    pub epsilon_measured: f64,
    pub order: u64,
    pub atom_count: usize,
    pub max_deviation: f64,
}

/// `max_{λ ≠ 0} ‖e(Σ λ_i P_i)‖_{U^D}` with `D` the factor degree (at least
/// 1), `λ_i` ranging over residues mod `2^{k_i+1}`. Zero for the empty factor.
pub fn factor_uniformity(b: &PolynomialFactor, budget: &Budget) -> Result<f64> {
    let order = b.order();
    if b.complexity() == 0 {
        return Ok(0.0);
    }
    let d = b.degree().max(1);
    let strategy = GowersStrategy::fastest_for(d);
    budget.check_log2(
        "factor_uniformity",
        (order as f64).log2() + strategy.log2_cost(b.n, d),
    )?;
    let refs: Vec<&PolyTable> = b.tables.iter().collect();
    let depths = b.depths();
    let norms: Vec<f64> = (1..order)
        .into_par_iter()
        .map(|code| {
            let mut shift = 0;
            let lambda: Vec<i64> = depths
                .iter()
                .map(|&k| {
                    let k1 = k + 1;
                    let l = (code >> shift) & ((1 << k1) - 1);
                    shift += k1;
                    l as i64
                })
                .collect();
            let combo = PolyTable::combination(b.n, &refs, &lambda).expect("same dimension");
            gowers_norm(
                &CTable::<f64>::exp_of(&combo),
                d,
                strategy,
                &Budget::unlimited(),
            )
            .expect("strategy matches order")
        })
        .collect();
    Ok(norms.into_iter().fold(0.0, f64::max))
}

pub fn uniformity_report(b: &PolynomialFactor, budget: &Budget) -> Result<UniformityReport> {
    let eps = factor_uniformity(b, budget)?;
    let h = b.atom_histogram();
    Ok(UniformityReport {
        epsilon_measured: eps,
        order: h.order,
        atom_count: h.atom_count,
        max_deviation: h.max_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

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
    fn independent_linear_atoms_are_equal() {
        let b = linear_factor(5, &[0b00011, 0b00100, 0b11000]);
        let h = b.atom_histogram();
        assert_eq!(h.order, 8);
        assert_eq!(h.atom_count, 8);
        assert!(h.counts.values().all(|&c| c == 4));
        assert_eq!(h.max_deviation, 0.0);
        assert_eq!(h.counts.values().sum::<u64>(), 32);
    }

    #[test]
    fn quadric_atoms() {
        let b =
            PolynomialFactor::new(2, vec![NonclassicalPoly::new(2, [(0b11, 0)]).unwrap()]).unwrap();
        let mut sizes: Vec<u64> = b.atom_histogram().counts.values().copied().collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 3]);
        let deep =
            PolynomialFactor::new(2, vec![NonclassicalPoly::new(2, [(0b1, 1)]).unwrap()]).unwrap();
        assert_eq!(deep.order(), 4);
    }

    #[test]
    fn encode_decode() {
        let b = PolynomialFactor::new(
            3,
            vec![
                NonclassicalPoly::new(3, [(0b1, 1)]).unwrap(),
                NonclassicalPoly::linear(3, 0b110),
            ],
        )
        .unwrap();
        for x in 0..8 {
            let a = b.atom_of_bits(x);
            let vals = b.decode(a);
            assert_eq!(vals[0], b.tables()[0].get(x));
            assert_eq!(b.encode(&vals).unwrap(), a);
        }
    }

    #[test]
    fn uniformity_examples() {
        let bud = Budget::default();
        assert!(factor_uniformity(&linear_factor(4, &[1, 2, 12]), &bud).unwrap() < 1e-12);
        let dup = linear_factor(4, &[3, 3]);
        assert!((factor_uniformity(&dup, &bud).unwrap() - 1.0).abs() < 1e-12);
        let quad =
            PolynomialFactor::new(2, vec![NonclassicalPoly::new(2, [(0b11, 0)]).unwrap()]).unwrap();
        assert!((factor_uniformity(&quad, &bud).unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
        assert_eq!(
            factor_uniformity(&PolynomialFactor::empty(3), &bud).unwrap(),
            0.0
        );
    }

    #[test]
    fn shift_extension() {
        let lin = linear_factor(4, &[1, 6]);
        let ext = lin.shift_extend(0b0101);
        assert_eq!(ext.complexity(), 4);
        assert!(ext.polys()[2..].iter().all(|p| p.is_zero()));
        assert_eq!(
            ext.atom_histogram().atom_count,
            lin.atom_histogram().atom_count
        );
        assert!(lin.shift_compatible(&ext, 0b0101));

        let quad =
            PolynomialFactor::new(2, vec![NonclassicalPoly::new(2, [(0b11, 0)]).unwrap()]).unwrap();
        let ext = quad.shift_extend(0b01);
        assert_eq!(ext.polys()[1], NonclassicalPoly::linear(2, 0b10));
        for h in 0..4 {
            assert!(quad.shift_compatible(&quad.shift_extend(h), h));
        }
    }
}
