use std::collections::BTreeSet;

use serde::Serialize;

use super::table::PolyTable;
use super::torus::{mask, DyadicTorus, MAX_PREC};
use super::TorusFunction;
use crate::error::{Error, Result};
use crate::gf2::{Gf2Vector, MAX_DENSE_DIM};

/// A homogeneous (shift 0) polynomial `F_2^n -> T` in monomial form
///
/// `P(x) = Σ_{(S,k)} |x_S| / 2^{k+1}  (mod 1)`,
///
/// where `|x_S|` is 1 if every coordinate in `S` is set and 0 otherwise.
/// Each term `(S, k)` has coefficient 1 and contributes degree `|S| + k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct NonclassicalPoly {
    n: usize,
    terms: BTreeSet<(u64, u32)>,
}

impl NonclassicalPoly {
    pub fn zero(n: usize) -> Self {
        NonclassicalPoly {
            n,
            terms: BTreeSet::new(),
        }
    }

    /// Builds from `(S mask, depth)` pairs. Repeated terms are rejected
    /// since coefficients live in `{0, 1}`.
    pub fn new(n: usize, terms: impl IntoIterator<Item = (u64, u32)>) -> Result<Self> {
        if n > 63 {
            return Err(Error::parameter(format!("{n} variables is more than 63")));
        }
        let mut p = Self::zero(n);
        for (s, k) in terms {
            if s == 0 {
                return Err(Error::parameter("term with empty monomial"));
            }
            if s >> n != 0 {
                return Err(Error::parameter(format!(
                    "monomial {s:#b} uses a variable beyond {n}"
                )));
            }
            if k + 1 > MAX_PREC {
                return Err(Error::parameter(format!("depth {k} too large")));
            }
            if !p.terms.insert((s, k)) {
                return Err(Error::parameter(format!("repeated term ({s:#b}, {k})")));
            }
        }
        Ok(p)
    }

    /// The classical linear form `x ↦ (x · ξ) / 2`.
    pub fn linear(n: usize, xi: u64) -> Self {
        Self::new(
            n,
            (0..n).filter(|i| xi >> i & 1 == 1).map(|i| (1u64 << i, 0)),
        )
        .expect("valid linear form")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.terms.iter().copied()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `max |S| + k`, or 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms
            .iter()
            .map(|&(s, k)| s.count_ones() as usize + k as usize)
            .max()
            .unwrap_or(0)
    }

    /// `max k`, or 0 for the zero polynomial.
    pub fn depth(&self) -> u32 {
        self.terms.iter().map(|&(_, k)| k).max().unwrap_or(0)
    }

    pub fn eval(&self, x: Gf2Vector) -> Result<DyadicTorus> {
        if x.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.dim(),
            });
        }
        Ok(self.eval_bits(x.bits()))
    }

    pub fn eval_bits(&self, x: u64) -> DyadicTorus {
        let p = self.depth() + 1;
        let num = self
            .terms
            .iter()
            .filter(|&&(s, _)| s & x == s)
            .fold(0u64, |acc, &(_, k)| acc.wrapping_add(1 << (p - 1 - k)));
        DyadicTorus::new(num, p)
    }

    /// Dense table by a subset-sum (zeta) transform of the coefficients.
    pub fn table(&self) -> PolyTable {
        assert!(
            self.n <= MAX_DENSE_DIM,
            "dimension {} too large for a table",
            self.n
        );
        let p = self.depth() + 1;
        let m = mask(p);
        let mut c = vec![0u64; 1 << self.n];
        for &(s, k) in &self.terms {
            c[s as usize] = c[s as usize].wrapping_add(1 << (p - 1 - k)) & m;
        }
        let mut half = 1;
        while half < c.len() {
            for block in c.chunks_mut(2 * half) {
                let (lo, hi) = block.split_at_mut(half);
                for (a, b) in lo.iter().zip(hi.iter_mut()) {
                    *b = b.wrapping_add(*a) & m;
                }
            }
            half *= 2;
        }
        PolyTable::from_numerators(self.n, p, c)
            .unwrap()
            .with_declared(Some(self.degree()), Some(self.depth()))
    }

    /// Recovers the unique monomial form of a table with `f(0) = 0`.
    pub fn from_table(t: &PolyTable) -> Result<Self> {
        if !t.get(0).is_zero() {
            return Err(Error::contract("table has a nonzero shift f(0)"));
        }
        let p = t.prec();
        let mut terms = Vec::new();
        for (s, &a) in t.monomial_coefficients().iter().enumerate().skip(1) {
            for j in 0..p {
                if a >> j & 1 == 1 {
                    terms.push((s as u64, p - 1 - j));
                }
            }
        }
        Self::new(t.dim(), terms)
    }
}

impl TorusFunction for NonclassicalPoly {
    fn dim(&self) -> usize {
        self.n
    }
    fn value(&self, x: u64) -> DyadicTorus {
        self.eval_bits(x)
    }
    fn to_table(&self) -> PolyTable {
        self.table()
    }
}

/// Every monomial-form polynomial in `v` variables with degree at most
/// `max_degree` and depth at most `max_depth`, including zero. Ordered by
/// the bitmask of chosen terms.
pub fn catalog(v: usize, max_degree: usize, max_depth: u32) -> Vec<NonclassicalPoly> {
    let mut allowed = Vec::new();
    for k in 0..=max_depth {
        for s in 1u64..1 << v {
            if s.count_ones() as usize + k as usize <= max_degree {
                allowed.push((s, k));
            }
        }
    }
    assert!(
        allowed.len() <= 20,
        "catalog with {} terms is too large",
        allowed.len()
    );
    (0u64..1 << allowed.len())
        .map(|choice| {
            let terms = allowed
                .iter()
                .enumerate()
                .filter(|(i, _)| choice >> i & 1 == 1)
                .map(|(_, &t)| t);
            NonclassicalPoly::new(v, terms).unwrap()
        })
        .collect()
}
