use rayon::prelude::*;
use serde::Serialize;

use super::torus::{mask, DyadicTorus, MAX_PREC};
use super::TorusFunction;
use crate::error::{Error, Result};
use crate::gf2::MAX_DENSE_DIM;

/// Dense table of torus values over `F_2^n`, all stored as numerators over
/// a common denominator `2^prec`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolyTable {
    n: usize,
    prec: u32,
    values: Vec<u64>,
    declared_degree: Option<usize>,
    declared_depth: Option<u32>,
}

impl PolyTable {
    /// Numerators `values[x]` over `2^prec`, reduced mod `2^prec`.
    pub fn from_numerators(n: usize, prec: u32, mut values: Vec<u64>) -> Result<Self> {
        if n > MAX_DENSE_DIM {
            return Err(Error::parameter(format!(
                "dimension {n} too large for a dense table"
            )));
        }
        if values.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                found: values.len(),
            });
        }
        if prec > MAX_PREC {
            return Err(Error::parameter(format!(
                "precision {prec} exceeds {MAX_PREC}"
            )));
        }
        let m = mask(prec);
        values.iter_mut().for_each(|v| *v &= m);
        Ok(PolyTable {
            n,
            prec,
            values,
            declared_degree: None,
            declared_depth: None,
        })
    }

    pub fn from_values(n: usize, values: &[DyadicTorus]) -> Result<Self> {
        let prec = values.iter().map(|v| v.prec()).max().unwrap_or(0);
        Self::from_numerators(
            n,
            prec,
            values.iter().map(|v| v.numerator_at(prec)).collect(),
        )
    }

    pub fn from_fn(n: usize, f: impl Fn(u64) -> DyadicTorus + Sync + Send) -> Self {
        let vals: Vec<DyadicTorus> = (0..1u64 << n).into_par_iter().map(f).collect();
        Self::from_values(n, &vals).expect("dimension checked by caller")
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_numerators(n, 0, vec![0; 1 << n]).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn numerators(&self) -> &[u64] {
        &self.values
    }

    pub fn get(&self, x: u64) -> DyadicTorus {
        DyadicTorus::new(self.values[x as usize], self.prec)
    }

    pub fn iter(&self) -> impl Iterator<Item = DyadicTorus> + '_ {
        self.values.iter().map(|&v| DyadicTorus::new(v, self.prec))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn declared_degree(&self) -> Option<usize> {
        self.declared_degree
    }

    pub fn declared_depth(&self) -> Option<u32> {
        self.declared_depth
    }

    pub fn with_declared(mut self, degree: Option<usize>, depth: Option<u32>) -> Self {
        self.declared_degree = degree;
        self.declared_depth = depth;
        self
    }

    /// Smallest `e` with every value in `U_e`; `0` for the zero table.
    pub fn value_exponent(&self) -> u32 {
        let any = self.values.iter().fold(0u64, |a, &v| a | v);
        if any == 0 {
            0
        } else {
            self.prec - any.trailing_zeros()
        }
    }

    /// Smallest `k` with every value in `U_{k+1}`.
    pub fn measured_depth(&self) -> u32 {
        self.value_exponent().saturating_sub(1)
    }

    /// Coefficients of the unique multilinear expansion
    /// `f(x) = Σ_S a_S |x_S| / 2^prec (mod 1)`, with `a_S` mod `2^prec`.
    pub fn monomial_coefficients(&self) -> Vec<u64> {
        let mut c = self.values.clone();
        let m = mask(self.prec);
        let mut half = 1;
        while half < c.len() {
            for block in c.chunks_mut(2 * half) {
                let (lo, hi) = block.split_at_mut(half);
                for (a, b) in lo.iter().zip(hi.iter_mut()) {
                    *b = b.wrapping_sub(*a) & m;
                }
            }
            half *= 2;
        }
        c
    }

    /// Degree, read off the binary digits of the monomial coefficients: the
    /// digit of weight `2^j` in `a_S` is a term of depth `prec-1-j` and
    /// degree `|S| + prec-1-j`. The zero table and constants have degree 0.
    pub fn measured_degree(&self) -> usize {
        let coeffs = self.monomial_coefficients();
        let mut best = 0;
        for (s, &a) in coeffs.iter().enumerate().skip(1) {
            if a != 0 {
                let low = a.trailing_zeros();
                let k = (self.prec - 1 - low) as usize;
                best = best.max((s as u64).count_ones() as usize + k);
            }
        }
        best
    }

    fn lifted(&self, p: u32) -> impl Iterator<Item = u64> + '_ {
        let s = p - self.prec;
        self.values.iter().map(move |&v| v << s)
    }

    fn check_dim(&self, other: &PolyTable) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &PolyTable) -> Result<PolyTable> {
        self.check_dim(other)?;
        let p = self.prec.max(other.prec);
        let vals = self
            .lifted(p)
            .zip(other.lifted(p))
            .map(|(a, b)| a.wrapping_add(b))
            .collect();
        PolyTable::from_numerators(self.n, p, vals)
    }

    pub fn sub(&self, other: &PolyTable) -> Result<PolyTable> {
        self.add(&other.scale(-1))
    }

    /// `m · f` for an integer `m`.
    pub fn scale(&self, m: i64) -> PolyTable {
        let vals = self
            .values
            .iter()
            .map(|&v| v.wrapping_mul(m as u64))
            .collect();
        PolyTable::from_numerators(self.n, self.prec, vals).unwrap()
    }

    /// `Σ λ_i f_i`.
    pub fn combination(n: usize, tables: &[&PolyTable], lambda: &[i64]) -> Result<PolyTable> {
        let mut acc = PolyTable::zeros(n);
        for (t, &l) in tables.iter().zip(lambda) {
            if l != 0 {
                acc = acc.add(&t.scale(l))?;
            }
        }
        Ok(acc)
    }

    /// `x ↦ f(x + h)`.
    pub fn shift(&self, h: u64) -> PolyTable {
        let vals = (0..self.values.len() as u64)
            .map(|x| self.values[(x ^ h) as usize])
            .collect();
        PolyTable::from_numerators(self.n, self.prec, vals).unwrap()
    }
}

impl TorusFunction for PolyTable {
    fn dim(&self) -> usize {
        self.n
    }
    fn value(&self, x: u64) -> DyadicTorus {
        self.get(x)
    }
    fn to_table(&self) -> PolyTable {
        self.clone()
    }
}
