use serde::Serialize;

use super::pointset::xor_permute;
use super::{high_bit, Gf2Vector, PointSet, XorBasis};
use crate::error::{Error, Result};

/// A linear subspace of `F_2^n` held as a reduced row-echelon basis.
///
/// Basis vectors are sorted by increasing pivot (highest set bit) and every
/// basis vector is zero at the pivots of the others.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Gf2Subspace {
    basis: Vec<u64>,
    ambient_dim: usize,
}

impl Gf2Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Gf2Subspace {
            basis: Vec::new(),
            ambient_dim,
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Gf2Subspace {
            basis: (0..ambient_dim).map(|i| 1u64 << i).collect(),
            ambient_dim,
        }
    }

    /// Span of `vectors`, brought to reduced row-echelon form.
    pub fn span(ambient_dim: usize, vectors: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut b = XorBasis::new();
        for v in vectors {
            if v >> ambient_dim != 0 {
                return Err(Error::parameter(format!(
                    "vector {v:#b} outside F_2^{ambient_dim}"
                )));
            }
            b.insert(v);
        }
        let mut rows: Vec<u64> = b.rows().iter().copied().filter(|&r| r != 0).collect();
        rows.sort_by_key(|&r| high_bit(r));
        // Clear each pivot from every other row.
        for i in 0..rows.len() {
            let p = 1u64 << high_bit(rows[i]).unwrap();
            for j in 0..rows.len() {
                if j != i && rows[j] & p != 0 {
                    rows[j] ^= rows[i];
                }
            }
        }
        rows.sort_by_key(|&r| high_bit(r));
        Ok(Gf2Subspace {
            basis: rows,
            ambient_dim,
        })
    }

    pub fn from_vectors(vectors: &[Gf2Vector]) -> Result<Self> {
        let n = vectors.first().map(|v| v.dim()).unwrap_or(0);
        if let Some(bad) = vectors.iter().find(|v| v.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.dim(),
            });
        }
        Self::span(n, vectors.iter().map(|v| v.bits()))
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim - self.basis.len()
    }

    pub fn basis(&self) -> &[u64] {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Gf2Vector> {
        self.basis
            .iter()
            .map(|&b| Gf2Vector::new(b, self.ambient_dim).expect("basis fits ambient space"))
            .collect()
    }

    pub fn contains(&self, mut v: u64) -> bool {
        for &b in self.basis.iter().rev() {
            if v >> high_bit(b).unwrap() & 1 == 1 {
                v ^= b;
            }
        }
        v == 0
    }

    /// All `2^dim` elements, in Gray-code order starting at zero.
    pub fn elements(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(1 << self.dim());
        let mut cur = 0u64;
        out.push(cur);
        for i in 1u64..(1 << self.dim()) {
            cur ^= self.basis[i.trailing_zeros() as usize];
            out.push(cur);
        }
        out
    }

    pub fn to_point_set(&self) -> PointSet {
        PointSet::from_points(self.ambient_dim, self.elements()).expect("subspace fits")
    }

    pub fn is_subspace_of(&self, other: &Gf2Subspace) -> bool {
        self.basis.iter().all(|&b| other.contains(b))
    }
}

/// A maximum-dimension subspace of `F_2^n` whose nonzero points all avoid
/// `points`. Among maximal subspaces the one with the lexicographically
/// smallest increasing echelon basis is returned.
///
/// Branch and bound over echelon bases: each new basis vector has a larger
/// pivot than the previous ones and is zero on earlier pivots, so every
/// subspace is visited exactly once, in lexicographic order of its basis.
pub fn max_subspace_avoiding(points: &PointSet) -> Gf2Subspace {
    let n = points.dim();
    let mut good = points.complement();
    good.remove(0);
    let mut search = AvoidSearch {
        n,
        best: Vec::new(),
        current: Vec::new(),
    };
    search.descend(&good, None, 0);
    Gf2Subspace::span(n, search.best).expect("basis fits")
}

struct AvoidSearch {
    n: usize,
    best: Vec<u64>,
    current: Vec<u64>,
}

impl AvoidSearch {
    /// `allowed` holds every `x` with `x + span(current) ⊆ good`.
    fn descend(&mut self, allowed: &PointSet, last_pivot: Option<u32>, pivot_mask: u64) {
        if self.current.len() > self.best.len() {
            self.best = self.current.clone();
        }
        if self.best.len() == self.n {
            return;
        }
        let start = last_pivot.map_or(1u64, |p| 1u64 << (p + 1));
        let d = self.current.len();
        // Bound: completing to dim d + t needs 2^d (2^t - 1) allowed points above start.
        let above = allowed.count_above(start - 1);
        if d + max_extension(above, d) <= self.best.len() {
            return;
        }
        let candidates: Vec<u64> = allowed
            .iter()
            .filter(|&x| x >= start && x & pivot_mask == 0)
            .collect();
        let mut next_words = vec![0u64; allowed.words().len()];
        for v in candidates {
            let pivot = high_bit(v).unwrap();
            let above_v = allowed.count_above((1u64 << (pivot + 1)) - 1);
            if d + 1 + max_extension(above_v, d + 1) <= self.best.len() {
                continue;
            }
            xor_permute(allowed.words(), v, self.n, &mut next_words);
            for (w, a) in next_words.iter_mut().zip(allowed.words()) {
                *w &= a;
            }
            let next = PointSet::from_words(self.n, next_words.clone());
            self.current.push(v);
            self.descend(&next, Some(pivot), pivot_mask | (1u64 << pivot));
            self.current.pop();
            if self.best.len() == self.n {
                return;
            }
        }
    }
}

/// Largest `t` with `2^d (2^t - 1) <= count`.
fn max_extension(count: usize, d: usize) -> usize {
    let cosets = count >> d;
    let mut t = 0;
    while (1usize << (t + 1)) - 1 <= cosets {
        t += 1;
    }
    t
}
