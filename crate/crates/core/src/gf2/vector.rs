use crate::error::{Error, Result};

use super::high_bit;

/// A point of `F_2^n`, stored as a bitmask with coordinate `i` at bit `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2Vector {
    bits: u64,
    dim: usize,
}

impl Gf2Vector {
    pub fn new(bits: u64, dim: usize) -> Result<Self> {
        if dim > 63 {
            return Err(Error::parameter(format!("dimension {dim} exceeds 63")));
        }
        if bits >> dim != 0 {
            return Err(Error::parameter(format!(
                "vector {bits:#b} does not fit in dimension {dim}"
            )));
        }
        Ok(Gf2Vector { bits, dim })
    }

    pub fn zero(dim: usize) -> Self {
        Gf2Vector { bits: 0, dim }
    }

    /// The standard basis vector with a one at coordinate `i` (0-based).
    pub fn unit(i: usize, dim: usize) -> Result<Self> {
        if i >= dim {
            return Err(Error::parameter(format!(
                "coordinate {i} outside dimension {dim}"
            )));
        }
        Gf2Vector::new(1 << i, dim)
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn dot(&self, other: &Gf2Vector) -> u32 {
        super::dot(self.bits, other.bits)
    }

    /// Binary string, most significant coordinate first.
    pub fn to_bit_string(&self) -> String {
        (0..self.dim)
            .rev()
            .map(|i| if self.bits >> i & 1 == 1 { '1' } else { '0' })
            .collect()
    }
}

impl std::ops::Add for Gf2Vector {
    type Output = Gf2Vector;

    fn add(self, rhs: Gf2Vector) -> Gf2Vector {
        debug_assert_eq!(self.dim, rhs.dim);
        Gf2Vector {
            bits: self.bits ^ rhs.bits,
            dim: self.dim,
        }
    }
}

/// Incremental basis keyed by highest set bit. Supports undoing the most
/// recent insertion, which is what the backtracking searches need.
#[derive(Debug, Clone)]
pub struct XorBasis {
    by_bit: [u64; 64],
    stack: Vec<u32>,
}

impl Default for XorBasis {
    fn default() -> Self {
        XorBasis {
            by_bit: [0; 64],
            stack: Vec::new(),
        }
    }
}

impl XorBasis {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reduces `v` against the basis; zero iff `v` lies in the span.
    pub fn reduce(&self, mut v: u64) -> u64 {
        let mut rest = v;
        while let Some(b) = high_bit(rest) {
            let p = self.by_bit[b as usize];
            if p != 0 {
                v ^= p;
            }
            rest = v & ((1u64 << b) - 1);
        }
        v
    }

    pub fn contains(&self, v: u64) -> bool {
        self.reduce(v) == 0
    }

    /// Inserts `v`; returns false (and leaves the basis untouched) when `v`
    /// is already in the span.
    pub fn insert(&mut self, v: u64) -> bool {
        let r = self.reduce(v);
        match high_bit(r) {
            None => false,
            Some(b) => {
                self.by_bit[b as usize] = r;
                self.stack.push(b);
                true
            }
        }
    }

    /// Removes the most recently inserted vector.
    pub fn pop(&mut self) {
        if let Some(b) = self.stack.pop() {
            self.by_bit[b as usize] = 0;
        }
    }

    pub fn rank(&self) -> usize {
        self.stack.len()
    }

    /// Stored rows indexed by pivot bit; zero where no row has that pivot.
    pub(crate) fn rows(&self) -> &[u64; 64] {
        &self.by_bit
    }
}

/// Dimension of the span of `vectors`.
pub fn rank_of(vectors: &[Gf2Vector]) -> Result<usize> {
    let Some(first) = vectors.first() else {
        return Ok(0);
    };
    let mut basis = XorBasis::new();
    for v in vectors {
        if v.dim() != first.dim() {
            return Err(Error::DimensionMismatch {
                expected: first.dim(),
                found: v.dim(),
            });
        }
        basis.insert(v.bits());
    }
    Ok(basis.rank())
}

/// Rank of raw bitmasks.
pub(crate) fn rank_of_bits(vectors: impl IntoIterator<Item = u64>) -> usize {
    let mut basis = XorBasis::new();
    for v in vectors {
        basis.insert(v);
    }
    basis.rank()
}
