use std::ops::{Add, Sub};

use crate::error::{Error, Result};
use crate::Scalar;

use super::MAX_DENSE_DIM;

/// A dense function `F_2^n -> T`, indexed by point bitmask.
#[derive(Debug, Clone, PartialEq)]
pub struct Table<T> {
    n: usize,
    values: Vec<T>,
}

impl<T: Scalar> Table<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        let len = values.len();
        if !len.is_power_of_two() || len.trailing_zeros() as usize > MAX_DENSE_DIM {
            return Err(Error::MalformedTable { len });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::contract(format!("table entry {i} is not finite")));
        }
        Ok(Table {
            n: len.trailing_zeros() as usize,
            values,
        })
    }

    pub fn from_fn(n: usize, f: impl FnMut(u64) -> T) -> Self {
        assert!(n <= MAX_DENSE_DIM);
        Table {
            n,
            values: (0..1u64 << n).map(f).collect(),
        }
    }

    pub fn constant(n: usize, c: T) -> Self {
        Self::from_fn(n, |_| c)
    }

    pub fn zeros(n: usize) -> Self {
        Self::constant(n, T::zero())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    #[inline]
    pub fn get(&self, x: u64) -> T {
        self.values[x as usize]
    }

    pub fn mean(&self) -> T {
        self.values.iter().copied().sum::<T>() / T::from_usize(self.len()).unwrap()
    }

    /// `sqrt(E[f^2])`.
    pub fn l2_norm(&self) -> T {
        (self.values.iter().map(|&v| v * v).sum::<T>() / T::from_usize(self.len()).unwrap()).sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn zip_with(&self, other: &Table<T>, f: impl Fn(T, T) -> T) -> Result<Table<T>> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(Table {
            n: self.n,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Table<T> {
        Table {
            n: self.n,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn converted<U: Scalar>(&self) -> Table<U> {
        Table {
            n: self.n,
            values: self.values.iter().map(|v| U::from(*v).unwrap()).collect(),
        }
    }
}

/// Unnormalized in-place Walsh–Hadamard butterfly: afterwards
/// `data[ξ] = Σ_x data[x] (-1)^{x·ξ}`. Length must be a power of two.
pub fn fwht_in_place<V>(data: &mut [V])
where
    V: Copy + Add<Output = V> + Sub<Output = V>,
{
    let len = data.len();
    debug_assert!(len.is_power_of_two());
    let mut h = 1;
    while h < len {
        for block in data.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// Fourier transform `f̂(ξ) = E_x f(x) (-1)^{x·ξ}`. The averaging sits in the
/// forward direction, so `f̂(0) = E[f]` and applying the transform twice
/// returns `2^{-n} f`.
pub fn walsh_hadamard<T: Scalar>(f: &Table<T>) -> Table<T> {
    let mut values = f.values.clone();
    fwht_in_place(&mut values);
    let scale = T::one() / T::from_usize(values.len()).unwrap();
    for v in &mut values {
        *v *= scale;
    }
    Table { n: f.n, values }
}
