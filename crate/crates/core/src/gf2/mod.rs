//! Linear algebra over `F_2^n` with machine-word bitmasks, point sets over
//! all `2^n` points, dense real tables and the fast Walsh–Hadamard transform.
//!
//! Points are indexed `0..2^n` by their bitmask value, coordinate `i` being
//! bit `i`. Index `0` is always the zero vector.

mod pointset;
mod subspace;
mod table;
mod vector;

pub use pointset::PointSet;
pub use subspace::{max_subspace_avoiding, Gf2Subspace};
pub use table::{fwht_in_place, walsh_hadamard, Table};
pub(crate) use vector::rank_of_bits;
pub use vector::{rank_of, Gf2Vector, XorBasis};

/// Largest ambient dimension for which dense per-point structures are built.
pub const MAX_DENSE_DIM: usize = 26;

/// `x · y` over `F_2`.
#[inline]
pub fn dot(x: u64, y: u64) -> u32 {
    (x & y).count_ones() & 1
}

/// Index of the highest set bit; `None` for zero.
#[inline]
pub fn high_bit(x: u64) -> Option<u32> {
    if x == 0 {
        None
    } else {
        Some(63 - x.leading_zeros())
    }
}
