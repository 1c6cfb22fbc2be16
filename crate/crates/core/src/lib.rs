//! Higher-order Fourier analysis for simple binary matroids.
//!
//! A simple binary matroid of rank `r` is a full-rank subset of `F_2^r \ {0}`.
//! This crate provides the machinery needed to reason about such sets at
//! desk scale: bit-level linear algebra and the Walsh–Hadamard transform,
//! standard geometries and copy counting, nonclassical polynomials and
//! polynomial factors, Gowers uniformity norms, regular decompositions,
//! product-expectation counting over linear form systems, and the greedy
//! extended Bose–Burton procedure.
//!
//! Real-valued tables and norms are generic over [`Scalar`] (`f32` or `f64`);
//! the aliases [`RealTable`] and [`ComplexTable`] fix the scalar to `f64`,
//! which is what the rest of the crate uses. Coset bookkeeping in
//! [`extremal`] is carried out in exact rational arithmetic ([`Rational`]).

pub mod budget;
pub mod counting;
pub mod error;
pub mod extremal;
pub mod factor;
pub mod gf2;
pub mod gowers;
pub mod matroid;
pub mod polynomial;
pub mod regularity;

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign};

pub use budget::Budget;
pub use error::{Error, ParseErrorKind, Result};
pub use gf2::{Gf2Subspace, Gf2Vector, PointSet, Table};
pub use gowers::{CTable, GowersStrategy};
pub use matroid::{Geometry, LinearInjection, Matroid};
pub use polynomial::{DyadicTorus, NonclassicalPoly, PolyTable, TorusFunction};

/// Floating-point scalar used by tables, transforms and norms.
pub trait Scalar:
    Float + FromPrimitive + NumAssign + Sum + Send + Sync + Debug + Display + Default + 'static
{
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Dense real table over `F_2^n` in double precision.
pub type RealTable = Table<f64>;
/// Dense real table in single precision.
pub type RealTable32 = Table<f32>;
/// Dense complex table over `F_2^n` in double precision.
pub type ComplexTable = CTable<f64>;
/// Exact rational used for coset bookkeeping.
pub type Rational = num_rational::Ratio<u64>;

/// Version tag written into every serialized artifact.
pub const FORMAT_VERSION: u32 = 1;
