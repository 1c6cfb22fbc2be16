//! Nonclassical polynomials `F_2^n -> T` with dyadic values.

mod degree;
pub(crate) mod format;
mod poly;
mod refine;
mod table;
mod torus;

pub use degree::{degree_by_descent, derivative, verify_degree, DegreeCheck};
pub use format::{parse_poly, parse_poly_table, write_poly, write_poly_table};
pub use poly::{catalog, NonclassicalPoly};
pub use refine::{derivative_is_onto, shift_subgroup_refine};
pub use table::PolyTable;
pub use torus::{DyadicTorus, MAX_PREC};

/// Anything that can be evaluated pointwise to the torus and tabulated.
pub trait TorusFunction {
    fn dim(&self) -> usize;
    fn value(&self, x: u64) -> DyadicTorus;
    fn to_table(&self) -> PolyTable;
}
