//! Linear form systems, product expectations and the counting bound.

mod bound;
mod expectation;
mod forms;

pub use bound::{
    counting_bound_check, gowers_count_bound_check, homomorphism_exists, CountingReport,
    GowersCountReport, Verdict,
};
pub use expectation::{homomorphism_count, product_expectation, product_expectation_masked};
pub use forms::{linear_forms_of, LinearFormSystem};
