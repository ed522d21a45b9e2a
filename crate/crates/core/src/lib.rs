//! Reconstruction of entire functions on C^2 from their restrictions to
//! complex lines `{z1 = η z2}` through the origin.

// `!(x >= y)` rejects NaN along with small values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod diagnostics;
pub mod directions;
pub mod divided_differences;
pub mod error;
pub mod numerics;
pub mod reconstruction;

pub use directions::{DirectionSequence, Permutation, Provenance};
pub use divided_differences::{CriterionOptions, CriterionReport, Verdict};
pub use error::{Error, Result};
pub use numerics::{BivariateTaylor, CatalogFunction, Precision, PrecisionComplex};

/// Library version embedded in every written artifact.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
