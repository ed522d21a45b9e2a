//! Precision-configurable complex arithmetic and bivariate Taylor models.

mod catalog;
mod complex;
mod taylor;

pub use catalog::{parse_rational, CatalogFunction, GaussianRational, PolyTerm};
pub use complex::{cexp, parse_real, phi_kernel, real_to_decimal, Precision, PrecisionComplex};
pub use taylor::{eval_taylor, line_derivative_sum, truncation_error, BivariateTaylor, CoefficientTable};
