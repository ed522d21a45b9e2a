//! Divided differences, interpolating polynomials and the growth criterion.

mod criterion;
mod delta;
mod lagrange;

pub use criterion::{
    criterion_matrix, criterion_matrix_points, criterion_values, criterion_values_dual, fit_growth_base, rate_exponent,
    top_half_slope, CriterionOptions, CriterionReport, DualValues, GrowthFit, Verdict, FIT_MIN_ORDER,
    RATE_EXPONENT_BOUNDED, RATE_EXPONENT_GROWING,
};
pub use delta::{closed_form_weights, delta_closed_form, delta_recursive, duplicate_threshold};
pub use lagrange::{lagrange_interpolant, Interpolant};

pub(crate) use delta::{checked_difference, relative_discrepancy};

use crate::error::Result;
use crate::numerics::{Precision, PrecisionComplex};

/// `Δ_p[h](η_{p+1})` for `p = 0..=P`, at a precision pair `(low, 2·low)`.
#[derive(Clone, Debug)]
pub struct DeltaTable {
    pub nodes: Vec<PrecisionComplex>,
    pub low: Vec<PrecisionComplex>,
    pub high: Vec<PrecisionComplex>,
    pub kernel: String,
    pub precision_pair: (u32, u32),
}

impl DeltaTable {
    /// Closed-form values at both precisions; `kernel` labels `h`.
    pub fn build<H>(h: H, kernel: impl Into<String>, nodes: &[PrecisionComplex], p_max: usize, prec: Precision) -> Result<Self>
    where
        H: Fn(&PrecisionComplex) -> PrecisionComplex,
    {
        let at = |bits: Precision| -> Result<Vec<PrecisionComplex>> {
            let scaled: Vec<_> = nodes.iter().take(p_max + 1).map(|z| z.with_prec(bits)).collect();
            (0..=p_max).map(|p| delta_closed_form(&h, &scaled, p)).collect()
        };
        Ok(DeltaTable {
            nodes: nodes.iter().take(p_max + 1).cloned().collect(),
            low: at(prec)?,
            high: at(prec.doubled())?,
            kernel: kernel.into(),
            precision_pair: (prec.bits(), prec.doubled().bits()),
        })
    }

    /// Largest relative disagreement between the two precisions.
    pub fn max_discrepancy(&self) -> f64 {
        self.low
            .iter()
            .zip(&self.high)
            .map(|(a, b)| relative_discrepancy(a, b))
            .fold(0.0, f64::max)
    }
}
