//! Bivariate Taylor models `f(z1, z2) = Σ a_{k,l} z1^k z2^l`.

use super::complex::{Precision, PrecisionComplex};
use crate::error::{Error, Result};

/// Coefficient oracle for an entire function on C^2 with bounds on its tails.
pub trait BivariateTaylor: Send + Sync {
    /// `a_{k,l}` at the requested precision.
    fn coeff(&self, k: u32, l: u32, prec: Precision) -> PrecisionComplex;

    /// Total degree for polynomials, `None` for transcendental functions.
    fn degree(&self) -> Option<u32>;

    /// `Σ_{k+l ≥ n} |a_{k,l}| r1^k r2^l`, which dominates the degree-`n` tail on the
    /// closed polydisc of radii `(r1, r2)`.
    fn tail_majorant(&self, r1: f64, r2: f64, n: u32) -> f64;

    /// Upper bound for `sup |f|` over the polydisc `|z1|, |z2| ≤ radius`.
    fn sup_norm_bound(&self, radius: f64) -> f64;

    /// Exact value of `f` when a closed form exists.
    fn eval_closed_form(&self, _z1: &PrecisionComplex, _z2: &PrecisionComplex) -> Option<PrecisionComplex> {
        None
    }

    fn describe(&self) -> String;

    /// All coefficients with `k + l ≤ max_degree`.
    fn table(&self, max_degree: u32, prec: Precision) -> CoefficientTable {
        let rows = (0..=max_degree)
            .map(|m| (0..=m).map(|k| self.coeff(k, m - k, prec)).collect())
            .collect();
        CoefficientTable { rows, prec }
    }

    /// Tail bound on the equal-radius polydisc `|z1|, |z2| ≤ radius`.
    fn tail_bound(&self, radius: f64, n: u32) -> f64 {
        self.tail_majorant(radius, radius, n)
    }

    /// Cauchy-estimate tail bound `‖f‖_R Σ_{m≥n} (m+1) ρ^m` with `ρ = radius / R`.
    ///
    /// `R` defaults to `8 · radius`. Always at least [`BivariateTaylor::tail_bound`].
    fn cauchy_tail_bound(&self, radius: f64, n: u32, outer: Option<f64>) -> f64 {
        if radius == 0.0 {
            return if n == 0 { self.sup_norm_bound(0.0) } else { 0.0 };
        }
        let outer = outer.unwrap_or(8.0 * radius);
        assert!(outer > radius, "outer radius must exceed the evaluation radius");
        let rho = radius / outer;
        let nf = f64::from(n);
        // Σ_{m≥n} (m+1) ρ^m = ρ^n ((n+1) - nρ) / (1-ρ)^2
        self.sup_norm_bound(outer) * rho.powf(nf) * ((nf + 1.0) - nf * rho) / (1.0 - rho).powi(2)
    }
}

/// Coefficients `a_{k,l}` stored by total degree: `rows[m][k] = a_{k, m-k}`.
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    rows: Vec<Vec<PrecisionComplex>>,
    prec: Precision,
}

impl CoefficientTable {
    pub fn from_rows(rows: Vec<Vec<PrecisionComplex>>, prec: Precision) -> Self {
        debug_assert!(rows.iter().enumerate().all(|(m, row)| row.len() == m + 1));
        CoefficientTable { rows, prec }
    }

    pub fn max_degree(&self) -> u32 {
        self.rows.len() as u32 - 1
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn get(&self, k: u32, l: u32) -> &PrecisionComplex {
        &self.rows[(k + l) as usize][k as usize]
    }

    /// `Σ_{k+l=m} a_{k,l} η^k`; zero beyond the stored degree.
    pub fn line_sum(&self, eta: &PrecisionComplex, m: u32) -> PrecisionComplex {
        let Some(row) = self.rows.get(m as usize) else {
            return PrecisionComplex::zero(self.prec);
        };
        let mut acc = PrecisionComplex::zero(self.prec);
        for a in row.iter().rev() {
            acc = &(&acc * eta) + a;
        }
        acc
    }

    /// Sum of the homogeneous parts of degree `lo..=hi`, by nested Horner.
    pub fn eval_range(&self, z1: &PrecisionComplex, z2: &PrecisionComplex, lo: u32, hi: u32) -> PrecisionComplex {
        let hi = hi.min(self.max_degree());
        let mut outer = PrecisionComplex::zero(self.prec);
        if lo > hi {
            return outer;
        }
        for k in (0..=hi).rev() {
            // inner = Σ_{l} a_{k,l} z2^l over lo ≤ k+l ≤ hi
            let l_lo = lo.saturating_sub(k);
            let l_hi = hi - k;
            let mut inner = PrecisionComplex::zero(self.prec);
            for l in (l_lo..=l_hi).rev() {
                inner = &(&inner * z2) + self.get(k, l);
            }
            if l_lo > 0 {
                inner *= z2.powu(l_lo);
            }
            outer = &(&outer * z1) + &inner;
        }
        outer
    }
}

/// Truncated Taylor sum of `f` at `z`, through total degree `M`.
///
/// `M` is the polynomial degree when `truncation` is `None`.
pub fn eval_taylor(
    f: &dyn BivariateTaylor,
    z: (&PrecisionComplex, &PrecisionComplex),
    truncation: Option<u32>,
) -> Result<PrecisionComplex> {
    let m = resolve_truncation(f, truncation)?;
    let prec = Precision::new(z.0.prec().max(z.1.prec()))?;
    Ok(f.table(m, prec).eval_range(z.0, z.1, 0, m))
}

/// Error bound for [`eval_taylor`]: the degree-`M+1` tail at radius `max(|z1|, |z2|)`.
pub fn truncation_error(
    f: &dyn BivariateTaylor,
    z: (&PrecisionComplex, &PrecisionComplex),
    truncation: Option<u32>,
) -> Result<f64> {
    let m = resolve_truncation(f, truncation)?;
    if f.degree().is_some_and(|d| d <= m) {
        return Ok(0.0);
    }
    Ok(f.tail_majorant(z.0.abs_f64(), z.1.abs_f64(), m + 1))
}

/// `Σ_{k+l=m} a_{k,l} η^k`, the `m`-th Taylor coefficient of `v ↦ f(ηv, v)`.
pub fn line_derivative_sum(f: &dyn BivariateTaylor, eta: &PrecisionComplex, m: u32) -> PrecisionComplex {
    let prec = Precision::new(eta.prec()).unwrap_or_default();
    let mut acc = PrecisionComplex::zero(prec);
    for k in (0..=m).rev() {
        acc = &(&acc * eta) + &f.coeff(k, m - k, prec);
    }
    acc
}

pub(crate) fn resolve_truncation(f: &dyn BivariateTaylor, truncation: Option<u32>) -> Result<u32> {
    truncation.or(f.degree()).ok_or(Error::TruncationUnavailable)
}

/// Upper bound for `Σ_{m ≥ n} x^m / m!` with `x ≥ 0`, tight to about `1e-12` relative.
pub(crate) fn exp_tail(x: f64, n: u32) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let mut term = (f64::from(n) * x.ln() - super::complex::ln_factorial(n)).exp();
    let mut sum = 0.0;
    let mut m = n;
    loop {
        sum += term;
        m += 1;
        term *= x / f64::from(m);
        // Once m + 1 > x the remaining terms are dominated by a geometric series.
        let ratio = x / f64::from(m + 1);
        if ratio < 1.0 {
            let rest = term / (1.0 - ratio);
            if rest <= sum * 1e-15 || !sum.is_finite() {
                return (sum + rest) * (1.0 + 1e-12);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_tail_matches_partial_sums() {
        let x: f64 = 1.7;
        let full = x.exp();
        let mut head = 0.0;
        let mut term = 1.0;
        for n in 0..20u32 {
            let tail = exp_tail(x, n);
            assert!(((head + tail) - full).abs() < 1e-11 * full, "n={n}");
            head += term;
            term *= x / f64::from(n + 1);
        }
        assert_eq!(exp_tail(0.0, 0), 1.0);
        assert_eq!(exp_tail(0.0, 3), 0.0);
    }
}
