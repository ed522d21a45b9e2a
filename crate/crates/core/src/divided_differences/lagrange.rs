//! Interpolating polynomials of a scalar function in Lagrange and Newton form.

use super::delta::{closed_form_weights, delta_closed_form, working_precision};
use crate::error::{Error, Result};
use crate::numerics::PrecisionComplex;

/// Degree `N-1` interpolant of `h` on `N` nodes.
///
/// The Newton coefficients are the divided differences `Δ_p[h](η_{p+1})`.
#[derive(Clone, Debug)]
pub struct Interpolant {
    nodes: Vec<PrecisionComplex>,
    values: Vec<PrecisionComplex>,
    weights: Vec<PrecisionComplex>,
    newton: Vec<PrecisionComplex>,
}

/// Builds the interpolant of `h` on the first `n` nodes.
pub fn lagrange_interpolant<H>(h: H, nodes: &[PrecisionComplex], n: usize) -> Result<Interpolant>
where
    H: Fn(&PrecisionComplex) -> PrecisionComplex,
{
    if n == 0 || nodes.len() < n {
        return Err(Error::InsufficientNodes {
            needed: n.max(1),
            available: nodes.len(),
        });
    }
    let nodes = nodes[..n].to_vec();
    let weights = closed_form_weights(&nodes)?;
    let values: Vec<_> = nodes.iter().map(&h).collect();
    let newton = (0..n)
        .map(|p| delta_closed_form(&h, &nodes, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(Interpolant {
        nodes,
        values,
        weights,
        newton,
    })
}

impl Interpolant {
    pub fn nodes(&self) -> &[PrecisionComplex] {
        &self.nodes
    }

    pub fn newton_coefficients(&self) -> &[PrecisionComplex] {
        &self.newton
    }

    /// `Σ_p h(η_p) Π_{j≠p} (ζ - η_j) / (η_p - η_j)`.
    pub fn eval_lagrange(&self, zeta: &PrecisionComplex) -> PrecisionComplex {
        let prec = working_precision(&self.nodes);
        let diffs: Vec<_> = self.nodes.iter().map(|e| zeta - e).collect();
        let mut acc = PrecisionComplex::zero(prec);
        for p in 0..self.nodes.len() {
            let mut term = &self.values[p] * &self.weights[p];
            for (j, d) in diffs.iter().enumerate() {
                if j != p {
                    term *= d;
                }
            }
            acc += term;
        }
        acc
    }

    /// `Σ_p Δ_p[h](η_{p+1}) Π_{j≤p} (ζ - η_j)` by nested multiplication.
    pub fn eval_newton(&self, zeta: &PrecisionComplex) -> PrecisionComplex {
        let n = self.newton.len();
        let mut acc = self.newton[n - 1].clone();
        for p in (0..n - 1).rev() {
            acc = &(&acc * &(zeta - &self.nodes[p])) + &self.newton[p];
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divided_differences::delta::relative_discrepancy;
    use crate::numerics::{phi_kernel, Precision};

    fn c(re: f64, im: f64) -> PrecisionComplex {
        PrecisionComplex::from_f64(re, im, Precision::DEFAULT)
    }

    #[test]
    fn constant_function() {
        let nodes: Vec<_> = (0..5).map(|j| c(f64::from(j), 1.0 / f64::from(j + 1))).collect();
        let k = c(2.5, -1.0);
        let interp = lagrange_interpolant(|_| k.clone(), &nodes, 5).unwrap();
        assert_eq!(interp.newton_coefficients()[0], k);
        for coeff in &interp.newton_coefficients()[1..] {
            assert!(coeff.abs_f64() < 1e-70);
        }
        assert!((&interp.eval_lagrange(&c(7.0, 3.0)) - &k).abs_f64() < 1e-70);
    }

    #[test]
    fn reproduces_values_and_forms_agree() {
        let nodes: Vec<_> = (1..=9).map(|j| c((f64::from(j)).sin() * 2.0, f64::from(j).cos())).collect();
        let h = |z: &PrecisionComplex| phi_kernel(z, 3);
        let interp = lagrange_interpolant(h, &nodes, 9).unwrap();
        for node in &nodes {
            assert!(relative_discrepancy(&interp.eval_lagrange(node), &h(node)) < 1e-60);
            assert!(relative_discrepancy(&interp.eval_newton(node), &h(node)) < 1e-60);
        }
        for s in 0..20 {
            let z = c(f64::from(s) * 0.17 - 1.5, 0.3 * f64::from(s % 7));
            let a = interp.eval_lagrange(&z);
            let b = interp.eval_newton(&z);
            assert!(relative_discrepancy(&a, &b) < 1e-55);
        }
    }
}
