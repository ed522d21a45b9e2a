//! Reconstruction of `f` from its restrictions to the lines `{z1 = η_j z2}`.

mod experiment;
mod operator;

pub use experiment::{classify_trend, convergence_experiment, CompactSet, CurvePoint, ErrorCurve, ExperimentOptions, Trend};
pub use operator::{
    default_truncation, eval_en, eval_rn, eval_tail, EvalPoint, Estimate, PointValues, ReconstructionRequest,
    Reconstructor,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::PrecisionComplex;

/// Roundoff allowance per unit of summed magnitude: `2^-(bits - 32)`.
pub fn roundoff_unit(bits: u32) -> f64 {
    (32.0 - f64::from(bits)).exp2()
}

/// Values of `E_N`, `R_N`, the tail and `f` aligned with the request's evaluation points.
#[derive(Clone, Debug)]
pub struct ReconstructionResult {
    pub n: usize,
    pub truncation_degree: u32,
    pub precision_bits: u32,
    pub e_values: Vec<PrecisionComplex>,
    pub r_values: Vec<PrecisionComplex>,
    pub tail_values: Vec<PrecisionComplex>,
    /// Closed form of `f` where available, otherwise its degree-`M` Taylor polynomial.
    pub f_values: Vec<PrecisionComplex>,
    /// `max |f_{≤M} - (E_N - R_N + tail)|`; zero up to roundoff.
    pub identity_residual: f64,
    /// Allowed roundoff for `identity_residual`.
    pub roundoff_budget: f64,
    /// `max |f - f_{≤M}|` bound over the points.
    pub truncation_bound: f64,
    /// `max |f - (E_N - R_N + tail)|` against the closed form, when there is one.
    pub closed_form_residual: Option<f64>,
}

#[derive(Serialize)]
struct ResultJson {
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "M")]
    m: u32,
    precision_bits: u32,
    e_values: Vec<(String, String)>,
    r_values: Vec<(String, String)>,
    tail_values: Vec<(String, String)>,
    f_values: Vec<(String, String)>,
    identity_residual: f64,
    roundoff_budget: f64,
    truncation_bound: f64,
    closed_form_residual: Option<f64>,
}

impl Serialize for ReconstructionResult {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let dec = |v: &[PrecisionComplex]| v.iter().map(PrecisionComplex::to_decimal_pair).collect();
        ResultJson {
            n: self.n,
            m: self.truncation_degree,
            precision_bits: self.precision_bits,
            e_values: dec(&self.e_values),
            r_values: dec(&self.r_values),
            tail_values: dec(&self.tail_values),
            f_values: dec(&self.f_values),
            identity_residual: self.identity_residual,
            roundoff_budget: self.roundoff_budget,
            truncation_bound: self.truncation_bound,
            closed_form_residual: self.closed_form_residual,
        }
        .serialize(serializer)
    }
}

/// Evaluates every operator and the decomposition residual.
pub fn reconstruct(req: &ReconstructionRequest<'_>) -> Result<ReconstructionResult> {
    let op = Reconstructor::from_request(req)?;
    let values = op.eval_points(&req.eval_points);
    let bits = op.precision().bits();
    let unit = roundoff_unit(bits);
    let mut out = ReconstructionResult {
        n: req.n,
        truncation_degree: op.truncation_degree(),
        precision_bits: bits,
        e_values: Vec::with_capacity(values.len()),
        r_values: Vec::with_capacity(values.len()),
        tail_values: Vec::with_capacity(values.len()),
        f_values: Vec::with_capacity(values.len()),
        identity_residual: 0.0,
        roundoff_budget: 0.0,
        truncation_bound: 0.0,
        closed_form_residual: None,
    };
    for ((z1, z2), v) in req.eval_points.iter().zip(values) {
        let rebuilt = &(&v.e - &v.r) + &v.tail;
        out.identity_residual = out.identity_residual.max((&v.taylor - &rebuilt).abs_f64());
        out.roundoff_budget = out.roundoff_budget.max(unit * (1.0 + v.scale));
        out.truncation_bound = out.truncation_bound.max(v.tail_truncation);
        let f = match req.f.eval_closed_form(&z1.with_prec(op.precision()), &z2.with_prec(op.precision())) {
            Some(exact) => {
                let res = (&exact - &rebuilt).abs_f64();
                out.closed_form_residual = Some(out.closed_form_residual.unwrap_or(0.0).max(res));
                exact
            }
            None => v.taylor.clone(),
        };
        out.f_values.push(f);
        out.e_values.push(v.e);
        out.r_values.push(v.r);
        out.tail_values.push(v.tail);
    }
    Ok(out)
}

/// Residual of `f = E_N - R_N + tail` with its budget.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub residual: f64,
    pub budget: f64,
    pub truncation_bound: f64,
    pub closed_form_residual: Option<f64>,
    pub precision_bits: u32,
}

/// Fails with `IdentityViolation` when the residual against the degree-`M` Taylor
/// polynomial exceeds the roundoff budget, or the closed-form residual exceeds
/// that budget plus the truncation bound.
pub fn verify_identity(req: &ReconstructionRequest<'_>) -> Result<IdentityReport> {
    let res = reconstruct(req)?;
    if !(res.identity_residual <= res.roundoff_budget) {
        return Err(Error::IdentityViolation {
            residual: res.identity_residual,
            budget: res.roundoff_budget,
        });
    }
    if let Some(cf) = res.closed_form_residual {
        let budget = res.roundoff_budget + res.truncation_bound;
        if !(cf <= budget) {
            return Err(Error::IdentityViolation { residual: cf, budget });
        }
    }
    Ok(IdentityReport {
        residual: res.identity_residual,
        budget: res.roundoff_budget,
        truncation_bound: res.truncation_bound,
        closed_form_residual: res.closed_form_residual,
        precision_bits: res.precision_bits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::directions::{gen_kappa, DirectionSequence, Provenance};
    use crate::numerics::{line_derivative_sum, BivariateTaylor, CatalogFunction, Precision};

    fn c(re: f64, im: f64) -> PrecisionComplex {
        PrecisionComplex::from_f64(re, im, Precision::DEFAULT)
    }

    fn seq(points: &[(f64, f64)]) -> DirectionSequence {
        DirectionSequence::new(
            points.iter().map(|&(a, b)| c(a, b)).collect(),
            Provenance::new("test", serde_json::Value::Null),
        )
        .unwrap()
    }

    fn func(spec: &str) -> CatalogFunction {
        spec.parse().unwrap()
    }

    /// The interpolation formula summed literally, term by term.
    fn brute_en(f: &CatalogFunction, eta: &[PrecisionComplex], z1: &PrecisionComplex, z2: &PrecisionComplex, m: u32) -> PrecisionComplex {
        let n = eta.len();
        let one = c(1.0, 0.0);
        let mut total = c(0.0, 0.0);
        for p in 0..n {
            let mut pre = one.clone();
            for e in &eta[p + 1..] {
                pre = &pre * &(z1 - &(e * z2));
            }
            let mut inner = c(0.0, 0.0);
            for q in p..n {
                let norm = &one + &(&eta[q] * &eta[q].conj());
                let mut den = one.clone();
                for j in p..n {
                    if j != q {
                        den = &den * &(&eta[q] - &eta[j]);
                    }
                }
                let w = &(z2 + &(&eta[q].conj() * z1)) / &norm;
                let mut series = c(0.0, 0.0);
                for mm in (n - 1 - p) as u32..=m {
                    let pw = w.powu(mm + p as u32 + 1 - n as u32);
                    series = &series + &(&pw * &line_derivative_sum(f, &eta[q], mm));
                }
                let factor = &(&one + &(&eta[p] * &eta[q].conj())) / &(&norm * &den);
                inner = &inner + &(&factor * &series);
            }
            total = &total + &(&pre * &inner);
        }
        total
    }

    #[test]
    fn constant_with_one_line() {
        let f = func("monomial:0,0");
        let s = seq(&[(0.3, -1.2)]);
        let req = ReconstructionRequest::new(&f, &s, 1, vec![(c(2.0, 1.0), c(-0.5, 3.0))]);
        let e = eval_en(&req).unwrap();
        assert!((&e[0].value - &c(1.0, 0.0)).abs_f64() < 1e-70);
    }

    #[test]
    fn linear_function_two_lines() {
        let f = func("monomial:1,0");
        let s = seq(&[(0.0, 0.0), (1.0, 0.0)]);
        let req = ReconstructionRequest::new(&f, &s, 2, vec![(c(2.0, 0.0), c(5.0, 0.0))]);
        let e = eval_en(&req).unwrap();
        assert!((&e[0].value - &c(2.0, 0.0)).abs_f64() < 1e-70);
    }

    #[test]
    fn restriction_to_a_line() {
        let f = func("exp-linear:1,1");
        let s = seq(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        for t in [0.3, 1.7] {
            let z = (c(t, 0.0), c(t, 0.0));
            let req = ReconstructionRequest::new(&f, &s, 3, vec![z.clone()]).with_truncation(60);
            let e = eval_en(&req).unwrap();
            let exact = f.eval_closed_form(&z.0, &z.1).unwrap();
            assert!((&e[0].value - &exact).abs_f64() <= e[0].truncation_error + 1e-60);
        }
    }

    #[test]
    fn single_line_is_a_pullback() {
        // E_1(z) = f(η w, w) with w = (z2 + conj(η) z1) / (1 + |η|^2).
        let f = func("exp-linear:1/2,-i");
        let s = seq(&[(0.4, 0.7)]);
        let eta = s.get(1).unwrap().clone();
        let (z1, z2) = (c(0.3, -0.2), c(-0.6, 0.5));
        let w = &(&z2 + &(&eta.conj() * &z1)) / &(&c(1.0, 0.0) + &(&eta * &eta.conj()));
        let exact = f.eval_closed_form(&(&eta * &w), &w).unwrap();
        let req = ReconstructionRequest::new(&f, &s, 1, vec![(z1, z2)]).with_truncation(80);
        let e = eval_en(&req).unwrap();
        assert!((&e[0].value - &exact).abs_f64() < 1e-40);
    }

    #[test]
    fn matches_literal_formula() {
        let f = func("exp-product:1");
        let s = gen_kappa(5, Precision::DEFAULT);
        let z = (c(0.4, 0.1), c(-0.3, 0.6));
        let req = ReconstructionRequest::new(&f, &s, 5, vec![z.clone()]).with_truncation(30);
        let e = eval_en(&req).unwrap();
        let brute = brute_en(&f, &s.points()[..5], &z.0, &z.1, 30);
        assert!((&e[0].value - &brute).abs_f64() < 1e-60);
    }

    #[test]
    fn remainder_examples() {
        let f = func("poly:1@0,0;2@1,0;-3@0,1");
        let s = gen_kappa(4, Precision::DEFAULT);
        let req = ReconstructionRequest::new(&f, &s, 3, vec![(c(0.2, 0.1), c(1.0, -1.0))]);
        assert!(eval_rn(&req).unwrap()[0].value.is_zero());
        let g = func("monomial:0,2");
        let s0 = seq(&[(0.0, 0.0)]);
        let req = ReconstructionRequest::new(&g, &s0, 1, vec![(c(0.0, 0.0), c(1.0, 0.0))]);
        assert!((&eval_rn(&req).unwrap()[0].value - &c(1.0, 0.0)).abs_f64() < 1e-70);
    }

    #[test]
    fn tail_examples() {
        let f = func("exp-linear:1,1");
        let one = c(1.0, 0.0);
        let t = eval_tail(&f, 0, (&one, &one), 40);
        assert!((t.value.abs_f64() - std::f64::consts::E.powi(2)).abs() < 1e-13);
        let exact = f.eval_closed_form(&one, &one).unwrap();
        assert!((&t.value - &exact).abs_f64() < 1e-20);
        let empty = eval_tail(&f, 41, (&one, &one), 40);
        assert!(empty.value.is_zero() && empty.truncation_error > 0.0);
        let p = func("monomial:2,1");
        assert!(eval_tail(&p, 4, (&one, &one), 40).value.is_zero());
    }

    #[test]
    fn identity_on_kappa() {
        let f = func("exp-product:1");
        let s = gen_kappa(6, Precision::DEFAULT);
        let grid = CompactSet::polydisc(1.0).grid(Precision::DEFAULT);
        let req = ReconstructionRequest::new(&f, &s, 6, grid).with_truncation(60);
        let rep = verify_identity(&req).unwrap();
        assert!(rep.residual < 1e-20);
        for n in [1, 2] {
            let req = ReconstructionRequest::new(&f, &s, n, vec![(c(0.5, 0.5), c(-0.2, 0.9))]);
            assert!(verify_identity(&req).is_ok());
        }
    }

    #[test]
    fn duplicate_nodes_are_rejected() {
        let f = func("monomial:1,1");
        let s = DirectionSequence::new(
            vec![c(0.5, 0.0), &c(0.5, 0.0) + &c((-200f64).exp2(), 0.0)],
            Provenance::new("test", serde_json::Value::Null),
        )
        .unwrap();
        let req = ReconstructionRequest::new(&f, &s, 2, vec![(c(1.0, 0.0), c(1.0, 0.0))]);
        assert!(matches!(eval_en(&req), Err(Error::DuplicateNode { .. })));
    }

    #[test]
    fn trend_rule() {
        assert_eq!(classify_trend(&[1.0, 0.1, 0.01], 0.0), Trend::Decreasing);
        assert_eq!(classify_trend(&[1.0, 0.9, 0.8], 0.0), Trend::NotDecreasing);
        assert_eq!(classify_trend(&[1.0, 20.0, 0.01], 0.0), Trend::NotDecreasing);
        assert_eq!(classify_trend(&[1e-80, 1e-79], 1e-60), Trend::Decreasing);
    }
}
