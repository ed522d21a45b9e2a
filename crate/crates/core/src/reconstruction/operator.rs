//! The operators `E_N`, `R_N` and the Taylor tail, evaluated from line data.
//!
//! With `c_m(η) = Σ_{k+l=m} a_{k,l} η^k`, `w_q(z) = (z2 + conj(η_q) z1) / (1 + |η_q|^2)` and
//! `S_q(d) = Σ_{d ≤ m ≤ M} c_m(η_q) w_q^{m-d}`:
//!
//! - `E_N(z) = Σ_p Π_{j>p} (z1 - η_j z2) Σ_{q≥p} coef_{p,q} S_q(N-p)`, where
//!   `coef_{p,q} = (1 + η_p conj(η_q)) / (1 + |η_q|^2) / Π_{p≤j≤N, j≠q} (η_q - η_j)`;
//! - `R_N(z) = Σ_p Π_{j≠p} (z1 - η_j z2) / (η_p - η_j) · w_p S_p(N)`;
//! - `tail(z) = Σ_{N ≤ k+l ≤ M} a_{k,l} z1^k z2^l`.
//!
//! All inner series stop at degree `M`, and then `E_N - R_N + tail` equals the
//! degree-`M` Taylor polynomial of `f` exactly.

use rayon::prelude::*;
use rug::Float;

use crate::directions::DirectionSequence;
use crate::divided_differences::checked_difference;
use crate::error::{Error, Result};
use crate::numerics::{BivariateTaylor, CoefficientTable, Precision, PrecisionComplex};

/// `max(2N, 40)`.
pub fn default_truncation(n: usize) -> u32 {
    (2 * n as u32).max(40)
}

pub type EvalPoint = (PrecisionComplex, PrecisionComplex);

/// Inputs of one reconstruction: `f`, the first `n` directions, evaluation points and `M`.
#[derive(Clone)]
pub struct ReconstructionRequest<'a> {
    pub f: &'a dyn BivariateTaylor,
    pub seq: &'a DirectionSequence,
    pub n: usize,
    pub eval_points: Vec<EvalPoint>,
    /// `None` selects [`default_truncation`], raised to the degree of a polynomial `f`.
    pub truncation: Option<u32>,
    pub precision: Precision,
}

impl<'a> ReconstructionRequest<'a> {
    pub fn new(f: &'a dyn BivariateTaylor, seq: &'a DirectionSequence, n: usize, eval_points: Vec<EvalPoint>) -> Self {
        ReconstructionRequest {
            f,
            seq,
            n,
            eval_points,
            truncation: None,
            precision: seq.precision(),
        }
    }

    pub fn with_truncation(mut self, m: u32) -> Self {
        self.truncation = Some(m);
        self
    }

    pub fn with_precision(mut self, prec: Precision) -> Self {
        self.precision = prec;
        self
    }

    pub fn truncation_degree(&self) -> u32 {
        self.truncation
            .unwrap_or_else(|| default_truncation(self.n).max(self.f.degree().unwrap_or(0)))
    }
}

/// A computed value with a bound on the error from stopping the series at degree `M`.
#[derive(Clone, Debug)]
pub struct Estimate {
    pub value: PrecisionComplex,
    pub truncation_error: f64,
}

/// Every quantity at one evaluation point.
#[derive(Clone, Debug)]
pub struct PointValues {
    pub e: PrecisionComplex,
    pub r: PrecisionComplex,
    pub tail: PrecisionComplex,
    /// Degree-`M` Taylor polynomial of `f`.
    pub taylor: PrecisionComplex,
    /// Upper bound for the magnitudes summed into `E_N` and `R_N`, for roundoff budgets.
    pub scale: f64,
    pub e_truncation: f64,
    pub r_truncation: f64,
    pub tail_truncation: f64,
}

/// Node-dependent data of `E_N` and `R_N` for fixed `f`, `η_1..η_N` and `M`.
pub struct Reconstructor<'a> {
    f: &'a dyn BivariateTaylor,
    n: usize,
    m: u32,
    prec: Precision,
    nodes: Vec<PrecisionComplex>,
    conj: Vec<PrecisionComplex>,
    /// `1 / (1 + |η_q|^2)`
    inv_norm: Vec<Float>,
    /// `line[q][m] = c_m(η_q)`
    line: Vec<Vec<PrecisionComplex>>,
    /// `coef[p][q]` for `q ≥ p`, 0-based.
    coef: Vec<Vec<PrecisionComplex>>,
    /// `1 / Π_{j≠p} (η_p - η_j)`
    lagrange: Vec<PrecisionComplex>,
    table: CoefficientTable,
}

impl<'a> Reconstructor<'a> {
    /// Fails with `InsufficientNodes` if the sequence is shorter than `n` and with
    /// `DuplicateNode` if two of the first `n` nodes are closer than the precision allows.
    pub fn new(f: &'a dyn BivariateTaylor, seq: &DirectionSequence, n: usize, m: u32, prec: Precision) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("N must be at least 1".into()));
        }
        if seq.len() < n {
            return Err(Error::InsufficientNodes {
                needed: n,
                available: seq.len(),
            });
        }
        if (m as usize) + 1 < n {
            return Err(Error::InvalidArgument(format!("truncation M = {m} is below N - 1 = {}", n - 1)));
        }
        let nodes: Vec<PrecisionComplex> = seq.points()[..n].iter().map(|z| z.with_prec(prec)).collect();
        let mut diff = vec![vec![PrecisionComplex::zero(prec); n]; n];
        for i in 0..n {
            for j in 0..i {
                let d = checked_difference(&nodes, i, j, prec.bits())?;
                diff[j][i] = -&d;
                diff[i][j] = d;
            }
        }
        let conj: Vec<_> = nodes.iter().map(PrecisionComplex::conj).collect();
        let inv_norm: Vec<Float> = nodes
            .iter()
            .map(|z| {
                let s = Float::with_val(prec.bits(), 1) + z.norm_sqr();
                Float::with_val(prec.bits(), 1) / s
            })
            .collect();
        let table = f.table(m, prec);
        let line = nodes
            .par_iter()
            .map(|eta| (0..=m).map(|d| table.line_sum(eta, d)).collect())
            .collect();
        let one = PrecisionComplex::one(prec);
        let mut coef = vec![Vec::new(); n];
        for (p, row) in coef.iter_mut().enumerate() {
            for q in p..n {
                let mut den = one.clone();
                for j in p..n {
                    if j != q {
                        den *= &diff[q][j];
                    }
                }
                let num = (&one + &(&nodes[p] * &conj[q])).scale(&inv_norm[q]);
                row.push(&num / &den);
            }
        }
        let lagrange = (0..n)
            .map(|p| {
                let mut den = one.clone();
                for j in (0..n).filter(|&j| j != p) {
                    den *= &diff[p][j];
                }
                den.recip()
            })
            .collect();
        Ok(Reconstructor {
            f,
            n,
            m,
            prec,
            nodes,
            conj,
            inv_norm,
            line,
            coef,
            lagrange,
            table,
        })
    }

    pub fn from_request(req: &ReconstructionRequest<'a>) -> Result<Self> {
        Reconstructor::new(req.f, req.seq, req.n, req.truncation_degree(), req.precision)
    }

    pub fn truncation_degree(&self) -> u32 {
        self.m
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    fn is_exact(&self) -> bool {
        self.f.degree().is_some_and(|d| d <= self.m)
    }

    /// `Σ_{m > M} |c_m(η)| |w|^{m-N+1}`, bounded by the tail majorant at `(|η||w|, |w|)`.
    fn r_inner_truncation(&self, eta_abs: f64, w_abs: f64) -> f64 {
        if self.is_exact() || w_abs < 1e-300 {
            return 0.0;
        }
        let shift = 1.0 - self.n as f64;
        self.f.tail_majorant(eta_abs * w_abs, w_abs, self.m + 1) * w_abs.powf(shift)
    }

    pub fn eval_point(&self, z1: &PrecisionComplex, z2: &PrecisionComplex) -> PointValues {
        let (n, prec) = (self.n, self.prec);
        let z1 = z1.with_prec(prec);
        let z2 = z2.with_prec(prec);
        let w: Vec<PrecisionComplex> = (0..n)
            .map(|q| (&z2 + &(&self.conj[q] * &z1)).scale(&self.inv_norm[q]))
            .collect();
        // s[q][d] = S_q(d) for d = 0..=M
        let s: Vec<Vec<PrecisionComplex>> = (0..n)
            .map(|q| {
                let mut out = vec![PrecisionComplex::zero(prec); self.m as usize + 1];
                let mut acc = PrecisionComplex::zero(prec);
                for d in (0..=self.m as usize).rev() {
                    acc = &(&acc * &w[q]) + &self.line[q][d];
                    out[d] = acc.clone();
                }
                out
            })
            .collect();
        let factors: Vec<PrecisionComplex> = self.nodes.iter().map(|eta| &z1 - &(eta * &z2)).collect();
        let mut scale = 0.0f64;

        // E_N, with p running down so the prefactor Π_{j>p} grows one factor at a time.
        let mut e = PrecisionComplex::zero(prec);
        let mut pre = PrecisionComplex::one(prec);
        let mut e_trunc = 0.0f64;
        for p in (0..n).rev() {
            let d = n - 1 - p;
            let mut inner = PrecisionComplex::zero(prec);
            let mut inner_abs = 0.0;
            for q in p..n {
                let term = &self.coef[p][q - p] * &s[q][d];
                inner_abs += term.abs_f64();
                inner += term;
            }
            let pre_abs = pre.abs_f64();
            scale += pre_abs * inner_abs;
            e += &pre * &inner;
            if p > 0 {
                pre *= &factors[p];
            }
        }

        // R_N
        let mut prefix = vec![PrecisionComplex::one(prec); n + 1];
        for j in 0..n {
            prefix[j + 1] = &prefix[j] * &factors[j];
        }
        let mut suffix = PrecisionComplex::one(prec);
        let mut r = PrecisionComplex::zero(prec);
        let mut r_trunc = 0.0f64;
        for p in (0..n).rev() {
            let lag = &(&prefix[p] * &suffix) * &self.lagrange[p];
            let inner = match s[p].get(n) {
                Some(v) => &w[p] * v,
                None => PrecisionComplex::zero(prec),
            };
            let term = &lag * &inner;
            let lag_abs = lag.abs_f64();
            scale += term.abs_f64();
            r_trunc += lag_abs * self.r_inner_truncation(self.nodes[p].abs_f64(), w[p].abs_f64());
            r += term;
            suffix *= &factors[p];
        }

        let tail = self.table.eval_range(&z1, &z2, n as u32, self.m);
        let head = self.table.eval_range(&z1, &z2, 0, (n as u32).saturating_sub(1).min(self.m));
        let taylor = &head + &tail;
        scale += tail.abs_f64() + head.abs_f64();
        let tail_truncation = if self.is_exact() {
            0.0
        } else {
            self.f.tail_majorant(z1.abs_f64(), z2.abs_f64(), self.m + 1)
        };
        // E_full - E_M = (R_full - R_M) - (tail_full - tail_M)
        e_trunc += r_trunc + tail_truncation;
        PointValues {
            e,
            r,
            tail,
            taylor,
            scale,
            e_truncation: e_trunc,
            r_truncation: r_trunc,
            tail_truncation,
        }
    }

    pub fn eval_points(&self, points: &[EvalPoint]) -> Vec<PointValues> {
        points.par_iter().map(|(z1, z2)| self.eval_point(z1, z2)).collect()
    }
}

/// `E_N(f; η)` at each evaluation point.
pub fn eval_en(req: &ReconstructionRequest<'_>) -> Result<Vec<Estimate>> {
    let op = Reconstructor::from_request(req)?;
    Ok(op
        .eval_points(&req.eval_points)
        .into_iter()
        .map(|v| Estimate {
            value: v.e,
            truncation_error: v.e_truncation,
        })
        .collect())
}

/// `R_N(f; η)` at each evaluation point.
pub fn eval_rn(req: &ReconstructionRequest<'_>) -> Result<Vec<Estimate>> {
    let op = Reconstructor::from_request(req)?;
    Ok(op
        .eval_points(&req.eval_points)
        .into_iter()
        .map(|v| Estimate {
            value: v.r,
            truncation_error: v.r_truncation,
        })
        .collect())
}

/// `Σ_{N ≤ k+l ≤ M} a_{k,l} z1^k z2^l` with a bound on the omitted degrees `> M`.
///
/// Zero with a pure tail bound when `N > M`.
pub fn eval_tail(f: &dyn BivariateTaylor, n: u32, z: (&PrecisionComplex, &PrecisionComplex), m: u32) -> Estimate {
    let prec = Precision::new(z.0.prec().max(z.1.prec())).unwrap_or_default();
    let value = if n > m {
        PrecisionComplex::zero(prec)
    } else {
        f.table(m, prec).eval_range(z.0, z.1, n, m)
    };
    let truncation_error = if f.degree().is_some_and(|d| d <= m) {
        0.0
    } else {
        f.tail_majorant(z.0.abs_f64(), z.1.abs_f64(), (m + 1).max(n))
    };
    Estimate {
        value,
        truncation_error,
    }
}
