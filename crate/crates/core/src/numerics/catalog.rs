//! Builtin entire functions with exact coefficient oracles.
//!
//! Spec strings: `monomial:k,l`, `poly:c@k,l;c@k,l`, `exp-linear:a,b`,
//! `exp-product:a`, where coefficients are complex literals with rational
//! parts such as `1/2-3i` or `0.25+i`.

use std::fmt;
use std::str::FromStr;

use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use super::complex::{cexp, split_complex_literal, Precision, PrecisionComplex};
use super::taylor::{exp_tail, BivariateTaylor, CoefficientTable};
use crate::error::{Error, Result};

/// Exact complex rational `re + i·im`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: impl Into<Rational>, im: impl Into<Rational>) -> Self {
        GaussianRational {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn real(re: impl Into<Rational>) -> Self {
        Self::new(re, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn to_complex(&self, prec: Precision) -> PrecisionComplex {
        PrecisionComplex::from_parts(
            Float::with_val(prec.bits(), &self.re),
            Float::with_val(prec.bits(), &self.im),
        )
    }

    pub fn abs_f64(&self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re == 0, self.im == 0) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) if self.im < 0 => write!(f, "{}{}i", self.re, self.im),
            (false, false) => write!(f, "{}+{}i", self.re, self.im),
        }
    }
}

impl FromStr for GaussianRational {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (re, im) = split_complex_literal(s)?;
        Ok(GaussianRational {
            re: parse_rational(&re)?,
            im: parse_rational(&im)?,
        })
    }
}

/// Parses `p/q`, integers, and finite decimals with an optional exponent, exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if s.contains('/') {
        return Rational::from_str(s).map_err(|_| bad());
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(idx) => (&s[..idx], s[idx + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || digits == "-" || digits == "+" {
        return Err(bad());
    }
    let numer = Integer::from_str(&digits).map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32;
    let pow = Integer::from(Integer::u_pow_u(10, scale.unsigned_abs()));
    Ok(if scale >= 0 {
        Rational::from(numer * pow)
    } else {
        Rational::from((numer, pow))
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyTerm {
    pub coeff: GaussianRational,
    pub k: u32,
    pub l: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CatalogFunction {
    /// `z1^k z2^l`
    Monomial { k: u32, l: u32 },
    /// Finite sum of `c z1^k z2^l`; repeated exponents are summed.
    Polynomial(Vec<PolyTerm>),
    /// `exp(a z1 + b z2)`
    ExpLinear { a: GaussianRational, b: GaussianRational },
    /// `exp(a z1 z2)`
    ExpProduct { a: GaussianRational },
}

impl CatalogFunction {
    pub fn exp_linear(a: GaussianRational, b: GaussianRational) -> Self {
        CatalogFunction::ExpLinear { a, b }
    }

    /// Functions scanned by experiments that need one representative per family.
    pub fn builtin() -> Vec<CatalogFunction> {
        [
            "exp-linear:1,1",
            "exp-linear:1/2,-i",
            "exp-product:1",
            "monomial:3,2",
            "poly:1@0,0;-1/2@1,1;2i@3,0;1/3@0,4",
        ]
        .iter()
        .map(|s| s.parse().expect("builtin catalog spec"))
        .collect()
    }

    fn terms_abs(&self) -> Vec<(f64, u32, u32)> {
        match self {
            CatalogFunction::Monomial { k, l } => vec![(1.0, *k, *l)],
            CatalogFunction::Polynomial(terms) => terms.iter().map(|t| (t.coeff.abs_f64(), t.k, t.l)).collect(),
            _ => Vec::new(),
        }
    }
}

/// `x^n / n!` for `n = 0..=max`, at the precision of `x`.
fn scaled_powers(x: &PrecisionComplex, max: u32) -> Vec<PrecisionComplex> {
    let mut out = Vec::with_capacity(max as usize + 1);
    let mut cur = PrecisionComplex::one(Precision::new(x.prec()).unwrap_or_default());
    out.push(cur.clone());
    for n in 1..=max {
        cur = (&cur * x).scale(&(Float::with_val(x.prec(), 1) / n));
        out.push(cur.clone());
    }
    out
}

impl BivariateTaylor for CatalogFunction {
    fn coeff(&self, k: u32, l: u32, prec: Precision) -> PrecisionComplex {
        match self {
            CatalogFunction::Monomial { k: mk, l: ml } => {
                if (k, l) == (*mk, *ml) {
                    PrecisionComplex::one(prec)
                } else {
                    PrecisionComplex::zero(prec)
                }
            }
            CatalogFunction::Polynomial(terms) => {
                let mut acc = PrecisionComplex::zero(prec);
                for t in terms.iter().filter(|t| (t.k, t.l) == (k, l)) {
                    acc += t.coeff.to_complex(prec);
                }
                acc
            }
            CatalogFunction::ExpLinear { a, b } => {
                let pa = scaled_powers(&a.to_complex(prec), k);
                let pb = scaled_powers(&b.to_complex(prec), l);
                &pa[k as usize] * &pb[l as usize]
            }
            CatalogFunction::ExpProduct { a } => {
                if k != l {
                    return PrecisionComplex::zero(prec);
                }
                scaled_powers(&a.to_complex(prec), k).pop().expect("nonempty")
            }
        }
    }

    fn degree(&self) -> Option<u32> {
        match self {
            CatalogFunction::Monomial { k, l } => Some(k + l),
            CatalogFunction::Polynomial(terms) => Some(
                terms
                    .iter()
                    .filter(|t| !t.coeff.is_zero())
                    .map(|t| t.k + t.l)
                    .max()
                    .unwrap_or(0),
            ),
            CatalogFunction::ExpLinear { .. } | CatalogFunction::ExpProduct { .. } => None,
        }
    }

    fn tail_majorant(&self, r1: f64, r2: f64, n: u32) -> f64 {
        match self {
            CatalogFunction::ExpLinear { a, b } => exp_tail(a.abs_f64() * r1 + b.abs_f64() * r2, n),
            CatalogFunction::ExpProduct { a } => exp_tail(a.abs_f64() * r1 * r2, n.div_ceil(2)),
            _ => self
                .terms_abs()
                .into_iter()
                .filter(|&(_, k, l)| k + l >= n)
                .map(|(c, k, l)| c * r1.powi(k as i32) * r2.powi(l as i32))
                .sum(),
        }
    }

    fn sup_norm_bound(&self, radius: f64) -> f64 {
        match self {
            CatalogFunction::ExpLinear { a, b } => ((a.abs_f64() + b.abs_f64()) * radius).exp(),
            CatalogFunction::ExpProduct { a } => (a.abs_f64() * radius * radius).exp(),
            _ => self.tail_majorant(radius, radius, 0),
        }
    }

    fn eval_closed_form(&self, z1: &PrecisionComplex, z2: &PrecisionComplex) -> Option<PrecisionComplex> {
        let prec = Precision::new(z1.prec().max(z2.prec())).ok()?;
        Some(match self {
            CatalogFunction::Monomial { k, l } => &z1.powu(*k) * &z2.powu(*l),
            CatalogFunction::Polynomial(terms) => {
                let mut acc = PrecisionComplex::zero(prec);
                for t in terms {
                    acc += &(&t.coeff.to_complex(prec) * &z1.powu(t.k)) * &z2.powu(t.l);
                }
                acc
            }
            CatalogFunction::ExpLinear { a, b } => {
                cexp(&(&(&a.to_complex(prec) * z1) + &(&b.to_complex(prec) * z2)))
            }
            CatalogFunction::ExpProduct { a } => cexp(&(&(&a.to_complex(prec) * z1) * z2)),
        })
    }

    fn describe(&self) -> String {
        self.to_string()
    }

    fn table(&self, max_degree: u32, prec: Precision) -> CoefficientTable {
        let zero = || PrecisionComplex::zero(prec);
        let mut rows: Vec<Vec<PrecisionComplex>> =
            (0..=max_degree).map(|m| vec![zero(); m as usize + 1]).collect();
        match self {
            CatalogFunction::ExpLinear { a, b } => {
                let pa = scaled_powers(&a.to_complex(prec), max_degree);
                let pb = scaled_powers(&b.to_complex(prec), max_degree);
                for (m, row) in rows.iter_mut().enumerate() {
                    for (k, slot) in row.iter_mut().enumerate() {
                        *slot = &pa[k] * &pb[m - k];
                    }
                }
            }
            CatalogFunction::ExpProduct { a } => {
                let pa = scaled_powers(&a.to_complex(prec), max_degree / 2);
                for (k, v) in pa.into_iter().enumerate() {
                    rows[2 * k][k] = v;
                }
            }
            CatalogFunction::Monomial { k, l } => {
                if k + l <= max_degree {
                    rows[(k + l) as usize][*k as usize] = PrecisionComplex::one(prec);
                }
            }
            CatalogFunction::Polynomial(terms) => {
                for t in terms.iter().filter(|t| t.k + t.l <= max_degree) {
                    rows[(t.k + t.l) as usize][t.k as usize] += t.coeff.to_complex(prec);
                }
            }
        }
        CoefficientTable::from_rows(rows, prec)
    }
}

impl fmt::Display for CatalogFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogFunction::Monomial { k, l } => write!(f, "monomial:{k},{l}"),
            CatalogFunction::Polynomial(terms) => {
                write!(f, "poly:")?;
                for (idx, t) in terms.iter().enumerate() {
                    if idx > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{}@{},{}", t.coeff, t.k, t.l)?;
                }
                Ok(())
            }
            CatalogFunction::ExpLinear { a, b } => write!(f, "exp-linear:{a},{b}"),
            CatalogFunction::ExpProduct { a } => write!(f, "exp-product:{a}"),
        }
    }
}

fn parse_pair(s: &str) -> Result<(u32, u32)> {
    let (k, l) = s
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("expected two exponents 'k,l', got {s:?}")))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<u32>()
            .map_err(|_| Error::Parse(format!("bad exponent {t:?}")))
    };
    Ok((parse(k)?, parse(l)?))
}

impl FromStr for CatalogFunction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("function spec needs 'name:args', got {s:?}")))?;
        match name.trim() {
            "monomial" => {
                let (k, l) = parse_pair(args)?;
                Ok(CatalogFunction::Monomial { k, l })
            }
            "poly" => {
                let terms = args
                    .split(';')
                    .filter(|t| !t.trim().is_empty())
                    .map(|t| {
                        let (c, kl) = t
                            .split_once('@')
                            .ok_or_else(|| Error::Parse(format!("poly term needs 'c@k,l', got {t:?}")))?;
                        let (k, l) = parse_pair(kl)?;
                        Ok(PolyTerm { coeff: c.parse()?, k, l })
                    })
                    .collect::<Result<Vec<_>>>()?;
                if terms.is_empty() {
                    return Err(Error::Parse("poly needs at least one term".into()));
                }
                Ok(CatalogFunction::Polynomial(terms))
            }
            "exp-linear" => {
                let (a, b) = args
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("exp-linear needs 'a,b', got {args:?}")))?;
                Ok(CatalogFunction::ExpLinear {
                    a: a.parse()?,
                    b: b.parse()?,
                })
            }
            "exp-product" => Ok(CatalogFunction::ExpProduct { a: args.parse()? }),
            other => Err(Error::Parse(format!("unknown function family {other:?}"))),
        }
    }
}

impl Serialize for CatalogFunction {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CatalogFunction {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
