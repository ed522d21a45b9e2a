//! Complex scalars with a configurable mantissa width, backed by MPFR floats.
//!
//! Every binary operation promotes to the larger of the two operand
//! precisions, so mixing a 256-bit and a 512-bit value yields a 512-bit
//! result.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Round;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mantissa width in bits; never below [`Precision::MIN_BITS`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Precision(u32);

impl Precision {
    pub const MIN_BITS: u32 = 64;
    pub const DEFAULT: Precision = Precision(256);

    pub fn new(bits: u32) -> Result<Self> {
        if bits < Self::MIN_BITS {
            return Err(Error::InvalidPrecision {
                bits,
                min: Self::MIN_BITS,
            });
        }
        Ok(Precision(bits))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn doubled(self) -> Precision {
        Precision(self.0.saturating_mul(2))
    }

    /// Number of decimal digits needed to round-trip a value at this precision.
    pub fn decimal_digits(self) -> usize {
        (f64::from(self.0) * std::f64::consts::LOG10_2).ceil() as usize + 2
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self::DEFAULT
    }
}

impl TryFrom<u32> for Precision {
    type Error = Error;
    fn try_from(bits: u32) -> Result<Self> {
        Precision::new(bits)
    }
}

impl From<Precision> for u32 {
    fn from(p: Precision) -> u32 {
        p.0
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bits", self.0)
    }
}

/// Parse a real decimal string at the given precision.
pub fn parse_real(s: &str, prec: Precision) -> Result<Float> {
    let parsed = Float::parse(s.trim()).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
    Ok(Float::with_val(prec.bits(), parsed))
}

/// Decimal rendering that round-trips at the value's own precision.
pub fn real_to_decimal(x: &Float) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let digits = Precision(x.prec().max(Precision::MIN_BITS)).decimal_digits();
    x.to_string_radix(10, Some(digits))
}

#[derive(Clone, PartialEq)]
pub struct PrecisionComplex {
    re: Float,
    im: Float,
}

impl PrecisionComplex {
    pub fn zero(prec: Precision) -> Self {
        Self::from_f64(0.0, 0.0, prec)
    }

    pub fn one(prec: Precision) -> Self {
        Self::from_f64(1.0, 0.0, prec)
    }

    pub fn i(prec: Precision) -> Self {
        Self::from_f64(0.0, 1.0, prec)
    }

    pub fn from_f64(re: f64, im: f64, prec: Precision) -> Self {
        PrecisionComplex {
            re: Float::with_val(prec.bits(), re),
            im: Float::with_val(prec.bits(), im),
        }
    }

    /// Builds from two reals; the lower-precision part is promoted.
    pub fn from_parts(re: Float, im: Float) -> Self {
        let bits = re.prec().max(im.prec());
        PrecisionComplex {
            re: promote(re, bits),
            im: promote(im, bits),
        }
    }

    pub fn from_real(re: Float) -> Self {
        let im = Float::new(re.prec());
        PrecisionComplex { re, im }
    }

    pub fn parse(re: &str, im: &str, prec: Precision) -> Result<Self> {
        Ok(PrecisionComplex {
            re: parse_real(re, prec)?,
            im: parse_real(im, prec)?,
        })
    }

    /// Parses literals such as `2`, `-0.5`, `3i`, `i`, `1+2i` or `0.5-0.25e-3i`.
    pub fn parse_literal(s: &str, prec: Precision) -> Result<Self> {
        let (re, im) = split_complex_literal(s)?;
        Self::parse(&re, &im, prec)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    pub fn into_parts(self) -> (Float, Float) {
        (self.re, self.im)
    }

    /// Rounds or extends to exactly `prec`.
    pub fn with_prec(&self, prec: Precision) -> Self {
        PrecisionComplex {
            re: Float::with_val(prec.bits(), &self.re),
            im: Float::with_val(prec.bits(), &self.im),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        PrecisionComplex {
            re: self.re.clone(),
            im: Float::with_val(self.im.prec(), -&self.im),
        }
    }

    pub fn norm_sqr(&self) -> Float {
        let bits = self.prec();
        let mut n = Float::with_val(bits, self.re.square_ref());
        n += Float::with_val(bits, self.im.square_ref());
        n
    }

    pub fn abs(&self) -> Float {
        let bits = self.prec();
        Float::with_val(bits, self.re.hypot_ref(&self.im))
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    /// Largest of |re|, |im|.
    pub fn sup_norm(&self) -> Float {
        let a = Float::with_val(self.prec(), self.re.abs_ref());
        let b = Float::with_val(self.prec(), self.im.abs_ref());
        if a >= b {
            a
        } else {
            b
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn scale(&self, s: &Float) -> Self {
        let bits = self.prec().max(s.prec());
        PrecisionComplex {
            re: Float::with_val(bits, &self.re * s),
            im: Float::with_val(bits, &self.im * s),
        }
    }

    pub fn recip(&self) -> Self {
        let bits = self.prec();
        let n = self.norm_sqr();
        PrecisionComplex {
            re: Float::with_val(bits, &self.re / &n),
            im: Float::with_val(bits, -Float::with_val(bits, &self.im / &n)),
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Integer power by repeated squaring.
    pub fn powu(&self, mut n: u32) -> Self {
        let mut result = Self::one(Precision(self.prec()));
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result *= &base;
            }
            n >>= 1;
            if n > 0 {
                base = base.square();
            }
        }
        result
    }

    pub fn distance(&self, other: &Self) -> Float {
        (self - other).abs()
    }

    /// Lexicographic comparison on (re, im).
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        self.re
            .partial_cmp(&other.re)
            .unwrap_or(Ordering::Equal)
            .then_with(|| self.im.partial_cmp(&other.im).unwrap_or(Ordering::Equal))
    }

    pub fn to_decimal_pair(&self) -> (String, String) {
        (real_to_decimal(&self.re), real_to_decimal(&self.im))
    }
}

/// Splits a complex literal into real and imaginary decimal texts.
pub(crate) fn split_complex_literal(s: &str) -> Result<(String, String)> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(Error::Parse("empty complex literal".into()));
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok((t, "0".into()));
    };
    // The split is at the last sign that is neither leading nor an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&idx| matches!(bytes[idx], b'+' | b'-') && !matches!(bytes[idx - 1], b'e' | b'E'));
    let (re_part, im_part) = match split {
        Some(idx) => (&body[..idx], &body[idx..]),
        None => ("0", body),
    };
    let im_text = match im_part {
        "" | "+" => "1",
        "-" => "-1",
        other => other.strip_prefix('+').unwrap_or(other),
    };
    Ok((re_part.to_string(), im_text.to_string()))
}

/// Complex exponential.
pub fn cexp(z: &PrecisionComplex) -> PrecisionComplex {
    let bits = z.prec();
    let modulus = Float::with_val(bits, z.re.exp_ref());
    let (sin, cos) = Float::with_val(bits, &z.im).sin_cos(Float::new(bits));
    PrecisionComplex {
        re: Float::with_val(bits, &modulus * &cos),
        im: Float::with_val(bits, &modulus * &sin),
    }
}

fn promote(x: Float, bits: u32) -> Float {
    if x.prec() == bits {
        x
    } else {
        let mut y = x;
        y.set_prec_round(bits, Round::Nearest);
        y
    }
}

impl fmt::Debug for PrecisionComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64_pair();
        write!(f, "({re:e} {:+e}i @{}b)", im, self.prec())
    }
}

impl fmt::Display for PrecisionComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64_pair();
        if im >= 0.0 || im.is_nan() {
            write!(f, "{re}+{im}i")
        } else {
            write!(f, "{re}{im}i")
        }
    }
}

impl<'a> Add<&'a PrecisionComplex> for &'a PrecisionComplex {
    type Output = PrecisionComplex;
    fn add(self, rhs: &PrecisionComplex) -> PrecisionComplex {
        let bits = self.prec().max(rhs.prec());
        PrecisionComplex {
            re: Float::with_val(bits, &self.re + &rhs.re),
            im: Float::with_val(bits, &self.im + &rhs.im),
        }
    }
}

impl<'a> Sub<&'a PrecisionComplex> for &'a PrecisionComplex {
    type Output = PrecisionComplex;
    fn sub(self, rhs: &PrecisionComplex) -> PrecisionComplex {
        let bits = self.prec().max(rhs.prec());
        PrecisionComplex {
            re: Float::with_val(bits, &self.re - &rhs.re),
            im: Float::with_val(bits, &self.im - &rhs.im),
        }
    }
}

impl<'a> Mul<&'a PrecisionComplex> for &'a PrecisionComplex {
    type Output = PrecisionComplex;
    fn mul(self, rhs: &PrecisionComplex) -> PrecisionComplex {
        let bits = self.prec().max(rhs.prec());
        let mut re = Float::with_val(bits, &self.re * &rhs.re);
        re -= Float::with_val(bits, &self.im * &rhs.im);
        let mut im = Float::with_val(bits, &self.re * &rhs.im);
        im += Float::with_val(bits, &self.im * &rhs.re);
        PrecisionComplex { re, im }
    }
}

impl<'a> Div<&'a PrecisionComplex> for &'a PrecisionComplex {
    type Output = PrecisionComplex;
    fn div(self, rhs: &PrecisionComplex) -> PrecisionComplex {
        let bits = self.prec().max(rhs.prec());
        let n = Float::with_val(bits, rhs.norm_sqr());
        // (a + bi)(c - di) / (c^2 + d^2)
        let mut re = Float::with_val(bits, &self.re * &rhs.re);
        re += Float::with_val(bits, &self.im * &rhs.im);
        let mut im = Float::with_val(bits, &self.im * &rhs.re);
        im -= Float::with_val(bits, &self.re * &rhs.im);
        re /= &n;
        im /= &n;
        PrecisionComplex { re, im }
    }
}

impl Neg for &PrecisionComplex {
    type Output = PrecisionComplex;
    fn neg(self) -> PrecisionComplex {
        PrecisionComplex {
            re: Float::with_val(self.re.prec(), -&self.re),
            im: Float::with_val(self.im.prec(), -&self.im),
        }
    }
}

impl Neg for PrecisionComplex {
    type Output = PrecisionComplex;
    fn neg(self) -> PrecisionComplex {
        PrecisionComplex {
            re: -self.re,
            im: -self.im,
        }
    }
}

macro_rules! forward_owned_binop {
    ($($imp:ident $method:ident),*) => {$(
        impl $imp<PrecisionComplex> for PrecisionComplex {
            type Output = PrecisionComplex;
            fn $method(self, rhs: PrecisionComplex) -> PrecisionComplex {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $imp<&'a PrecisionComplex> for PrecisionComplex {
            type Output = PrecisionComplex;
            fn $method(self, rhs: &PrecisionComplex) -> PrecisionComplex {
                (&self).$method(rhs)
            }
        }
        impl<'a> $imp<PrecisionComplex> for &'a PrecisionComplex {
            type Output = PrecisionComplex;
            fn $method(self, rhs: PrecisionComplex) -> PrecisionComplex {
                self.$method(&rhs)
            }
        }
    )*};
}

forward_owned_binop!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&PrecisionComplex> for PrecisionComplex {
    fn add_assign(&mut self, rhs: &PrecisionComplex) {
        let bits = self.prec().max(rhs.prec());
        if self.prec() < bits {
            *self = self.with_prec(Precision(bits));
        }
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl AddAssign<PrecisionComplex> for PrecisionComplex {
    fn add_assign(&mut self, rhs: PrecisionComplex) {
        *self += &rhs;
    }
}

impl SubAssign<&PrecisionComplex> for PrecisionComplex {
    fn sub_assign(&mut self, rhs: &PrecisionComplex) {
        let bits = self.prec().max(rhs.prec());
        if self.prec() < bits {
            *self = self.with_prec(Precision(bits));
        }
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl SubAssign<PrecisionComplex> for PrecisionComplex {
    fn sub_assign(&mut self, rhs: PrecisionComplex) {
        *self -= &rhs;
    }
}

impl MulAssign<&PrecisionComplex> for PrecisionComplex {
    fn mul_assign(&mut self, rhs: &PrecisionComplex) {
        *self = &*self * rhs;
    }
}

impl MulAssign<PrecisionComplex> for PrecisionComplex {
    fn mul_assign(&mut self, rhs: PrecisionComplex) {
        *self = &*self * &rhs;
    }
}

/// `(conj(z) / (1 + |z|^2))^q`, the conjugate kernel raised to the power `q`.
///
/// The base has modulus at most 1/2, so the result never exceeds 1 in modulus.
pub fn phi_kernel(z: &PrecisionComplex, q: u32) -> PrecisionComplex {
    let bits = z.prec();
    let mut denom = z.norm_sqr();
    denom += 1u32;
    let base = z.conj().scale(&Float::with_val(bits, denom.recip_ref()));
    base.powu(q)
}

/// `ln(n!)` as a plain float, for tail bounds.
pub(crate) fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| f64::from(k).ln()).sum()
}
