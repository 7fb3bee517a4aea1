//! Scalar values of a bi-function: exact Gaussian rationals or IEEE complex floats.
//!
//! Arithmetic between two exact operands stays exact. Any operation with a
//! float operand promotes to float.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Complex number with rational real and imaginary parts.
pub type GaussRational = Complex<BigRational>;

/// Default relative tolerance for float zero tests.
pub const DEFAULT_TAU: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(GaussRational),
    Float(Complex64),
}

/// Relative tolerance used wherever a float value must be compared with zero.
///
/// A float `z` counts as zero at scale `s` when `|z| <= tau * s`. Exact values
/// are only ever compared exactly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub tau: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { tau: DEFAULT_TAU }
    }
}

impl Tolerance {
    pub fn new(tau: f64) -> Self {
        Tolerance { tau }
    }

    pub fn is_zero(&self, z: &Scalar, scale: f64) -> bool {
        match z {
            Scalar::Exact(c) => c.is_zero(),
            Scalar::Float(c) => c.norm() <= self.tau * scale,
        }
    }

    /// `a == b` exactly when both are exact, otherwise `|a - b| <= tau * scale`.
    pub fn approx_eq(&self, a: &Scalar, b: &Scalar, scale: f64) -> bool {
        match (a, b) {
            (Scalar::Exact(x), Scalar::Exact(y)) => x == y,
            _ => (a.to_complex() - b.to_complex()).norm() <= self.tau * scale,
        }
    }
}

fn rational_to_f64(q: &BigRational) -> f64 {
    // Ratio::to_f64 handles huge numerators and denominators without overflow.
    q.to_f64().unwrap_or_else(|| {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

fn exact_rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let root = |n: &BigInt| -> Option<BigInt> {
        let r = n.sqrt();
        (&r * &r == *n).then_some(r)
    };
    Some(BigRational::new(root(q.numer())?, root(q.denom())?))
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(GaussRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(GaussRational::one())
    }

    pub fn from_i64(v: i64) -> Self {
        Scalar::Exact(Complex::new(BigRational::from_integer(v.into()), BigRational::zero()))
    }

    /// Exact `num/den`; panics when `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar::Exact(Complex::new(
            BigRational::new(num.into(), den.into()),
            BigRational::zero(),
        ))
    }

    pub fn from_rational(re: BigRational) -> Self {
        Scalar::Exact(Complex::new(re, BigRational::zero()))
    }

    pub fn exact(re: BigRational, im: BigRational) -> Self {
        Scalar::Exact(Complex::new(re, im))
    }

    pub fn from_f64(v: f64) -> Self {
        Scalar::Float(Complex64::new(v, 0.0))
    }

    pub fn from_complex(c: Complex64) -> Self {
        Scalar::Float(c)
    }

    /// Float `e^{i theta}`.
    pub fn unit(theta: f64) -> Self {
        Scalar::Float(Complex64::from_polar(1.0, theta))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&GaussRational> {
        match self {
            Scalar::Exact(c) => Some(c),
            Scalar::Float(_) => None,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Exact(c) => Complex64::new(rational_to_f64(&c.re), rational_to_f64(&c.im)),
            Scalar::Float(c) => *c,
        }
    }

    pub fn to_float(&self) -> Scalar {
        Scalar::Float(self.to_complex())
    }

    pub fn abs(&self) -> f64 {
        self.to_complex().norm()
    }

    pub fn re_f64(&self) -> f64 {
        self.to_complex().re
    }

    pub fn im_f64(&self) -> f64 {
        self.to_complex().im
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self, Scalar::Exact(c) if c.is_zero())
    }

    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Exact(c) => Scalar::Exact(c.conj()),
            Scalar::Float(c) => Scalar::Float(c.conj()),
        }
    }

    /// Division that returns `None` for an exact zero divisor. Float division
    /// by zero follows IEEE semantics.
    pub fn checked_div(&self, rhs: &Scalar) -> Option<Scalar> {
        if rhs.is_exact_zero() {
            return None;
        }
        Some(self / rhs)
    }

    pub fn recip(&self) -> Option<Scalar> {
        Scalar::one().checked_div(self)
    }

    /// Principal square root. Stays exact when the root is a Gaussian rational.
    pub fn sqrt(&self) -> Scalar {
        if let Scalar::Exact(c) = self {
            let modulus_sq = &c.re * &c.re + &c.im * &c.im;
            if let Some(modulus) = exact_rational_sqrt(&modulus_sq) {
                let two = BigRational::from_integer(2.into());
                let re = exact_rational_sqrt(&((&modulus + &c.re) / &two));
                let im = exact_rational_sqrt(&((&modulus - &c.re) / &two));
                if let (Some(re), Some(mut im)) = (re, im) {
                    if c.im.is_negative() {
                        im = -im;
                    }
                    return Scalar::Exact(Complex::new(re, im));
                }
            }
        }
        Scalar::Float(self.to_complex().sqrt())
    }

    /// Real part as an exact rational, if the value is exact and real.
    pub fn as_exact_real(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(c) if c.im.is_zero() => Some(&c.re),
            _ => None,
        }
    }

    /// Sign of the real part: `1`, `-1` or `0`.
    pub fn real_sign(&self) -> i8 {
        match self {
            Scalar::Exact(c) => match c.re.numer().sign() {
                Sign::Plus => 1,
                Sign::Minus => -1,
                Sign::NoSign => 0,
            },
            Scalar::Float(c) => {
                if c.re > 0.0 {
                    1
                } else if c.re < 0.0 {
                    -1
                } else {
                    0
                }
            }
        }
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_i64(v)
    }
}

impl From<f64> for Scalar {
    fn from(v: f64) -> Self {
        Scalar::from_f64(v)
    }
}

impl From<Complex64> for Scalar {
    fn from(c: Complex64) -> Self {
        Scalar::Float(c)
    }
}

impl From<GaussRational> for Scalar {
    fn from(c: GaussRational) -> Self {
        Scalar::Exact(c)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    _ => Scalar::Float(self.to_complex() $op rhs.to_complex()),
                }
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self) $op (&rhs)
            }
        }
        impl<'a> $trait<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                (&self) $op rhs
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);
// Exact division by zero panics; use `checked_div` when the divisor may vanish.
binop!(Div, div, /);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(c) => Scalar::Exact(-c.clone()),
            Scalar::Float(c) => Scalar::Float(-c),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// Formats a rational as `p` or `p/q`.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Formats a float so that it parses back as a float to the same bits.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:e}")
    }
}

impl Scalar {
    /// `(re, im)` as strings in the interchange format.
    pub fn to_parts(&self) -> (String, String) {
        match self {
            Scalar::Exact(c) => (format_rational(&c.re), format_rational(&c.im)),
            Scalar::Float(c) => (format_float(c.re), format_float(c.im)),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_parts();
        let im_zero = match self {
            Scalar::Exact(c) => c.im.is_zero(),
            Scalar::Float(c) => c.im == 0.0,
        };
        if im_zero {
            return write!(f, "{re}");
        }
        match im.strip_prefix('-') {
            Some(mag) => write!(f, "{re}-{mag}i"),
            None => write!(f, "{re}+{im}i"),
        }
    }
}

/// A real literal: exact when written as an integer, `p/q` or plain decimal.
#[derive(Clone, Debug, PartialEq)]
pub enum RealLiteral {
    Exact(BigRational),
    Float(f64),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("cannot parse `{0}` as a number")]
pub struct ParseScalarError(pub String);

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let q = BigRational::new(numer, denom);
    Some(if neg { -q } else { q })
}

/// Parses one real literal by the interchange rule: anything containing `e`,
/// `E`, `inf` or `nan` is a float, everything else must be exact.
pub fn parse_real(s: &str) -> Result<RealLiteral, ParseScalarError> {
    let t = s.trim();
    let err = || ParseScalarError(s.to_string());
    let lower = t.to_ascii_lowercase();
    if lower.contains('e') || lower.contains("inf") || lower.contains("nan") {
        return t.parse::<f64>().map(RealLiteral::Float).map_err(|_| err());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(RealLiteral::Exact(BigRational::new(p, q)));
    }
    parse_decimal(t).map(RealLiteral::Exact).ok_or_else(err)
}

impl Scalar {
    /// Builds a scalar from real and imaginary literals. One float part makes
    /// the whole value float.
    pub fn parse_parts(re: &str, im: &str) -> Result<Scalar, ParseScalarError> {
        match (parse_real(re)?, parse_real(im)?) {
            (RealLiteral::Exact(a), RealLiteral::Exact(b)) => Ok(Scalar::exact(a, b)),
            (a, b) => {
                let f = |x: RealLiteral| match x {
                    RealLiteral::Exact(q) => rational_to_f64(&q),
                    RealLiteral::Float(v) => v,
                };
                Ok(Scalar::Float(Complex64::new(f(a), f(b))))
            }
        }
    }
}
