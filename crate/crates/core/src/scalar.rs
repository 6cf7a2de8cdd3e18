//! Exact Gaussian-rational and double-precision complex scalars.
//!
//! A computation runs entirely in one [`Mode`]. Mixing an exact scalar with a
//! float scalar is a [`Error::ModeMismatch`]; nothing converts silently.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Relative tolerance for float-mode comparisons.
pub const FLOAT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        })
    }
}

/// A complex number, either exact (`re + i·im` with rational parts) or `f64`.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(Complex<Rational>),
    Float(Complex64),
}

/// A real number in the same two flavors. Norms and distances use this.
#[derive(Debug, Clone, PartialEq)]
pub enum Real {
    Exact(Rational),
    Float(f64),
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Exact square root of a non-negative rational, if it is rational.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let (p, d) = (q.numer(), q.denom());
    let (sp, sd) = (p.sqrt(), d.sqrt());
    if &(&sp * &sp) == p && &(&sd * &sd) == d {
        Some(Rational::new(sp, sd))
    } else {
        None
    }
}

/// Parses `"p/q"`, a signed integer, or a finite decimal such as `"-0.125"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::domain(format!("not a rational: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        let mag: BigInt = digits.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10u32), frac.len());
        let q = Rational::new(mag, scale);
        return Ok(if negative { -q } else { q });
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

pub fn rational_to_string(q: &Rational) -> String {
    // Ratio keeps lowest terms with a positive denominator.
    q.to_string()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= FLOAT_TOL * a.abs().max(b.abs())
}

impl Scalar {
    pub fn zero(mode: Mode) -> Self {
        match mode {
            Mode::Exact => Scalar::Exact(Complex::new(Rational::zero(), Rational::zero())),
            Mode::Float => Scalar::Float(Complex64::new(0.0, 0.0)),
        }
    }

    pub fn one(mode: Mode) -> Self {
        Self::from_int(mode, 1)
    }

    pub fn from_int(mode: Mode, v: i64) -> Self {
        match mode {
            Mode::Exact => Scalar::Exact(Complex::new(int(v), Rational::zero())),
            Mode::Float => Scalar::Float(Complex64::new(v as f64, 0.0)),
        }
    }

    pub fn real(q: Rational) -> Self {
        Scalar::Exact(Complex::new(q, Rational::zero()))
    }

    pub fn gaussian(re: Rational, im: Rational) -> Self {
        Scalar::Exact(Complex::new(re, im))
    }

    pub fn float(re: f64, im: f64) -> Self {
        Scalar::Float(Complex64::new(re, im))
    }

    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Float(_) => Mode::Float,
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        match self {
            Scalar::Exact(z) => Complex64::new(
                z.re.to_f64().unwrap_or(f64::NAN),
                z.im.to_f64().unwrap_or(f64::NAN),
            ),
            Scalar::Float(z) => *z,
        }
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a + b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a + b)),
            _ => Err(Error::ModeMismatch),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a * b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a * b)),
            _ => Err(Error::ModeMismatch),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Exact(a) => Scalar::Exact(-a.clone()),
            Scalar::Float(a) => Scalar::Float(-a),
        }
    }

    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Exact(a) => Scalar::Exact(a.conj()),
            Scalar::Float(a) => Scalar::Float(a.conj()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(a) => a.is_zero(),
            Scalar::Float(a) => a.re == 0.0 && a.im == 0.0,
        }
    }

    /// `|z|²`, always exact in exact mode.
    pub fn norm_sqr(&self) -> Real {
        match self {
            Scalar::Exact(a) => Real::Exact(a.norm_sqr()),
            Scalar::Float(a) => Real::Float(a.norm_sqr()),
        }
    }

    /// `|z|`; exact when the modulus happens to be rational, otherwise `None`
    /// in exact mode.
    pub fn abs_exact(&self) -> Option<Real> {
        match self {
            Scalar::Exact(a) => rational_sqrt(&a.norm_sqr()).map(Real::Exact),
            Scalar::Float(a) => Some(Real::Float(a.norm())),
        }
    }

    /// `|z|`, falling back to a float approximation for irrational moduli.
    pub fn abs(&self) -> Real {
        self.abs_exact()
            .unwrap_or_else(|| Real::Float(self.to_c64().norm()))
    }

    /// Equality: exact in exact mode, relative tolerance in float mode.
    pub fn approx_eq(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (Scalar::Float(a), Scalar::Float(b)) => {
                (a - b).norm() <= FLOAT_TOL * a.norm().max(b.norm())
            }
            _ => false,
        }
    }

    /// Real with non-negative real part (the pointwise positivity of l∞).
    pub fn is_nonneg_real(&self) -> bool {
        match self {
            Scalar::Exact(a) => a.im.is_zero() && !a.re.is_negative(),
            Scalar::Float(a) => a.im.abs() <= FLOAT_TOL * a.re.abs() && a.re >= 0.0,
        }
    }

    /// Non-negative square root of a non-negative real scalar. `None` when
    /// the scalar is not positive or, in exact mode, the root is irrational.
    pub fn sqrt_nonneg(&self) -> Option<Scalar> {
        if !self.is_nonneg_real() {
            return None;
        }
        match self {
            Scalar::Exact(a) => rational_sqrt(&a.re).map(Scalar::real),
            Scalar::Float(a) => Some(Scalar::float(a.re.sqrt(), 0.0)),
        }
    }

    /// Same number, rewritten in `mode`; exact → float is lossy, float →
    /// exact goes through the shortest decimal representation.
    pub fn to_mode(&self, mode: Mode) -> Result<Scalar> {
        match (self, mode) {
            (Scalar::Exact(_), Mode::Exact) | (Scalar::Float(_), Mode::Float) => Ok(self.clone()),
            (Scalar::Exact(_), Mode::Float) => Ok(Scalar::Float(self.to_c64())),
            (Scalar::Float(z), Mode::Exact) => Ok(Scalar::gaussian(
                float_to_rational(z.re)?,
                float_to_rational(z.im)?,
            )),
        }
    }
}

fn float_to_rational(v: f64) -> Result<Rational> {
    if !v.is_finite() {
        return Err(Error::domain(format!("non-finite value {v}")));
    }
    let s = format!("{v}");
    if s.contains('e') {
        Rational::from_float(v).ok_or_else(|| Error::domain(format!("bad float {v}")))
    } else {
        parse_rational(&s)
    }
}

impl Real {
    pub fn zero(mode: Mode) -> Self {
        match mode {
            Mode::Exact => Real::Exact(Rational::zero()),
            Mode::Float => Real::Float(0.0),
        }
    }

    pub fn one(mode: Mode) -> Self {
        match mode {
            Mode::Exact => Real::Exact(Rational::one()),
            Mode::Float => Real::Float(1.0),
        }
    }

    /// `sqrt(sq)`, exact when possible.
    pub fn from_squared(sq: &Real) -> Real {
        match sq {
            Real::Exact(q) => match rational_sqrt(q) {
                Some(r) => Real::Exact(r),
                None => Real::Float(q.to_f64().unwrap_or(f64::NAN).sqrt()),
            },
            Real::Float(v) => Real::Float(v.sqrt()),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Real::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            Real::Float(v) => *v,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Real::Exact(q) => Some(q),
            Real::Float(_) => None,
        }
    }

    /// Sum; exact only if both sides are.
    pub fn add(&self, other: &Real) -> Real {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a + b),
            _ => Real::Float(self.to_f64() + other.to_f64()),
        }
    }

    pub fn sub(&self, other: &Real) -> Real {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a - b),
            _ => Real::Float(self.to_f64() - other.to_f64()),
        }
    }

    pub fn mul(&self, other: &Real) -> Real {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a * b),
            _ => Real::Float(self.to_f64() * other.to_f64()),
        }
    }

    /// Comparison: exact when both are exact, otherwise on `f64`.
    pub fn cmp_real(&self, other: &Real) -> Ordering {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => a.cmp(b),
            _ => self
                .to_f64()
                .partial_cmp(&other.to_f64())
                .unwrap_or(Ordering::Equal),
        }
    }

    /// Equality: exact, or relative tolerance when either side is a float.
    pub fn approx_eq(&self, other: &Real) -> bool {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => a == b,
            _ => close(self.to_f64(), other.to_f64()),
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(q) => write!(f, "{q}"),
            Real::Float(v) => write!(f, "{v}"),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(z) => write!(f, "{}+{}i", z.re, z.im),
            Scalar::Float(z) => write!(f, "{}+{}i", z.re, z.im),
        }
    }
}

// ---- serde ----------------------------------------------------------------
//
// Exact parts travel as "p/q" strings, float parts as JSON numbers.

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub(crate) enum RawNum {
    Int(i64),
    Float(f64),
    Str(String),
}

impl RawNum {
    fn to_rational(&self) -> Result<Rational> {
        match self {
            RawNum::Int(v) => Ok(int(*v)),
            RawNum::Float(v) => float_to_rational(*v),
            RawNum::Str(s) => parse_rational(s),
        }
    }

    fn to_f64(&self) -> Result<f64> {
        match self {
            RawNum::Int(v) => Ok(*v as f64),
            RawNum::Float(v) => Ok(*v),
            RawNum::Str(s) => parse_rational(s)?
                .to_f64()
                .ok_or_else(|| Error::domain(format!("out of range: {s}"))),
        }
    }

    fn is_str(&self) -> bool {
        matches!(self, RawNum::Str(_))
    }
}

/// JSON shape of a [`Scalar`] before a mode is chosen: `{"re": …, "im": …}`
/// with parts given as integers, floats or `"p/q"` strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawScalar {
    re: RawNum,
    #[serde(default = "raw_zero")]
    im: RawNum,
}

fn raw_zero() -> RawNum {
    RawNum::Int(0)
}

impl RawScalar {
    /// The mode implied by the JSON itself: any string part means exact.
    pub fn implied_mode(&self) -> Mode {
        if self.re.is_str() || self.im.is_str() {
            Mode::Exact
        } else {
            Mode::Float
        }
    }

    pub fn into_scalar(self, mode: Mode) -> Result<Scalar> {
        match mode {
            Mode::Exact => Ok(Scalar::gaussian(
                self.re.to_rational()?,
                self.im.to_rational()?,
            )),
            Mode::Float => Ok(Scalar::float(self.re.to_f64()?, self.im.to_f64()?)),
        }
    }
}

impl From<&Scalar> for RawScalar {
    fn from(s: &Scalar) -> Self {
        match s {
            Scalar::Exact(z) => RawScalar {
                re: RawNum::Str(rational_to_string(&z.re)),
                im: RawNum::Str(rational_to_string(&z.im)),
            },
            Scalar::Float(z) => RawScalar {
                re: RawNum::Float(z.re),
                im: RawNum::Float(z.im),
            },
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawScalar::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawScalar::deserialize(d)?;
        let mode = raw.implied_mode();
        raw.into_scalar(mode).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Real {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Real::Exact(q) => s.serialize_str(&rational_to_string(q)),
            Real::Float(v) => s.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match RawNum::deserialize(d)? {
            RawNum::Str(s) => parse_rational(&s)
                .map(Real::Exact)
                .map_err(serde::de::Error::custom),
            RawNum::Int(v) => Ok(Real::Exact(int(v))),
            RawNum::Float(v) => Ok(Real::Float(v)),
        }
    }
}
