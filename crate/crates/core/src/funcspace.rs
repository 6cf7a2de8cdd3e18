//! Continuous functions on `(ℕ, 𝒯ₙ)` that are eventually constant on each
//! residue class.
//!
//! Continuity at an accumulation point `k` forces `f(k)` to equal the limit
//! of `f` along class `k`, so one `base` value per class serves as both.
//! Finitely many isolated points may deviate from their class base.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{same_modulus, Error, Result};
use crate::scalar::{ratio, Mode, RawScalar, Real, Scalar};
use crate::settops::{decompose, residue};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCFunc", into = "RawCFunc")]
pub struct CFunc {
    n: u64,
    mode: Mode,
    base: Vec<Scalar>,
    exceptions: BTreeMap<u64, Scalar>,
}

/// JSON shape of a [`CFunc`]. Missing base entries default to zero; a
/// missing `mode` is inferred from the scalars (string parts mean exact).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawCFunc {
    pub n: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default)]
    pub(crate) base: BTreeMap<u64, RawScalar>,
    #[serde(default)]
    pub(crate) exceptions: BTreeMap<u64, RawScalar>,
}

impl RawCFunc {
    fn implied_mode(&self) -> Option<Mode> {
        self.base
            .values()
            .chain(self.exceptions.values())
            .next()
            .map(RawScalar::implied_mode)
    }

    /// Converts using the JSON's own mode, else `fallback`.
    pub fn into_cfunc(self, fallback: Mode) -> Result<CFunc> {
        let mode = self.mode.unwrap_or(fallback);
        let n = self.n;
        if n == 0 {
            return Err(Error::domain("modulus must be at least 1"));
        }
        let mut given = BTreeMap::new();
        for (k, v) in self.base {
            if k == 0 || k > n {
                return Err(Error::domain(format!("base class {k} outside 1..={n}")));
            }
            given.insert(k, v.into_scalar(mode)?);
        }
        let base = (1..=n)
            .map(|k| given.remove(&k).unwrap_or_else(|| Scalar::zero(mode)))
            .collect();
        let exceptions = self
            .exceptions
            .into_iter()
            .map(|(j, v)| Ok((j, v.into_scalar(mode)?)))
            .collect::<Result<_>>()?;
        CFunc::new(n, base, exceptions)
    }
}

impl TryFrom<RawCFunc> for CFunc {
    type Error = Error;

    fn try_from(raw: RawCFunc) -> Result<Self> {
        let mode = raw.mode.or_else(|| raw.implied_mode()).unwrap_or_default();
        raw.into_cfunc(mode)
    }
}

impl From<CFunc> for RawCFunc {
    fn from(f: CFunc) -> Self {
        RawCFunc {
            n: f.n,
            mode: Some(f.mode),
            base: f
                .base
                .iter()
                .enumerate()
                .map(|(i, v)| (i as u64 + 1, RawScalar::from(v)))
                .collect(),
            exceptions: f
                .exceptions
                .iter()
                .map(|(&j, v)| (j, RawScalar::from(v)))
                .collect(),
        }
    }
}

/// Sup norm together with the first point where it is attained.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupNorm {
    pub value: Real,
    pub squared: Real,
    pub attained_at: u64,
}

impl CFunc {
    /// `base[k-1]` is the value at `k` and along class `k`.
    pub fn new(n: u64, base: Vec<Scalar>, exceptions: BTreeMap<u64, Scalar>) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("modulus must be at least 1"));
        }
        if base.len() as u64 != n {
            return Err(Error::domain(format!(
                "expected {n} base values, got {}",
                base.len()
            )));
        }
        let mode = base[0].mode();
        if base
            .iter()
            .chain(exceptions.values())
            .any(|v| v.mode() != mode)
        {
            return Err(Error::ModeMismatch);
        }
        if let Some(&j) = exceptions.keys().find(|&&j| j <= n) {
            return Err(Error::domain(format!(
                "exception at {j} is an accumulation point; use its base value"
            )));
        }
        let mut f = CFunc {
            n,
            mode,
            base,
            exceptions,
        };
        f.canonicalize();
        Ok(f)
    }

    fn canonicalize(&mut self) {
        let (n, base) = (self.n, &self.base);
        self.exceptions
            .retain(|&j, v| *v != base[(residue(n, j) - 1) as usize]);
    }

    pub fn constant(n: u64, c: Scalar) -> Result<Self> {
        let base = vec![c; n as usize];
        Self::new(n, base, BTreeMap::new())
    }

    /// The constant function `e = 1`.
    pub fn unit(n: u64, mode: Mode) -> Result<Self> {
        Self::constant(n, Scalar::one(mode))
    }

    pub fn zero(n: u64, mode: Mode) -> Result<Self> {
        Self::constant(n, Scalar::zero(mode))
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn base(&self) -> &[Scalar] {
        &self.base
    }

    pub fn exceptions(&self) -> &BTreeMap<u64, Scalar> {
        &self.exceptions
    }

    fn at(&self, j: u64) -> &Scalar {
        self.exceptions
            .get(&j)
            .unwrap_or(&self.base[(residue(self.n, j) - 1) as usize])
    }

    pub fn eval(&self, j: u64) -> Result<Scalar> {
        if j == 0 {
            return Err(Error::domain("0 is not a natural number here"));
        }
        Ok(self.at(j).clone())
    }

    /// First `m` with `f(m·n + k) = base[k]` for all larger rows too.
    pub fn settles_at(&self, k: u64) -> u64 {
        self.exceptions
            .keys()
            .map(|&j| decompose(self.n, j))
            .filter(|&(_, c)| c == k)
            .map(|(m, _)| m + 1)
            .max()
            .unwrap_or(1)
    }

    /// Points in index order: the class representatives, then exceptions.
    fn points(&self) -> impl Iterator<Item = (u64, &Scalar)> {
        self.base
            .iter()
            .enumerate()
            .map(|(i, v)| (i as u64 + 1, v))
            .chain(self.exceptions.iter().map(|(&j, v)| (j, v)))
    }

    /// The maximum of `|f|`, attained because `(ℕ, 𝒯ₙ)` is compact; here it
    /// is a maximum over finitely many stored values.
    pub fn sup_norm(&self) -> SupNorm {
        let mut best: Option<(Real, u64)> = None;
        for (j, v) in self.points() {
            let sq = v.norm_sqr();
            let better = match &best {
                None => true,
                Some((b, _)) => match (&sq, b) {
                    (Real::Exact(a), Real::Exact(b)) => a > b,
                    (a, b) => a.to_f64() > b.to_f64() * (1.0 + crate::scalar::FLOAT_TOL),
                },
            };
            if better {
                best = Some((sq, j));
            }
        }
        let (squared, attained_at) = best.expect("n ≥ 1 gives at least one point");
        SupNorm {
            value: Real::from_squared(&squared),
            squared,
            attained_at,
        }
    }

    fn zip(&self, other: &CFunc, op: impl Fn(&Scalar, &Scalar) -> Result<Scalar>) -> Result<CFunc> {
        same_modulus(self.n, other.n)?;
        if self.mode != other.mode {
            return Err(Error::ModeMismatch);
        }
        let base = self
            .base
            .iter()
            .zip(&other.base)
            .map(|(a, b)| op(a, b))
            .collect::<Result<_>>()?;
        let mut exceptions = BTreeMap::new();
        for &j in self.exceptions.keys().chain(other.exceptions.keys()) {
            if let Entry::Vacant(slot) = exceptions.entry(j) {
                slot.insert(op(self.at(j), other.at(j))?);
            }
        }
        CFunc::new(self.n, base, exceptions)
    }

    fn map(&self, op: impl Fn(u64, &Scalar) -> Result<Scalar>) -> Result<CFunc> {
        let base = self
            .base
            .iter()
            .enumerate()
            .map(|(i, v)| op(i as u64 + 1, v))
            .collect::<Result<_>>()?;
        let exceptions = self
            .exceptions
            .iter()
            .map(|(&j, v)| Ok((j, op(j, v)?)))
            .collect::<Result<_>>()?;
        CFunc::new(self.n, base, exceptions)
    }

    pub fn add(&self, other: &CFunc) -> Result<CFunc> {
        self.zip(other, Scalar::add)
    }

    pub fn sub(&self, other: &CFunc) -> Result<CFunc> {
        self.zip(other, Scalar::sub)
    }

    pub fn mul(&self, other: &CFunc) -> Result<CFunc> {
        self.zip(other, Scalar::mul)
    }

    pub fn scalar_mul(&self, c: &Scalar) -> Result<CFunc> {
        self.map(|_, v| c.mul(v))
    }

    pub fn conj(&self) -> CFunc {
        self.map(|_, v| Ok(v.conj()))
            .expect("conjugation preserves mode and support")
    }

    /// Pointwise `|f|`. In exact mode every modulus must be rational.
    pub fn abs(&self) -> Result<CFunc> {
        self.map(|j, v| match v.abs_exact() {
            Some(Real::Exact(q)) => Ok(Scalar::real(q)),
            Some(Real::Float(x)) => Ok(Scalar::float(x, 0.0)),
            None => Err(Error::Irrational { index: j }),
        })
    }

    /// First point where `f` is not a non-negative real, if any.
    pub fn positivity_witness(&self) -> Option<u64> {
        self.points()
            .find(|(_, v)| !v.is_nonneg_real())
            .map(|(j, _)| j)
    }

    pub fn is_positive(&self) -> bool {
        self.positivity_witness().is_none()
    }

    /// Pointwise non-negative square root of a positive function.
    pub fn sqrt_positive(&self) -> Result<CFunc> {
        if let Some(index) = self.positivity_witness() {
            return Err(Error::NotPositive { index });
        }
        self.map(|j, v| v.sqrt_nonneg().ok_or(Error::Irrational { index: j }))
    }

    /// Pointwise comparison, with tolerance in float mode.
    pub fn approx_eq(&self, other: &CFunc) -> bool {
        if self.n != other.n || self.mode != other.mode {
            return false;
        }
        let keys = self.exceptions.keys().chain(other.exceptions.keys());
        self.base
            .iter()
            .zip(&other.base)
            .all(|(a, b)| a.approx_eq(b))
            && keys.into_iter().all(|&j| self.at(j).approx_eq(other.at(j)))
    }

    /// Values at `1..=window`.
    pub fn tabulate(&self, window: u64) -> Vec<Scalar> {
        (1..=window).map(|j| self.at(j).clone()).collect()
    }
}

/// The indicator `e_i` of a single point, when it is continuous.
///
/// Only isolated points qualify: near an accumulation point `i ≤ n` the
/// indicator is `1` at `i` but `0` along its class.
pub fn indicator(n: u64, i: u64, mode: Mode) -> Result<CFunc> {
    if n == 0 || i == 0 {
        return Err(Error::domain("modulus and point must be at least 1"));
    }
    if i <= n {
        return Err(Error::NotContinuous { index: i });
    }
    CFunc::new(
        n,
        vec![Scalar::zero(mode); n as usize],
        BTreeMap::from([(i, Scalar::one(mode))]),
    )
}

/// Extends values prescribed on a finite (hence closed) set `D` to a
/// continuous function without increasing the sup norm.
///
/// Accumulation points in `D` fix their class base; every other class takes
/// `fill`. Points of `D` above `n` become exceptions. `fill` defaults to zero
/// and may not exceed the largest prescribed modulus.
pub fn tietze_extend(
    n: u64,
    values: &BTreeMap<u64, Scalar>,
    fill: Option<&Scalar>,
) -> Result<CFunc> {
    if n == 0 {
        return Err(Error::domain("modulus must be at least 1"));
    }
    let mode = match (values.values().next(), fill) {
        (Some(v), _) => v.mode(),
        (None, Some(f)) => f.mode(),
        (None, None) => return Err(Error::EmptyDomain),
    };
    if values.values().any(|v| v.mode() != mode) || fill.is_some_and(|f| f.mode() != mode) {
        return Err(Error::ModeMismatch);
    }
    if values.contains_key(&0) {
        return Err(Error::domain("0 is not a natural number here"));
    }
    let fill = fill.cloned().unwrap_or_else(|| Scalar::zero(mode));
    if let Some(max) = values
        .values()
        .map(Scalar::norm_sqr)
        .max_by(|a, b| a.cmp_real(b))
    {
        let f = fill.norm_sqr();
        let too_big = match (&f, &max) {
            (Real::Exact(a), Real::Exact(b)) => a > b,
            (a, b) => a.to_f64() > b.to_f64() * (1.0 + crate::scalar::FLOAT_TOL),
        };
        if too_big {
            return Err(Error::FillTooLarge);
        }
    }
    let base = (1..=n)
        .map(|k| values.get(&k).cloned().unwrap_or_else(|| fill.clone()))
        .collect();
    let exceptions = values
        .range(n + 1..)
        .map(|(&j, v)| (j, v.clone()))
        .collect();
    CFunc::new(n, base, exceptions)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassCheck {
    pub class: u64,
    pub consistent: bool,
    pub deviation: f64,
}

/// Screens a finite tabulation `raw[j-1] = f(j)` for continuity: each class
/// value `raw[k-1]` is compared with the class's entries in the last third of
/// the window. Finite data can only ever look consistent, never prove it.
pub fn check_continuity_window(raw: &[Scalar], n: u64, tol: f64) -> Result<Vec<ClassCheck>> {
    let w = raw.len() as u64;
    if n == 0 {
        return Err(Error::domain("modulus must be at least 1"));
    }
    if w < n {
        return Err(Error::WindowTooSmall { window: w, n });
    }
    let from = n.max(w - w / 3) + 1;
    let mut worst = vec![0.0f64; n as usize];
    for j in from..=w {
        let k = residue(n, j);
        let d = (raw[(j - 1) as usize].to_c64() - raw[(k - 1) as usize].to_c64()).norm();
        let slot = &mut worst[(k - 1) as usize];
        *slot = slot.max(d);
    }
    Ok(worst
        .into_iter()
        .enumerate()
        .map(|(i, d)| ClassCheck {
            class: i as u64 + 1,
            consistent: d <= tol,
            deviation: d,
        })
        .collect())
}

/// A random real-rational value in `[-1, 1]` with denominator `≤ den`.
fn unit_interval<R: Rng + ?Sized>(rng: &mut R, den: i64) -> Scalar {
    let q = rng.random_range(1..=den);
    let p = rng.random_range(-q..=q);
    Scalar::real(ratio(p, q))
}

/// A random point of the closed unit disk in the given mode.
pub fn sample_unit_disk<R: Rng + ?Sized>(rng: &mut R, mode: Mode) -> Scalar {
    match mode {
        Mode::Float => loop {
            let (re, im) = (rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0));
            if re * re + im * im <= 1.0 {
                return Scalar::float(re, im);
            }
        },
        Mode::Exact => {
            if rng.random_bool(0.5) {
                return unit_interval(rng, 12);
            }
            loop {
                let (Scalar::Exact(a), Scalar::Exact(b)) =
                    (unit_interval(rng, 12), unit_interval(rng, 12))
                else {
                    unreachable!()
                };
                let z = Scalar::gaussian(a.re, b.re);
                if let Real::Exact(sq) = z.norm_sqr() {
                    if sq <= ratio(1, 1) {
                        return z;
                    }
                }
            }
        }
    }
}

/// A random function in the closed unit ball, with exceptions drawn from
/// `hot` (typically the support of a sequence it will be paired with) plus a
/// few random isolated points.
pub fn sample_unit_ball<R: Rng + ?Sized>(
    rng: &mut R,
    n: u64,
    mode: Mode,
    hot: &[u64],
) -> Result<CFunc> {
    let base = (0..n).map(|_| sample_unit_disk(rng, mode)).collect();
    let mut exceptions = BTreeMap::new();
    for &j in hot {
        if j > n && rng.random_bool(0.7) {
            exceptions.insert(j, sample_unit_disk(rng, mode));
        }
    }
    for _ in 0..rng.random_range(0..4) {
        let j = rng.random_range(n + 1..=n + 200);
        exceptions.insert(j, sample_unit_disk(rng, mode));
    }
    CFunc::new(n, base, exceptions)
}
