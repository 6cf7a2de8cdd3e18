//! The l₁ side of the pairing `⟨g, y⟩ = Σ g(i)·y_i`.
//!
//! Sequences `y` are finitely supported, so every sum here is finite and, in
//! exact mode, exact. The two constructive pieces are the norming function
//! `g` with `‖g‖∞ = 1` and `⟨g, y⟩ = ‖y‖₁`, and the character test that
//! recognizes point evaluations among normalized `y`.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::{sample_unit_ball, tietze_extend, CFunc};
use crate::scalar::{Mode, RawScalar, Real, Scalar, FLOAT_TOL};

/// A finitely supported element of l₁ with nonzero stored entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawL1Vec", into = "RawL1Vec")]
pub struct L1Vec {
    mode: Mode,
    entries: BTreeMap<u64, Scalar>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawL1Vec {
    #[serde(default)]
    pub(crate) entries: BTreeMap<u64, RawScalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
}

impl RawL1Vec {
    pub fn into_l1(self, fallback: Mode) -> Result<L1Vec> {
        let mode = self.mode.unwrap_or(fallback);
        let entries = self
            .entries
            .into_iter()
            .map(|(i, v)| Ok((i, v.into_scalar(mode)?)))
            .collect::<Result<_>>()?;
        L1Vec::new(mode, entries)
    }
}

impl TryFrom<RawL1Vec> for L1Vec {
    type Error = Error;

    fn try_from(raw: RawL1Vec) -> Result<Self> {
        let implied = raw.entries.values().next().map(RawScalar::implied_mode);
        let mode = raw.mode.or(implied).unwrap_or_default();
        raw.into_l1(mode)
    }
}

impl From<L1Vec> for RawL1Vec {
    fn from(y: L1Vec) -> Self {
        RawL1Vec {
            entries: y
                .entries
                .iter()
                .map(|(&i, v)| (i, RawScalar::from(v)))
                .collect(),
            mode: Some(y.mode),
        }
    }
}

impl L1Vec {
    /// Zero entries are dropped; indices start at 1.
    pub fn new(mode: Mode, entries: BTreeMap<u64, Scalar>) -> Result<Self> {
        if entries.contains_key(&0) {
            return Err(Error::domain("l1 indices start at 1"));
        }
        if entries.values().any(|v| v.mode() != mode) {
            return Err(Error::ModeMismatch);
        }
        let entries = entries.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(L1Vec { mode, entries })
    }

    pub fn empty(mode: Mode) -> Self {
        L1Vec {
            mode,
            entries: BTreeMap::new(),
        }
    }

    /// The unit vector `e_k`.
    pub fn point_mass(k: u64, mode: Mode) -> Result<Self> {
        Self::new(mode, BTreeMap::from([(k, Scalar::one(mode))]))
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn entries(&self) -> &BTreeMap<u64, Scalar> {
        &self.entries
    }

    pub fn get(&self, i: u64) -> Scalar {
        self.entries
            .get(&i)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.mode))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support(&self) -> Vec<u64> {
        self.entries.keys().copied().collect()
    }

    pub fn add(&self, other: &L1Vec) -> Result<L1Vec> {
        if self.mode != other.mode {
            return Err(Error::ModeMismatch);
        }
        let mut out = self.entries.clone();
        for (&i, v) in &other.entries {
            let sum = self.get(i).add(v)?;
            out.insert(i, sum);
        }
        L1Vec::new(self.mode, out)
    }

    pub fn scale(&self, c: &Scalar) -> Result<L1Vec> {
        let entries = self
            .entries
            .iter()
            .map(|(&i, v)| Ok((i, c.mul(v)?)))
            .collect::<Result<_>>()?;
        L1Vec::new(self.mode, entries)
    }
}

/// `‖y‖₁ = Σ |y_i|`; exact whenever every modulus is rational (always for
/// real-rational entries), otherwise a float.
pub fn l1_norm(y: &L1Vec) -> Real {
    y.entries
        .values()
        .fold(Real::zero(y.mode), |acc, v| acc.add(&v.abs()))
}

/// `Σ f(i)·y_i` over the support of `y`, for any bounded tabulation `f`.
pub fn pair_with(y: &L1Vec, f: impl Fn(u64) -> Scalar) -> Result<Scalar> {
    y.entries
        .iter()
        .try_fold(Scalar::zero(y.mode), |acc, (&i, v)| acc.add(&f(i).mul(v)?))
}

pub fn pair(g: &CFunc, y: &L1Vec) -> Result<Scalar> {
    if g.mode() != y.mode {
        return Err(Error::ModeMismatch);
    }
    pair_with(y, |i| g.eval(i).expect("support indices are ≥ 1"))
}

/// `|a| ≥ b` for a scalar `a` and real `b`, exact where possible.
fn modulus_at_least(a: &Scalar, b: &Real) -> bool {
    match (a.norm_sqr(), b) {
        (_, b) if b.cmp_real(&Real::zero(Mode::Exact)).is_le() => true,
        (Real::Exact(sq), Real::Exact(b)) => sq >= b * b,
        (sq, b) => sq.to_f64().sqrt() >= b.to_f64() * (1.0 - FLOAT_TOL),
    }
}

/// A norm-one continuous `g` whose pairing with `y` nearly attains `‖y‖₁`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormingCert {
    pub g: CFunc,
    pub pairing_value: Scalar,
    pub l1_norm: Real,
    pub epsilon: Real,
    /// Largest index kept after trimming a tail of mass `≤ ε`.
    pub truncation: u64,
    pub guarantee_ok: bool,
    pub zero_vector: bool,
}

/// Builds the norming function for `y`.
///
/// The support is cut to an initial segment `{i ≤ N}` whose complement
/// carries mass at most `ε` (with `ε = 0`, the whole support). On the kept
/// points `g(i) = conj(y_i)/|y_i|`, so `g(i)·y_i = |y_i|`; everywhere else
/// the Tietze extension fills in modulus-one values. Then
/// `|⟨g, y⟩| ≥ Σ_{i≤N} |y_i| − ε ≥ ‖y‖₁ − 2ε`.
pub fn norming_certificate(n: u64, y: &L1Vec, epsilon: &Real) -> Result<NormingCert> {
    if n == 0 {
        return Err(Error::domain("modulus must be at least 1"));
    }
    let mode = y.mode;
    let epsilon = match (mode, epsilon) {
        (Mode::Exact, Real::Float(_)) => return Err(Error::ModeMismatch),
        (Mode::Float, e) => Real::Float(e.to_f64()),
        (Mode::Exact, e) => e.clone(),
    };
    if epsilon.cmp_real(&Real::zero(Mode::Exact)).is_lt() {
        return Err(Error::domain("epsilon must be non-negative"));
    }
    let norm = l1_norm(y);
    if y.is_zero() {
        return Ok(NormingCert {
            g: CFunc::unit(n, mode)?,
            pairing_value: Scalar::zero(mode),
            l1_norm: norm,
            epsilon,
            truncation: 0,
            guarantee_ok: true,
            zero_vector: true,
        });
    }

    let mut moduli = Vec::with_capacity(y.entries.len());
    for (&i, v) in &y.entries {
        let m = match mode {
            Mode::Exact => v.abs_exact().ok_or(Error::Irrational { index: i })?,
            Mode::Float => v.abs(),
        };
        moduli.push((i, m));
    }
    let mut dropped = Real::zero(mode);
    let mut keep = moduli.len();
    while keep > 0 {
        let next = dropped.add(&moduli[keep - 1].1);
        if next.cmp_real(&epsilon).is_gt() {
            break;
        }
        dropped = next;
        keep -= 1;
    }
    let truncation = if keep == 0 { 0 } else { moduli[keep - 1].0 };

    let mut phases = BTreeMap::new();
    for (i, m) in &moduli[..keep] {
        let inv = match m {
            Real::Exact(q) => Scalar::real(q.recip()),
            Real::Float(x) => Scalar::float(x.recip(), 0.0),
        };
        phases.insert(*i, y.entries[i].conj().mul(&inv)?);
    }
    let g = tietze_extend(n, &phases, Some(&Scalar::one(mode)))?;
    let pairing_value = pair(&g, y)?;
    let bound = norm.sub(&epsilon.add(&epsilon));
    Ok(NormingCert {
        guarantee_ok: modulus_at_least(&pairing_value, &bound),
        g,
        pairing_value,
        l1_norm: norm,
        epsilon,
        truncation,
        zero_vector: false,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormingReport {
    pub trials: u64,
    pub l1_norm: Real,
    /// Largest `|⟨g, y⟩|` over the sampled unit-ball functions.
    pub sampled_sup: Real,
    pub certificate_value: Real,
    /// Every sample obeyed `|⟨g, y⟩| ≤ ‖y‖₁`.
    pub upper_bound_ok: bool,
    /// The certificate reached `‖y‖₁`.
    pub attained: bool,
    pub certificate_dominates: bool,
}

/// Checks the 1-norming property for one `y`: `trials` sampled `g` in the
/// unit ball of the function space never exceed `‖y‖₁`, and the certificate
/// reaches it. Sample `0` is the unit `e`; sample `t` draws from stream `t`
/// of a ChaCha generator seeded with `seed`, so results do not depend on how
/// the trials are scheduled across threads.
pub fn verify_one_norming(n: u64, y: &L1Vec, trials: u64, seed: u64) -> Result<NormingReport> {
    let mode = y.mode;
    let norm = l1_norm(y);
    let cert = norming_certificate(n, y, &Real::zero(Mode::Exact))?;
    let hot = y.support();
    let samples: Vec<Real> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let g = if t == 0 {
                CFunc::unit(n, mode)?
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(t);
                sample_unit_ball(&mut rng, n, mode, &hot)?
            };
            Ok(pair(&g, y)?.norm_sqr())
        })
        .collect::<Result<_>>()?;
    let norm_sq = norm.mul(&norm);
    let upper_bound_ok = samples.iter().all(|sq| match (sq, &norm_sq) {
        (Real::Exact(a), Real::Exact(b)) => a <= b,
        (a, b) => a.to_f64() <= b.to_f64() * (1.0 + 4.0 * FLOAT_TOL),
    });
    let sampled_sq = samples
        .into_iter()
        .max_by(|a, b| a.cmp_real(b))
        .unwrap_or_else(|| Real::zero(mode));
    let cert_sq = cert.pairing_value.norm_sqr();
    Ok(NormingReport {
        trials,
        sampled_sup: Real::from_squared(&sampled_sq),
        certificate_value: Real::from_squared(&cert_sq),
        attained: cert_sq.approx_eq(&norm_sq),
        certificate_dominates: cert_sq.cmp_real(&sampled_sq).is_ge()
            || cert_sq.approx_eq(&sampled_sq),
        l1_norm: norm,
        upper_bound_ok,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ViolationReason {
    Idempotence,
    Mass,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum CharacterVerdict {
    Evaluation {
        k: u64,
    },
    Violation {
        i: u64,
        value: Scalar,
        reason: ViolationReason,
    },
}

/// Decides whether the normalized functional `φ_y` is multiplicative.
///
/// A character satisfies `φ(e_i) = φ(e_i²) = φ(e_i)²`, since `e_i` is its own
/// square root. So each `φ_y(e_i) = y_i` must be `0` or `1`; together with
/// `‖y‖₁ = 1` this leaves exactly `y = e_k`, evaluation at `k`.
pub fn detect_character(y: &L1Vec) -> Result<CharacterVerdict> {
    let norm = l1_norm(y);
    if !norm.approx_eq(&Real::one(Mode::Exact)) {
        return Err(Error::Normalize {
            norm: norm.to_string(),
        });
    }
    for &i in y.entries.keys() {
        // pairing with the l∞ indicator of i, continuous or not
        let value = pair_with(y, |j| {
            if j == i {
                Scalar::one(y.mode)
            } else {
                Scalar::zero(y.mode)
            }
        })?;
        if !value.approx_eq(&value.mul(&value)?) {
            return Ok(CharacterVerdict::Violation {
                i,
                value,
                reason: ViolationReason::Idempotence,
            });
        }
    }
    let mut ones = y.entries.iter();
    let (&k, _) = ones.next().expect("norm one implies nonempty support");
    if let Some((&i, v)) = ones.next() {
        // idempotent entries of a norm-one vector cannot be two ones
        debug_assert!(false, "two unit entries with l1 norm one");
        return Ok(CharacterVerdict::Violation {
            i,
            value: v.clone(),
            reason: ViolationReason::Mass,
        });
    }
    Ok(CharacterVerdict::Evaluation { k })
}

/// `a(k) = (a^{1/2}(k))²` for a positive `a`: the multiplicativity of the
/// evaluation functional at `k`, checked pointwise.
pub fn evaluation_functional_check(k: u64, a: &CFunc) -> Result<bool> {
    let root = a.sqrt_positive()?;
    let r = root.eval(k)?;
    Ok(a.eval(k)?.approx_eq(&r.mul(&r)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::indicator;
    use crate::scalar::{int, ratio};

    fn exact(entries: &[(u64, i64, i64)]) -> L1Vec {
        L1Vec::new(
            Mode::Exact,
            entries
                .iter()
                .map(|&(i, p, q)| (i, Scalar::real(ratio(p, q))))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn norms() {
        assert_eq!(
            l1_norm(&exact(&[(1, 3, 1), (2, -4, 1)])),
            Real::Exact(int(7))
        );
        assert_eq!(l1_norm(&L1Vec::empty(Mode::Exact)), Real::Exact(int(0)));
        assert_eq!(
            l1_norm(&L1Vec::point_mass(5, Mode::Exact).unwrap()),
            Real::Exact(int(1))
        );
        let z = L1Vec::new(
            Mode::Exact,
            BTreeMap::from([(1, Scalar::gaussian(int(1), int(1)))]),
        )
        .unwrap();
        assert!(!l1_norm(&z).is_exact());
    }

    #[test]
    fn pairings() {
        let y = exact(&[(1, 3, 1), (2, -4, 1), (9, 1, 2)]);
        let e = CFunc::unit(3, Mode::Exact).unwrap();
        assert_eq!(pair(&e, &y).unwrap(), Scalar::real(ratio(-1, 2)));
        let ind = indicator(3, 8, Mode::Exact).unwrap();
        let e8 = L1Vec::point_mass(8, Mode::Exact).unwrap();
        assert_eq!(pair(&ind, &e8).unwrap(), Scalar::one(Mode::Exact));
        assert_eq!(
            pair(&ind, &L1Vec::empty(Mode::Exact)).unwrap(),
            Scalar::zero(Mode::Exact)
        );
        assert_eq!(
            pair(&CFunc::unit(3, Mode::Float).unwrap(), &y),
            Err(Error::ModeMismatch)
        );
    }

    #[test]
    fn certificate_for_signed_entries() {
        let y = exact(&[(1, 3, 1), (2, -4, 1)]);
        let c = norming_certificate(3, &y, &Real::zero(Mode::Exact)).unwrap();
        assert_eq!(
            &c.g.base()[..2],
            &[Scalar::one(Mode::Exact), Scalar::from_int(Mode::Exact, -1)]
        );
        assert_eq!(c.pairing_value, Scalar::from_int(Mode::Exact, 7));
        assert_eq!(c.g.sup_norm().value, Real::Exact(int(1)));
        assert!(c.guarantee_ok);
        assert_eq!(c.truncation, 2);
    }

    #[test]
    fn certificate_for_point_mass() {
        let y = L1Vec::point_mass(6, Mode::Exact).unwrap();
        let c = norming_certificate(2, &y, &Real::zero(Mode::Exact)).unwrap();
        assert_eq!(c.g.eval(6).unwrap(), Scalar::one(Mode::Exact));
        assert_eq!(c.pairing_value, Scalar::one(Mode::Exact));
    }

    #[test]
    fn certificate_for_complex_float_entry() {
        let y = L1Vec::new(Mode::Float, BTreeMap::from([(1, Scalar::float(0.0, 3.0))])).unwrap();
        let c = norming_certificate(3, &y, &Real::Float(0.0)).unwrap();
        assert!(c.g.eval(1).unwrap().approx_eq(&Scalar::float(0.0, -1.0)));
        let v = c.pairing_value.to_c64();
        assert!((v - num_complex::Complex64::new(3.0, 0.0)).norm() <= 1e-12 * 3.0);
    }

    #[test]
    fn certificate_for_pythagorean_entry() {
        let y = L1Vec::new(
            Mode::Exact,
            BTreeMap::from([(4, Scalar::gaussian(int(3), int(4)))]),
        )
        .unwrap();
        let c = norming_certificate(2, &y, &Real::zero(Mode::Exact)).unwrap();
        assert_eq!(c.pairing_value, Scalar::from_int(Mode::Exact, 5));
        let irr = L1Vec::new(
            Mode::Exact,
            BTreeMap::from([(4, Scalar::gaussian(int(1), int(1)))]),
        )
        .unwrap();
        assert_eq!(
            norming_certificate(2, &irr, &Real::zero(Mode::Exact)),
            Err(Error::Irrational { index: 4 })
        );
    }

    #[test]
    fn trimming_respects_two_epsilon() {
        // tail mass 1/10 + 1/20 ≤ 1/5 gets trimmed
        let y = exact(&[(1, 1, 1), (5, -2, 1), (40, 1, 10), (41, -1, 20)]);
        let eps = Real::Exact(ratio(1, 5));
        let c = norming_certificate(3, &y, &eps).unwrap();
        assert_eq!(c.truncation, 5);
        assert!(c.guarantee_ok);
        let Scalar::Exact(z) = &c.pairing_value else {
            unreachable!()
        };
        assert!(z.re >= ratio(31, 10) - ratio(2, 5));
        assert_eq!(c.g.sup_norm().value, Real::Exact(int(1)));
    }

    #[test]
    fn zero_vector_is_flagged() {
        let c =
            norming_certificate(3, &L1Vec::empty(Mode::Exact), &Real::zero(Mode::Exact)).unwrap();
        assert!(c.zero_vector);
        assert_eq!(c.pairing_value, Scalar::zero(Mode::Exact));
    }

    #[test]
    fn one_norming_reports() {
        let y = exact(&[(1, 1, 1), (2, 1, 1)]);
        let r = verify_one_norming(2, &y, 50, 3).unwrap();
        assert_eq!(r.sampled_sup, Real::Exact(int(2)));
        assert_eq!(r.certificate_value, Real::Exact(int(2)));
        assert!(r.upper_bound_ok && r.attained && r.certificate_dominates);
        let r = verify_one_norming(2, &L1Vec::empty(Mode::Exact), 10, 3).unwrap();
        assert_eq!(r.sampled_sup, Real::Exact(int(0)));
        let y = exact(&[(1, 1, 3), (7, -2, 1), (12, 5, 4)]);
        let a = verify_one_norming(3, &y, 64, 11).unwrap();
        let b = verify_one_norming(3, &y, 64, 11).unwrap();
        assert_eq!(a, b);
        assert!(a.upper_bound_ok && a.attained && a.certificate_dominates);
    }

    #[test]
    fn characters() {
        let e3 = L1Vec::point_mass(3, Mode::Exact).unwrap();
        assert_eq!(
            detect_character(&e3).unwrap(),
            CharacterVerdict::Evaluation { k: 3 }
        );
        let half = exact(&[(1, 1, 2), (2, 1, 2)]);
        assert_eq!(
            detect_character(&half).unwrap(),
            CharacterVerdict::Violation {
                i: 1,
                value: Scalar::real(ratio(1, 2)),
                reason: ViolationReason::Idempotence
            }
        );
        let neg = exact(&[(1, -1, 1)]);
        assert!(matches!(
            detect_character(&neg).unwrap(),
            CharacterVerdict::Violation { i: 1, .. }
        ));
        assert!(matches!(
            detect_character(&exact(&[(1, 2, 1)])),
            Err(Error::Normalize { .. })
        ));
        let text = serde_json::to_string(&detect_character(&e3).unwrap()).unwrap();
        assert_eq!(text, r#"{"verdict":"evaluation","k":3}"#);
    }

    #[test]
    fn evaluation_is_multiplicative() {
        let e = CFunc::unit(3, Mode::Exact).unwrap();
        assert!(evaluation_functional_check(2, &e).unwrap());
        let ind = indicator(3, 9, Mode::Exact).unwrap();
        assert!(evaluation_functional_check(9, &ind).unwrap());
        let neg = CFunc::constant(3, Scalar::from_int(Mode::Exact, -1)).unwrap();
        assert_eq!(
            evaluation_functional_check(1, &neg),
            Err(Error::NotPositive { index: 1 })
        );
    }

    #[test]
    fn l1_json() {
        let y: L1Vec = serde_json::from_str(r#"{"entries":{"3":{"re":"1","im":"0"}}}"#).unwrap();
        assert_eq!(y, L1Vec::point_mass(3, Mode::Exact).unwrap());
        assert_eq!(
            serde_json::to_string(&y).unwrap(),
            r#"{"entries":{"3":{"re":"1","im":"0"}},"mode":"exact"}"#
        );
    }
}
