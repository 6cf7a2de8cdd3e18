//! Convergence in `𝒯ₙ` for ultimately affine sequences.
//!
//! A sequence converges to an accumulation point `k ≤ n` iff for every `l` it
//! is eventually inside `A_{k,l}`, and to an isolated point `j > n` iff it is
//! eventually equal to `j`. For a tail `α + δ·u` this is decided by `δ`:
//! constant tails converge to `α`, tails with `n | δ` stay in one class and
//! climb to its limit point, all others cycle through several classes.

use std::collections::BTreeMap;

use num_integer::gcd;
use num_traits::{One, Zero};
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Rational;
use crate::settops::residue;
use crate::topology::metric_d;

/// Thresholds `l` reported in serialized certificates.
pub const CERT_LEVELS: [u64; 5] = [1, 2, 5, 10, 100];

/// `s(t) = prefix[t]` for `t < T`, then `α + δ·(t − T)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawUaSeq", into = "RawUaSeq")]
pub struct UaSeq {
    prefix: Vec<u64>,
    alpha: u64,
    delta: u64,
}

/// JSON shape of a [`UaSeq`]; `T`, when present, must equal the prefix length.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawUaSeq {
    #[serde(default)]
    pub prefix: Vec<u64>,
    #[serde(rename = "T", default)]
    pub start: Option<u64>,
    pub alpha: u64,
    pub delta: u64,
}

impl TryFrom<RawUaSeq> for UaSeq {
    type Error = Error;

    fn try_from(raw: RawUaSeq) -> Result<Self> {
        if let Some(t) = raw.start {
            if t != raw.prefix.len() as u64 {
                return Err(Error::domain(format!(
                    "T = {t} but the prefix has {} values",
                    raw.prefix.len()
                )));
            }
        }
        UaSeq::new(raw.prefix, raw.alpha, raw.delta)
    }
}

impl From<UaSeq> for RawUaSeq {
    fn from(s: UaSeq) -> Self {
        RawUaSeq {
            start: Some(s.prefix.len() as u64),
            prefix: s.prefix,
            alpha: s.alpha,
            delta: s.delta,
        }
    }
}

impl UaSeq {
    pub fn new(prefix: Vec<u64>, alpha: u64, delta: u64) -> Result<Self> {
        if prefix.contains(&0) || alpha == 0 {
            return Err(Error::domain("sequence values must be at least 1"));
        }
        Ok(UaSeq {
            prefix,
            alpha,
            delta,
        })
    }

    /// `α + δ·t`.
    pub fn affine(alpha: u64, delta: u64) -> Result<Self> {
        Self::new(Vec::new(), alpha, delta)
    }

    pub fn constant(value: u64) -> Result<Self> {
        Self::affine(value, 0)
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    /// Index `T` where the affine rule takes over.
    pub fn start(&self) -> u64 {
        self.prefix.len() as u64
    }

    pub fn alpha(&self) -> u64 {
        self.alpha
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    pub fn eval(&self, t: u64) -> Result<u64> {
        if let Some(&v) = self.prefix.get(t as usize) {
            return Ok(v);
        }
        let u = t - self.start();
        self.delta
            .checked_mul(u)
            .and_then(|d| d.checked_add(self.alpha))
            .ok_or_else(|| Error::domain(format!("s({t}) overflows u64")))
    }

    /// The subsequence `t ↦ s(sel(t))`, again ultimately affine.
    pub fn compose(&self, sel: &IndexSelector) -> Result<UaSeq> {
        let t0 = self.start();
        let mut prefix = Vec::new();
        let mut j = 0u64;
        while sel.index(j)? < t0 {
            prefix.push(self.eval(sel.index(j)?)?);
            j += 1;
        }
        let alpha = self.eval(sel.index(j)?)?;
        let delta = self
            .delta
            .checked_mul(sel.step)
            .ok_or_else(|| Error::domain("subsequence step overflows u64"))?;
        UaSeq::new(prefix, alpha, delta)
    }
}

/// Strictly increasing index map `j ↦ start + step·j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndexSelector {
    pub start: u64,
    pub step: u64,
}

impl IndexSelector {
    pub const IDENTITY: IndexSelector = IndexSelector { start: 0, step: 1 };

    pub fn new(start: u64, step: u64) -> Result<Self> {
        if step == 0 {
            return Err(Error::domain("selector step must be at least 1"));
        }
        Ok(IndexSelector { start, step })
    }

    pub fn index(&self, j: u64) -> Result<u64> {
        self.step
            .checked_mul(j)
            .and_then(|v| v.checked_add(self.start))
            .ok_or_else(|| Error::domain("selector index overflows u64"))
    }
}

/// Replayable evidence that a sequence converges to `point`.
///
/// `index_for(l)` is an index past which every term lies in `A_{point,l}`
/// (accumulation point) or equals `point` (isolated point).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConvergenceCert {
    pub n: u64,
    pub point: u64,
    start: u64,
    alpha: u64,
    delta: u64,
}

impl ConvergenceCert {
    pub fn index_for(&self, l: u64) -> u64 {
        if self.delta == 0 {
            return self.start;
        }
        // first u with α + δ·u ≥ l·n + k, i.e. quotient ≥ l
        let target = u128::from(l) * u128::from(self.n) + u128::from(self.point);
        let gap = target.saturating_sub(u128::from(self.alpha));
        let u = gap.div_ceil(u128::from(self.delta));
        self.start
            .saturating_add(u64::try_from(u).unwrap_or(u64::MAX))
    }

    pub fn levels(&self) -> BTreeMap<u64, u64> {
        CERT_LEVELS
            .iter()
            .map(|&l| (l, self.index_for(l)))
            .collect()
    }
}

impl Serialize for ConvergenceCert {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(CERT_LEVELS.len()))?;
        for l in CERT_LEVELS {
            map.serialize_entry(&l.to_string(), &self.index_for(l))?;
        }
        map.end()
    }
}

/// A subsequence and the point it converges to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Branch {
    pub selector: IndexSelector,
    pub limit: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum LimitVerdict {
    Converges {
        point: u64,
        certificate: ConvergenceCert,
    },
    Diverges {
        witness: [Branch; 2],
    },
}

impl LimitVerdict {
    pub fn limit(&self) -> Option<u64> {
        match self {
            LimitVerdict::Converges { point, .. } => Some(*point),
            LimitVerdict::Diverges { .. } => None,
        }
    }
}

fn check_modulus(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::domain("modulus must be at least 1"))
    } else {
        Ok(())
    }
}

/// Residues met by the tail, with the first offset `u` reaching each; the
/// tail has period `n / gcd(n, δ)` in residue.
fn residue_cycle(s: &UaSeq, n: u64) -> BTreeMap<u64, u64> {
    let period = n / gcd(n, s.delta);
    let mut seen = BTreeMap::new();
    for u in 0..period {
        let v = u128::from(s.alpha) + u128::from(s.delta) * u128::from(u);
        let r = ((v - 1) % u128::from(n)) as u64 + 1;
        seen.entry(r).or_insert(u);
    }
    seen
}

fn converges(s: &UaSeq, n: u64, point: u64) -> LimitVerdict {
    LimitVerdict::Converges {
        point,
        certificate: ConvergenceCert {
            n,
            point,
            start: s.start(),
            alpha: s.alpha,
            delta: s.delta,
        },
    }
}

pub fn limit_in_topology(s: &UaSeq, n: u64) -> Result<LimitVerdict> {
    check_modulus(n)?;
    if s.delta == 0 {
        return Ok(converges(s, n, s.alpha));
    }
    if s.delta.is_multiple_of(n) {
        return Ok(converges(s, n, residue(n, s.alpha)));
    }
    let cycle = residue_cycle(s, n);
    let period = n / gcd(n, s.delta);
    let mut it = cycle.iter();
    let mut branch = || -> Result<Branch> {
        let (&limit, &u) = it.next().expect("a cycle of length ≥ 2");
        Ok(Branch {
            selector: IndexSelector::new(s.start() + u, period)?,
            limit,
        })
    };
    Ok(LimitVerdict::Diverges {
        witness: [branch()?, branch()?],
    })
}

/// A subsequence with a limit: the whole sequence when it converges,
/// otherwise the branch through the smallest residue it visits.
pub fn convergent_subsequence(s: &UaSeq, n: u64) -> Result<Branch> {
    match limit_in_topology(s, n)? {
        LimitVerdict::Converges { point, .. } => Ok(Branch {
            selector: IndexSelector::IDENTITY,
            limit: point,
        }),
        LimitVerdict::Diverges { witness } => Ok(witness[0]),
    }
}

/// The same verdict reached through distances `d(p, s(t))` instead of
/// residue arithmetic.
///
/// Isolated points of the tail climb strictly when `δ > 0`, so their radii
/// `1/(m+1)` shrink to 0. The tail is then Cauchy iff one full cycle of `n`
/// consecutive terms stays within distance `< 1` of a single accumulation
/// point `p`, in which case `d(p, s(t)) → 0`.
pub fn limit_in_metric(s: &UaSeq, n: u64) -> Result<LimitVerdict> {
    check_modulus(n)?;
    let t0 = s.start();
    let head = s.eval(t0)?;
    if s.delta == 0 {
        debug_assert!(metric_d(n, head, s.eval(t0 + 1)?)?.is_zero());
        return Ok(converges(s, n, head));
    }
    let one = Rational::one();
    let near = |p: u64, v: u64| -> Result<bool> { Ok(metric_d(n, p, v)? < one) };
    let mut anchor = None;
    for p in 1..=n {
        if near(p, head)? {
            anchor = Some(p);
            break;
        }
    }
    let anchor = anchor.expect("every point is within distance < 1 of its class limit");
    let mut classes: BTreeMap<u64, u64> = BTreeMap::new();
    let mut cauchy = true;
    for u in 0..n {
        let v = s.eval(t0 + u)?;
        if !near(anchor, v)? {
            cauchy = false;
            classes.entry(residue(n, v)).or_insert(u);
        } else {
            classes.entry(anchor).or_insert(u);
        }
    }
    if cauchy {
        return Ok(converges(s, n, anchor));
    }
    let mut it = classes.iter();
    let mut branch = || -> Result<Branch> {
        let (&limit, &u) = it.next().expect("two classes at distance ≥ 1");
        Ok(Branch {
            selector: IndexSelector::new(t0 + u, n)?,
            limit,
        })
    };
    Ok(LimitVerdict::Diverges {
        witness: [branch()?, branch()?],
    })
}
