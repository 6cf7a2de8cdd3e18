//! The topologies `𝒯ₙ` and Appert's topology, decided on residue-tail sets.
//!
//! In `𝒯ₙ` the points `1..=n` are the accumulation points, with neighborhood
//! basis `A_{k,l}`; every point above `n` is isolated.

mod cover;
mod metric;

use serde::{Deserialize, Serialize};

use crate::error::{same_modulus, Error, Result};
use crate::scalar::Rational;
use crate::settops::{decompose, RtSet};

pub use cover::{finite_subcover, CoverSpec, Subcover, EXACT_COVER_LIMIT};
pub use metric::{metric_d, point_radius};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TopologyId {
    Tn { n: u64 },
    Appert,
}

impl TopologyId {
    pub fn tn(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("modulus must be at least 1"));
        }
        Ok(TopologyId::Tn { n })
    }
}

/// Openness of `s`.
///
/// For `𝒯ₙ`, a point `k ≤ n` of `s` needs some `A_{k,l} ⊆ s`, i.e. a tail on
/// class `k`. For Appert's topology a set containing `1` is open iff its
/// natural density is `1`, which inside this algebra means every class of
/// `s`'s own modulus carries a tail.
pub fn is_open(top: TopologyId, s: &RtSet) -> Result<bool> {
    match top {
        TopologyId::Tn { n } => {
            same_modulus(n, s.modulus())?;
            Ok(s.limits().iter().all(|k| s.tail(*k).is_some()))
        }
        TopologyId::Appert => Ok(!s.contains(1) || s.tails().len() as u64 == s.modulus()),
    }
}

pub fn is_closed(n: u64, s: &RtSet) -> Result<bool> {
    is_open(TopologyId::tn(n)?, &s.complement())
}

/// Adds every accumulation point whose column meets `s` infinitely often.
pub fn closure(n: u64, s: &RtSet) -> Result<RtSet> {
    same_modulus(n, s.modulus())?;
    let tailed = RtSet::finite(n, s.tails().keys().copied())?;
    s.union(&tailed)
}

/// Drops every accumulation point of `s` whose column is not cofinite in `s`.
pub fn interior(n: u64, s: &RtSet) -> Result<RtSet> {
    same_modulus(n, s.modulus())?;
    let bare = RtSet::finite(
        n,
        s.limits().iter().copied().filter(|k| s.tail(*k).is_none()),
    )?;
    s.difference(&bare)
}

/// Disjoint open neighborhoods of two distinct points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationCert {
    #[serde(rename = "U")]
    pub u: RtSet,
    #[serde(rename = "V")]
    pub v: RtSet,
    pub x: u64,
    pub y: u64,
}

impl SeparationCert {
    /// Replays the certificate: memberships, openness, empty intersection.
    pub fn verify(&self) -> Result<bool> {
        let top = TopologyId::tn(self.u.modulus())?;
        Ok(self.u.member(self.x)?
            && self.v.member(self.y)?
            && is_open(top, &self.u)?
            && is_open(top, &self.v)?
            && self.u.intersect(&self.v)?.is_empty())
    }
}

/// The smallest basic neighborhood of `x` that avoids `y`, or `{x}` when `x`
/// is isolated.
fn neighborhood_avoiding(n: u64, x: u64, y: u64) -> Result<RtSet> {
    if x > n {
        return RtSet::singleton(n, x);
    }
    let (m, k) = decompose(n, y);
    let l = if k == x { (m + 1).max(1) } else { 1 };
    RtSet::basic_open(n, x, l)
}

pub fn separate(n: u64, x: u64, y: u64) -> Result<SeparationCert> {
    if n == 0 || x == 0 || y == 0 {
        return Err(Error::domain("modulus and points must be at least 1"));
    }
    if x == y {
        return Err(Error::SamePoint(x));
    }
    Ok(SeparationCert {
        u: neighborhood_avoiding(n, x, y)?,
        v: neighborhood_avoiding(n, y, x)?,
        x,
        y,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpacePoints {
    pub accumulation: Vec<u64>,
    pub isolated: Vec<u64>,
}

/// Accumulation and isolated points of `𝒯ₙ` inside `1..=window`.
pub fn space_points(n: u64, window: u64) -> Result<SpacePoints> {
    TopologyId::tn(n)?;
    if window < n {
        return Err(Error::WindowTooSmall { window, n });
    }
    Ok(SpacePoints {
        accumulation: (1..=n).collect(),
        isolated: (n + 1..=window).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Distinguished,
    Possible,
}

/// Homeomorphism invariant of `(ℕ, 𝒯ₙ)` versus `(ℕ, 𝒯ₘ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub n_acc: u64,
    pub m_acc: u64,
    #[serde(skip)]
    pub isolated_sample: Vec<u64>,
    pub verdict: Verdict,
}

const ISOLATED_SAMPLE: u64 = 5;

/// A homeomorphism maps accumulation points onto accumulation points, so the
/// counts `n` and `m` must agree. By Banach–Stone the same count separates
/// the spaces of continuous functions up to isometry.
pub fn distinguish(n: u64, m: u64) -> Result<InvariantReport> {
    TopologyId::tn(n)?;
    TopologyId::tn(m)?;
    Ok(InvariantReport {
        n_acc: n,
        m_acc: m,
        isolated_sample: (n + 1..=n.saturating_add(ISOLATED_SAMPLE)).collect(),
        verdict: if n != m {
            Verdict::Distinguished
        } else {
            Verdict::Possible
        },
    })
}

/// `N(bound, S) = |{j ∈ S : j ≤ bound}|`.
pub fn appert_count(s: &RtSet, bound: u64) -> u64 {
    s.count_upto(bound)
}

/// `lim N(b, S)/b`: the share of residue classes carrying a tail.
pub fn appert_density(s: &RtSet) -> Rational {
    Rational::new((s.tails().len() as u64).into(), s.modulus().into())
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::scalar::ratio;
    use crate::settops::RawRtSet;

    fn raw(n: u64, limits: &[u64], tails: &[(u64, u64)], extra: &[u64]) -> RtSet {
        RtSet::canonicalize(RawRtSet {
            n,
            limits: limits.to_vec(),
            tails: tails.iter().copied().collect::<BTreeMap<_, _>>(),
            extra: extra.to_vec(),
        })
        .unwrap()
    }

    #[test]
    fn openness_in_tn() {
        let t3 = TopologyId::tn(3).unwrap();
        assert!(is_open(t3, &RtSet::basic_open(3, 2, 4).unwrap()).unwrap());
        assert!(!is_open(t3, &RtSet::singleton(3, 2).unwrap()).unwrap());
        assert!(is_open(t3, &RtSet::singleton(3, 9).unwrap()).unwrap());
        assert!(is_open(t3, &RtSet::empty(3).unwrap()).unwrap());
        assert!(is_open(t3, &RtSet::full(3).unwrap()).unwrap());
        assert!(is_open(t3, &RtSet::empty(4).unwrap()).is_err());
    }

    #[test]
    fn no_basic_open_fits_inside_a_singleton() {
        // enumeration check: A_{2,l} always has a second member
        for l in 1..50 {
            let a = RtSet::basic_open(3, 2, l).unwrap();
            assert!(a.members_upto(1000).len() > 1);
        }
    }

    #[test]
    fn openness_in_appert() {
        // evens with 1 added: density 1/2
        let s = raw(2, &[1, 2], &[(2, 1)], &[]);
        assert_eq!(appert_density(&s), ratio(1, 2));
        assert!(!is_open(TopologyId::Appert, &s).unwrap());
        assert!(is_open(TopologyId::Appert, &RtSet::full(5).unwrap()).unwrap());
        assert!(is_open(TopologyId::Appert, &RtSet::singleton(4, 2).unwrap()).unwrap());
        assert!(!is_open(TopologyId::Appert, &RtSet::singleton(4, 1).unwrap()).unwrap());
    }

    #[test]
    fn appert_counts() {
        let evens = raw(2, &[2], &[(2, 1)], &[]);
        assert_eq!(appert_count(&evens, 10), 5);
        let all = RtSet::full(4).unwrap();
        assert_eq!(appert_count(&all, 37), 37);
        assert_eq!(appert_density(&all), ratio(1, 1));
        let fin = RtSet::finite(3, [1, 5, 99]).unwrap();
        assert_eq!(appert_density(&fin), ratio(0, 1));
        assert_eq!(appert_count(&fin, 50), 2);
    }

    #[test]
    fn closure_adds_limit_of_tail() {
        let s = raw(3, &[], &[(1, 2)], &[]);
        let c = closure(3, &s).unwrap();
        assert!(c.contains(1));
        assert_eq!(c, RtSet::basic_open(3, 1, 2).unwrap());
    }

    #[test]
    fn finite_sets_are_closed() {
        let s = RtSet::finite(3, [1, 2, 3]).unwrap();
        assert_eq!(closure(3, &s).unwrap(), s);
        assert!(is_closed(3, &s).unwrap());
        let e = RtSet::empty(3).unwrap();
        assert!(interior(3, &closure(3, &e).unwrap()).unwrap().is_empty());
    }

    #[test]
    fn interior_drops_bare_limits() {
        let s = raw(3, &[1, 2], &[(2, 4)], &[7]);
        let i = interior(3, &s).unwrap();
        assert!(!i.contains(1));
        assert!(i.contains(2));
        assert!(i.contains(7));
        let dual = closure(3, &s.complement()).unwrap().complement();
        assert_eq!(i, dual);
    }

    #[test]
    fn separation_examples() {
        let c = separate(3, 1, 4).unwrap();
        assert_eq!(c.u, RtSet::basic_open(3, 1, 2).unwrap());
        assert_eq!(c.v, RtSet::singleton(3, 4).unwrap());
        assert!(c.verify().unwrap());

        let c = separate(3, 1, 2).unwrap();
        assert_eq!(c.u, RtSet::basic_open(3, 1, 1).unwrap());
        assert_eq!(c.v, RtSet::basic_open(3, 2, 1).unwrap());
        assert!(c.verify().unwrap());

        let c = separate(2, 5, 6).unwrap();
        assert_eq!(c.u, RtSet::singleton(2, 5).unwrap());
        assert_eq!(c.v, RtSet::singleton(2, 6).unwrap());

        assert_eq!(separate(3, 4, 4), Err(Error::SamePoint(4)));
    }

    #[test]
    fn separation_json_keys() {
        let c = separate(2, 5, 6).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        assert!(text.starts_with(r#"{"U":{"n":2"#));
        assert!(text.ends_with(r#""x":5,"y":6}"#));
    }

    #[test]
    fn points_of_the_space() {
        let p = space_points(4, 10).unwrap();
        assert_eq!(p.accumulation, vec![1, 2, 3, 4]);
        assert_eq!(p.isolated, (5..=10).collect::<Vec<_>>());
        let p = space_points(1, 1).unwrap();
        assert_eq!(p.accumulation, vec![1]);
        assert!(p.isolated.is_empty());
        assert!(space_points(7, 7).unwrap().isolated.is_empty());
        assert_eq!(
            space_points(5, 3),
            Err(Error::WindowTooSmall { window: 3, n: 5 })
        );
    }

    #[test]
    fn distinguishing() {
        let r = distinguish(2, 3).unwrap();
        assert_eq!(
            (r.n_acc, r.m_acc, r.verdict),
            (2, 3, Verdict::Distinguished)
        );
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"n_acc":2,"m_acc":3,"verdict":"distinguished"}"#
        );
        assert_eq!(distinguish(5, 5).unwrap().verdict, Verdict::Possible);
        assert_eq!(
            distinguish(1, 1_000_000).unwrap().verdict,
            Verdict::Distinguished
        );
        assert_eq!(
            distinguish(4, 9).unwrap().isolated_sample,
            vec![5, 6, 7, 8, 9]
        );
    }
}
