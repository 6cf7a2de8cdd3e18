//! Randomized property bundles behind `predual suite`.

use std::collections::BTreeMap;

use predual::duality::{detect_character, l1_norm, norming_certificate, pair, CharacterVerdict};
use predual::scalar::{ratio, Mode, Real, Scalar};
use predual::sequences::{
    convergent_subsequence, limit_in_metric, limit_in_topology, LimitVerdict,
};
use predual::topology::{closure, distinguish, interior, is_open, metric_d, separate, Verdict};
use predual::{CFunc, L1Vec, RawRtSet, RtSet, TopologyId, UaSeq};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

type Check = fn(&mut ChaCha8Rng) -> predual::Result<bool>;

const PROPERTIES: &[(&str, Check)] = &[
    ("settops/boolean-ops", boolean_ops),
    ("settops/complement-involution", complement_involution),
    ("settops/basis-intersection", basis_intersection),
    ("topology/closure-interior", closure_interior),
    ("topology/separation", separation),
    ("topology/metric-triangle", metric_triangle),
    ("topology/distinguish", distinguish_counts),
    ("sequences/verdicts-agree", verdicts_agree),
    ("sequences/certificate-replay", certificate_replay),
    ("sequences/subsequence", subsequence),
    ("funcspace/c-star", c_star),
    ("funcspace/sqrt-square", sqrt_square),
    ("duality/norming", norming),
    ("duality/pairing-bound", pairing_bound),
    ("duality/characters", characters),
];

#[derive(Debug, Default, Serialize)]
pub struct Tally {
    pub pass: u64,
    pub fail: u64,
    /// Library errors count as failures too.
    pub errors: u64,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub seed: u64,
    pub trials: u64,
    pub properties: BTreeMap<&'static str, Tally>,
    pub pass: u64,
    pub fail: u64,
    pub ok: bool,
}

/// Runs every property `trials` times; property `p` draws from stream `p`
/// of a generator seeded with `seed`.
pub fn run(seed: u64, trials: u64) -> Report {
    let mut properties = BTreeMap::new();
    for (stream, (name, check)) in PROPERTIES.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream as u64);
        let mut tally = Tally::default();
        for _ in 0..trials {
            match check(&mut rng) {
                Ok(true) => tally.pass += 1,
                Ok(false) => tally.fail += 1,
                Err(_) => {
                    tally.fail += 1;
                    tally.errors += 1;
                }
            }
        }
        properties.insert(*name, tally);
    }
    let pass = properties.values().map(|t| t.pass).sum();
    let fail = properties.values().map(|t| t.fail).sum();
    Report {
        seed,
        trials,
        properties,
        pass,
        fail,
        ok: fail == 0,
    }
}

// ---- generators -------------------------------------------------------------

fn raw_set(r: &mut ChaCha8Rng, n: u64) -> RawRtSet {
    RawRtSet {
        n,
        limits: (0..r.random_range(0..=n))
            .map(|_| r.random_range(1..=n))
            .collect(),
        tails: (0..r.random_range(0..=n))
            .map(|_| (r.random_range(1..=n), r.random_range(0..12)))
            .collect(),
        extra: (0..r.random_range(0..12))
            .map(|_| r.random_range(1..=15 * n))
            .collect(),
    }
}

fn set(r: &mut ChaCha8Rng, n: u64) -> predual::Result<RtSet> {
    RtSet::canonicalize(raw_set(r, n))
}

fn seq(r: &mut ChaCha8Rng, n: u64) -> predual::Result<UaSeq> {
    let prefix = (0..r.random_range(0..4))
        .map(|_| r.random_range(1..60))
        .collect();
    let delta = match r.random_range(0..4) {
        0 => 0,
        1 => n * r.random_range(1..5),
        _ => r.random_range(1..25),
    };
    UaSeq::new(prefix, r.random_range(1..60), delta)
}

fn rational(r: &mut ChaCha8Rng, lo: i64) -> predual::Rational {
    let q = r.random_range(1..=9);
    ratio(r.random_range(lo * q..=5 * q), q)
}

fn func(r: &mut ChaCha8Rng, n: u64, positive: bool) -> predual::Result<CFunc> {
    let lo = if positive { 0 } else { -5 };
    let value = |r: &mut ChaCha8Rng| {
        if positive {
            Scalar::real(rational(r, lo))
        } else {
            Scalar::gaussian(rational(r, lo), rational(r, lo))
        }
    };
    let base = (0..n).map(|_| value(r)).collect();
    let exceptions = (0..r.random_range(0..6))
        .map(|_| (r.random_range(n + 1..=n + 60), value(r)))
        .collect();
    CFunc::new(n, base, exceptions)
}

fn l1(r: &mut ChaCha8Rng) -> predual::Result<L1Vec> {
    let entries = (0..r.random_range(1..=20))
        .map(|_| (r.random_range(1..=400), Scalar::real(rational(r, -5))))
        .collect();
    L1Vec::new(Mode::Exact, entries)
}

// ---- settops ----------------------------------------------------------------

fn boolean_ops(r: &mut ChaCha8Rng) -> predual::Result<bool> {
    let n = r.random_range(1..=8);
    let (a, b) = (set(r, n)?, set(r, n)?);
    let (and, or, minus) = (a.intersect(&b)?, a.union(&b)?, a.difference(&b)?);
    Ok((1..=20 * n).all(|j| {
        let (x, y) = (a.contains(j), b.contains(j));
        and.contains(j) == (x && y) && or.contains(j) == (x || y) && minus.contains(j) == (x && !y)
    }))
}

fn complement_involution(r: &mut ChaCha8Rng) -> predual::Result<bool> {
    let n = r.random_range(1..=8);
    let s = set(r, n)?;
    Ok(s.complement().complement() == s && RtSet::canonicalize(s.clone().into())? == s)
}

fn basis_intersection(r: &mut ChaCha8Rng) -> predual::Result<bool> {
    let n = r.random_range(1..=20);
    let (k, k2) = (r.random_range(1..=n), r.random_range(1..=n));
    let (l, h) = (r.random_range(1..=50), r.random_range(1..=50));
    let meet = RtSet::basic_open(n, k, l)?.intersect(&RtSet::basic_open(n, k2, h)?)?;
    Ok(if k == k2 {
        meet == RtSet::basic_open(n, k, l.max(h))?
    } else {
        meet.is_empty()
    })
}

// ---- topology ---------------------------------------------------------------

fn closure_interior(r: &mut ChaCha8Rng) -> predual::Result<bool> {
    let n = r.random_range(1..=8);
    let s = set(r, n)?;
    let (c, i) = (closure(n, &s)?, interior(n, &s)?);
    Ok(s.is_subset(&c)?
        && i.is_subset(&s)?
        && closure(n, &c)? == c
        && is_open(TopologyId::tn(n)?, &i)?
        && i == closure(n, &s.complement())?.complement())
}

fn separation(r: &mut ChaCha8Rng) -> predual::Result<bool> {
    let n = r.random_range(1..=10);
    let x = r.random_range(1..=200);
    let y = loop {
        let y = r.random_range(1..=200);
        if y != x {
            break y;
        }
    };
    let c = separate(n, x, y)?;
    Ok(c.u.contains(x) && c.v.contains(y) && c.u.intersect(&c.v)?.is_empty() && c.verify()?)
}

fn metric_triangle(r: &mut ChaCha8Rng) -> predual::Result<bool> {
    let n = r.random_range(1..=10);
    let [x, y, z] = [0; 3].map(|_| r.random_range(1..=200));
    let d = |a, b| metric_d(n, a, b);
    Ok(d(x, y)? <= d(x, z)? + d(z, y)? && d(x, y)? == d(y, x)?)
}

fn distinguish_counts(r: &mut ChaCha8Rng) -> predual::Result<bool> {
    let (n, m) = (r.random_range(1..=50), r.random_range(1..=50));
    Ok((distinguish(n, m)?.verdict == Verdict::Distinguished) == (n != m))
}

// ---- sequences ----------------------------------------------------------------

fn verdicts_agree(r: &mut ChaCha8Rng) -> predual::Result<bool> {
    let n = r.random_range(1..=10);
    let s = seq(r, n)?;
    Ok(limit_in_topology(&s, n)?.limit() == limit_in_metric(&s, n)?.limit())
}

fn certificate_replay(r: &mut ChaCha8Rng) -> predual::Result<bool> {
    let n = r.random_range(1..=10);
    let s = seq(r, n)?;
    match limit_in_topology(&s, n)? {
        LimitVerdict::Converges { point, certificate } => {
            for l in [1, 2, 5, 10, 100] {
                let open = if point <= n {
                    RtSet::basic_open(n, point, l)?
                } else {
                    RtSet::singleton(n, point)?
                };
                let idx = certificate.index_for(l);
                for t in idx..idx + 100 {
                    if !open.member(s.eval(t)?)? {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        LimitVerdict::Diverges { witness } => {
            let limits: Vec<_> = witness
                .iter()
                .map(|b| Ok(limit_in_topology(&s.compose(&b.selector)?, n)?.limit()))
                .collect::<predual::Result<_>>()?;
            Ok(limits == [Some(witness[0].limit), Some(witness[1].limit)]
                && witness[0].limit != witness[1].limit)
        }
    }
}

fn subsequence(r: &mut ChaCha8Rng) -> predual::Result<bool> {
    let n = r.random_range(1..=10);
    let s = seq(r, n)?;
    let b = convergent_subsequence(&s, n)?;
    Ok(limit_in_topology(&s.compose(&b.selector)?, n)?.limit() == Some(b.limit))
}

// ---- funcspace ----------------------------------------------------------------

fn c_star(r: &mut ChaCha8Rng) -> predual::Result<bool> {
    let n = r.random_range(1..=10);
    let f = func(r, n, false)?;
    Ok(f.conj().mul(&f)?.sup_norm().value == f.sup_norm().squared)
}

fn sqrt_square(r: &mut ChaCha8Rng) -> predual::Result<bool> {
    let n = r.random_range(1..=10);
    let h = func(r, n, true)?;
    Ok(h.mul(&h)?.sqrt_positive()? == h)
}

// ---- duality ------------------------------------------------------------------

fn norming(r: &mut ChaCha8Rng) -> predual::Result<bool> {
    let y = l1(r)?;
    let n = r.random_range(1..=10);
    let cert = norming_certificate(n, &y, &Real::zero(Mode::Exact))?;
    let norm = l1_norm(&y);
    let exact = norm.as_exact().cloned().map(Scalar::real);
    Ok(cert.g.sup_norm().squared == Real::one(Mode::Exact) && Some(pair(&cert.g, &y)?) == exact)
}

fn pairing_bound(r: &mut ChaCha8Rng) -> predual::Result<bool> {
    let n = r.random_range(1..=10);
    let (g, y) = (func(r, n, false)?, l1(r)?);
    let norm = l1_norm(&y);
    let bound = g.sup_norm().squared.mul(&norm.mul(&norm));
    Ok(pair(&g, &y)?.norm_sqr().cmp_real(&bound).is_le())
}

fn characters(r: &mut ChaCha8Rng) -> predual::Result<bool> {
    let k = r.random_range(1..=1_000_000);
    let point = detect_character(&L1Vec::point_mass(k, Mode::Exact)?)?
        == CharacterVerdict::Evaluation { k };
    let y = l1(r)?;
    let inv = match l1_norm(&y).as_exact() {
        Some(q) => Scalar::real(q.recip()),
        None => return Ok(false),
    };
    let y = y.scale(&inv)?;
    let replay = match detect_character(&y)? {
        CharacterVerdict::Evaluation { k } => y == L1Vec::point_mass(k, Mode::Exact)?,
        CharacterVerdict::Violation { i, value, .. } => {
            value == y.get(i) && value != value.mul(&value)?
        }
    };
    Ok(point && replay)
}
