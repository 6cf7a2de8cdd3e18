//! Random instance generators shared by the property and acceptance suites.
#![allow(dead_code)]

use std::collections::BTreeMap;

use predual::funcspace::CFunc;
use predual::scalar::{ratio, Mode, Scalar};
use predual::{L1Vec, RawRtSet, RtSet, UaSeq};
use rand::Rng;

pub fn rtset<R: Rng>(rng: &mut R, n: u64) -> RtSet {
    let limits = (1..=n).filter(|_| rng.random_bool(0.5)).collect();
    let mut tails = BTreeMap::new();
    for k in 1..=n {
        if rng.random_bool(0.5) {
            tails.insert(k, rng.random_range(1..8));
        }
    }
    let extra = (0..rng.random_range(0..8))
        .map(|_| rng.random_range(n + 1..=12 * n + 12))
        .collect();
    RtSet::canonicalize(RawRtSet {
        n,
        limits,
        tails,
        extra,
    })
    .unwrap()
}

/// A random open set of `𝒯ₙ`: every limit point present gets a tail.
pub fn open_set<R: Rng>(rng: &mut R, n: u64) -> RtSet {
    let s = rtset(rng, n);
    let bare: Vec<u64> = s
        .limits()
        .iter()
        .copied()
        .filter(|k| s.tail(*k).is_none())
        .collect();
    s.difference(&RtSet::finite(n, bare).unwrap()).unwrap()
}

pub fn uaseq<R: Rng>(rng: &mut R, n: u64) -> UaSeq {
    let prefix = (0..rng.random_range(0..4))
        .map(|_| rng.random_range(1..60))
        .collect();
    let alpha = rng.random_range(1..60);
    let delta = match rng.random_range(0..4) {
        0 => 0,
        1 => n * rng.random_range(1..5),
        _ => rng.random_range(1..25),
    };
    UaSeq::new(prefix, alpha, delta).unwrap()
}

pub fn small_rational<R: Rng>(rng: &mut R, span: i64, den: i64) -> predual::Rational {
    let q = rng.random_range(1..=den);
    ratio(rng.random_range(-span * q..=span * q), q)
}

pub fn exact_real<R: Rng>(rng: &mut R) -> Scalar {
    Scalar::real(small_rational(rng, 5, 9))
}

pub fn exact_complex<R: Rng>(rng: &mut R) -> Scalar {
    Scalar::gaussian(small_rational(rng, 5, 9), small_rational(rng, 5, 9))
}

/// A random exact function whose values come from `value`.
pub fn cfunc_with<R: Rng>(rng: &mut R, n: u64, mut value: impl FnMut(&mut R) -> Scalar) -> CFunc {
    let base = (0..n).map(|_| value(rng)).collect();
    let exceptions = (0..rng.random_range(0..6))
        .map(|_| (rng.random_range(n + 1..=n + 60), value(rng)))
        .collect();
    CFunc::new(n, base, exceptions).unwrap()
}

pub fn positive_real<R: Rng>(rng: &mut R) -> Scalar {
    let q = rng.random_range(1..=9);
    Scalar::real(ratio(rng.random_range(0..=5 * q), q))
}

/// A real-rational l₁ vector with support size in `1..=max_support`.
pub fn l1_real<R: Rng>(rng: &mut R, max_support: usize) -> L1Vec {
    let size = rng.random_range(1..=max_support);
    let mut entries = BTreeMap::new();
    while entries.len() < size {
        let v = small_rational(rng, 6, 12);
        if v != ratio(0, 1) {
            entries.insert(rng.random_range(1..=400), Scalar::real(v));
        }
    }
    L1Vec::new(Mode::Exact, entries).unwrap()
}

pub fn l1_complex_float<R: Rng>(rng: &mut R, max_support: usize) -> L1Vec {
    let size = rng.random_range(1..=max_support);
    let entries = (0..size)
        .map(|_| {
            (
                rng.random_range(1..=400),
                Scalar::float(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)),
            )
        })
        .collect();
    L1Vec::new(Mode::Float, entries).unwrap()
}
