//! Residue-tail sets: subsets of ℕ = {1, 2, …} whose trace on every residue
//! column `{k, n + k, 2n + k, …}` is finite or cofinite.
//!
//! Every `j ≥ 1` is written uniquely as `j = m·n + k` with `k = residue(n, j)`
//! in `1..=n` and `m ≥ 0`. The points `k ≤ n` (the `m = 0` row) are kept in
//! `limits`; a tail `k ↦ l` contributes every `m·n + k` with `m ≥ l`; `extra`
//! holds the remaining finitely many points above `n`.
//!
//! Values are kept in a canonical form, so derived `Eq` is set equality.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{same_modulus, Error, Result};

/// `((j − 1) mod n) + 1`, the class of `j` in `1..=n`.
pub fn residue(n: u64, j: u64) -> u64 {
    debug_assert!(n >= 1 && j >= 1);
    (j - 1) % n + 1
}

/// `(m, k)` with `j = m·n + k` and `1 ≤ k ≤ n`.
pub fn decompose(n: u64, j: u64) -> (u64, u64) {
    debug_assert!(n >= 1 && j >= 1);
    ((j - 1) / n, (j - 1) % n + 1)
}

fn compose(n: u64, m: u64, k: u64) -> u64 {
    m * n + k
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRtSet", into = "RawRtSet")]
pub struct RtSet {
    n: u64,
    limits: BTreeSet<u64>,
    tails: BTreeMap<u64, u64>,
    extra: BTreeSet<u64>,
}

/// Field contents before canonicalization; also the JSON shape.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawRtSet {
    pub n: u64,
    #[serde(default)]
    pub limits: Vec<u64>,
    #[serde(default)]
    pub tails: BTreeMap<u64, u64>,
    #[serde(default)]
    pub extra: Vec<u64>,
}

impl TryFrom<RawRtSet> for RtSet {
    type Error = Error;

    fn try_from(raw: RawRtSet) -> Result<Self> {
        RtSet::canonicalize(raw)
    }
}

impl From<RtSet> for RawRtSet {
    fn from(s: RtSet) -> Self {
        RawRtSet {
            n: s.n,
            limits: s.limits.into_iter().collect(),
            tails: s.tails,
            extra: s.extra.into_iter().collect(),
        }
    }
}

/// The trace of a set on one residue column, rows `m ≥ 1` only.
#[derive(Debug, Clone, Default)]
struct Column {
    tail: Option<u64>,
    rows: BTreeSet<u64>,
}

impl Column {
    fn contains(&self, m: u64) -> bool {
        self.rows.contains(&m) || self.tail.is_some_and(|l| m >= l)
    }
}

/// Applies `op` row-wise to two columns and returns the canonical result.
///
/// Membership is piecewise constant between breakpoints (thresholds and the
/// rows either side of each listed row), so only segment starts are probed.
fn combine_columns(a: &Column, b: &Column, op: impl Fn(bool, bool) -> bool) -> Column {
    if a.rows.is_empty() && b.rows.is_empty() {
        return combine_tails(a.tail, b.tail, op);
    }
    let mut cuts = Vec::with_capacity(3 + 2 * (a.rows.len() + b.rows.len()));
    cuts.push(1u64);
    for col in [a, b] {
        cuts.extend(col.tail);
        for &m in &col.rows {
            cuts.extend([m, m + 1]);
        }
    }
    cuts.sort_unstable();
    cuts.dedup();
    let top = *cuts.last().unwrap();

    let mut out = Column::default();
    if op(a.contains(top), b.contains(top)) {
        // walk back over the contiguous run of member segments ending at top
        let mut start = top;
        for w in cuts.windows(2).rev() {
            if op(a.contains(w[0]), b.contains(w[0])) {
                start = w[0];
            } else {
                break;
            }
        }
        out.tail = Some(start);
    }
    let limit = out.tail.unwrap_or(top);
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if lo >= limit {
            break;
        }
        if op(a.contains(lo), b.contains(lo)) {
            out.rows.extend(lo..hi.min(limit));
        }
    }
    out
}

/// [`combine_columns`] for columns that are pure tails (or empty).
fn combine_tails(a: Option<u64>, b: Option<u64>, op: impl Fn(bool, bool) -> bool) -> Column {
    let at = |m: u64| op(a.is_some_and(|l| m >= l), b.is_some_and(|l| m >= l));
    let (lo, hi) = match (a, b) {
        (Some(x), Some(y)) => (x.min(y), x.max(y)),
        (Some(x), None) | (None, Some(x)) => (x, x),
        (None, None) => (1, 1),
    };
    // membership is constant on [1, lo), [lo, hi) and [hi, ∞)
    let mut out = Column::default();
    if at(hi) {
        out.tail = Some(if at(lo) {
            if at(1) {
                1
            } else {
                lo
            }
        } else {
            hi
        });
        if lo > 1 && at(1) && !at(lo) {
            out.rows.extend(1..lo);
        }
    } else {
        if at(1) {
            out.rows.extend(1..lo);
        }
        if at(lo) {
            out.rows.extend(lo..hi);
        }
    }
    out
}

impl RtSet {
    pub fn empty(n: u64) -> Result<Self> {
        check_modulus(n)?;
        Ok(RtSet {
            n,
            limits: BTreeSet::new(),
            tails: BTreeMap::new(),
            extra: BTreeSet::new(),
        })
    }

    /// All of ℕ.
    pub fn full(n: u64) -> Result<Self> {
        check_modulus(n)?;
        Ok(RtSet {
            n,
            limits: (1..=n).collect(),
            tails: (1..=n).map(|k| (k, 1)).collect(),
            extra: BTreeSet::new(),
        })
    }

    /// `A_{k,l} = {k} ∪ {m·n + k : m ≥ l}`, the basic neighborhoods of `k`.
    pub fn basic_open(n: u64, k: u64, l: u64) -> Result<Self> {
        check_modulus(n)?;
        if k == 0 || k > n {
            return Err(Error::domain(format!("class {k} outside 1..={n}")));
        }
        if l == 0 {
            return Err(Error::domain("threshold l must be at least 1"));
        }
        Ok(RtSet {
            n,
            limits: BTreeSet::from([k]),
            tails: BTreeMap::from([(k, l)]),
            extra: BTreeSet::new(),
        })
    }

    /// A finite set.
    pub fn finite(n: u64, points: impl IntoIterator<Item = u64>) -> Result<Self> {
        Self::canonicalize(RawRtSet {
            n,
            extra: points.into_iter().collect(),
            ..RawRtSet::default()
        })
    }

    pub fn singleton(n: u64, j: u64) -> Result<Self> {
        Self::finite(n, [j])
    }

    /// Builds the unique canonical representative of arbitrary raw fields.
    ///
    /// Points `≤ n` may appear in `extra` and points `> n` in `limits`; both
    /// are moved to their proper place. A tail threshold of `0` also covers
    /// the class point itself. Extra points swallowed by a tail are dropped
    /// and every tail is lowered as far as its listed rows allow.
    pub fn canonicalize(raw: RawRtSet) -> Result<Self> {
        let n = raw.n;
        check_modulus(n)?;
        let mut limits = BTreeSet::new();
        let mut cols: BTreeMap<u64, Column> = BTreeMap::new();
        for j in raw.limits.into_iter().chain(raw.extra) {
            if j == 0 {
                return Err(Error::domain("0 is not a natural number here"));
            }
            let (m, k) = decompose(n, j);
            if m == 0 {
                limits.insert(k);
            } else {
                cols.entry(k).or_default().rows.insert(m);
            }
        }
        for (k, l) in raw.tails {
            if k == 0 || k > n {
                return Err(Error::domain(format!("tail class {k} outside 1..={n}")));
            }
            if l == 0 {
                limits.insert(k);
            }
            let col = cols.entry(k).or_default();
            col.tail = Some(col.tail.map_or(l.max(1), |t| t.min(l.max(1))));
        }
        let empty = Column::default();
        let mut out = RtSet::empty(n)?;
        out.limits = limits;
        for (k, col) in cols {
            out.install(k, combine_columns(&col, &empty, |a, _| a));
        }
        Ok(out)
    }

    fn install(&mut self, k: u64, col: Column) {
        if let Some(l) = col.tail {
            self.tails.insert(k, l);
        }
        if !col.rows.is_empty() {
            let n = self.n;
            self.extra
                .extend(col.rows.into_iter().map(|m| compose(n, m, k)));
        }
    }

    /// Rows of `extra`, grouped by class.
    fn rows(&self) -> BTreeMap<u64, BTreeSet<u64>> {
        if self.extra.is_empty() {
            return BTreeMap::new();
        }
        let mut rows: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::new();
        for &j in &self.extra {
            let (m, k) = decompose(self.n, j);
            rows.entry(k).or_default().insert(m);
        }
        rows
    }

    fn combine(&self, other: &RtSet, op: impl Fn(bool, bool) -> bool + Copy) -> Result<RtSet> {
        same_modulus(self.n, other.n)?;
        let n = self.n;
        let (ra, rb) = (self.rows(), other.rows());
        let mut out = RtSet::empty(n)?;
        let column = |s: &RtSet, rows: &BTreeMap<u64, BTreeSet<u64>>, k: u64| Column {
            tail: s.tails.get(&k).copied(),
            rows: rows.get(&k).cloned().unwrap_or_default(),
        };
        let visit = |k: u64| {
            if op(self.limits.contains(&k), other.limits.contains(&k)) {
                out.limits.insert(k);
            }
            if ra.is_empty() && rb.is_empty() {
                let (ta, tb) = (self.tails.get(&k).copied(), other.tails.get(&k).copied());
                out.install(k, combine_tails(ta, tb, op));
                return;
            }
            let (a, b) = (column(self, &ra, k), column(other, &rb, k));
            out.install(k, combine_columns(&a, &b, op));
        };
        if op(false, false) {
            (1..=n).for_each(visit);
            return Ok(out);
        }
        // classes absent from both sides stay empty
        let touched = self
            .tails
            .keys()
            .chain(other.tails.keys())
            .chain(ra.keys())
            .chain(rb.keys())
            .chain(&self.limits)
            .chain(&other.limits);
        if n <= 64 {
            let mask = touched.fold(0u64, |m, &k| m | 1 << (k - 1));
            (1..=n).filter(|k| mask >> (k - 1) & 1 == 1).for_each(visit);
        } else {
            let mut classes: Vec<u64> = touched.copied().collect();
            classes.sort_unstable();
            classes.dedup();
            classes.into_iter().for_each(visit);
        }
        Ok(out)
    }

    pub fn intersect(&self, other: &RtSet) -> Result<RtSet> {
        self.combine(other, |a, b| a && b)
    }

    pub fn union(&self, other: &RtSet) -> Result<RtSet> {
        self.combine(other, |a, b| a || b)
    }

    pub fn difference(&self, other: &RtSet) -> Result<RtSet> {
        self.combine(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> RtSet {
        self.combine(self, |a, _| !a)
            .expect("a set shares its own modulus")
    }

    pub fn is_subset(&self, other: &RtSet) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    /// Membership of `j ≥ 1`.
    pub fn member(&self, j: u64) -> Result<bool> {
        if j == 0 {
            return Err(Error::domain("0 is not a natural number here"));
        }
        Ok(self.contains(j))
    }

    /// Membership without the `j ≥ 1` check; `0` is never a member.
    pub fn contains(&self, j: u64) -> bool {
        if j == 0 {
            return false;
        }
        let (m, k) = decompose(self.n, j);
        if m == 0 {
            return self.limits.contains(&k);
        }
        self.extra.contains(&j) || self.tails.get(&k).is_some_and(|&l| m >= l)
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn limits(&self) -> &BTreeSet<u64> {
        &self.limits
    }

    pub fn tails(&self) -> &BTreeMap<u64, u64> {
        &self.tails
    }

    pub fn extra(&self) -> &BTreeSet<u64> {
        &self.extra
    }

    pub fn tail(&self, k: u64) -> Option<u64> {
        self.tails.get(&k).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.limits.is_empty() && self.tails.is_empty() && self.extra.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.tails.is_empty()
    }

    /// Number of members, if finite.
    pub fn len(&self) -> Option<u64> {
        self.is_finite()
            .then(|| (self.limits.len() + self.extra.len()) as u64)
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<u64> {
        let limit = self.limits.first().copied();
        let extra = self.extra.first().copied();
        let tail = self
            .tails
            .iter()
            .map(|(&k, &l)| compose(self.n, l, k))
            .min();
        [limit, extra, tail].into_iter().flatten().min()
    }

    /// Members in `1..=window`, ascending.
    pub fn members_upto(&self, window: u64) -> Vec<u64> {
        (1..=window).filter(|&j| self.contains(j)).collect()
    }

    /// `|{j ∈ S : j ≤ bound}|` without enumeration.
    pub fn count_upto(&self, bound: u64) -> u64 {
        let n = self.n;
        let mut count = self.limits.range(..=bound).count() as u64;
        count += self.extra.range(..=bound).count() as u64;
        for (&k, &l) in &self.tails {
            if bound < k {
                continue;
            }
            let top = (bound - k) / n;
            if top >= l {
                count += top - l + 1;
            }
        }
        count
    }
}

fn check_modulus(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::domain("modulus must be at least 1"))
    } else {
        Ok(())
    }
}
