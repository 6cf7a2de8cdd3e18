use serde::{Deserialize, Serialize};

use crate::error::{same_modulus, Error, Result};
use crate::settops::RtSet;

use super::{is_open, TopologyId};

/// Above this many listed opens the subcover is greedy only.
pub const EXACT_COVER_LIMIT: usize = 20;

/// An open cover of `(ℕ, 𝒯ₙ)` given by finitely many residue-tail opens,
/// optionally together with every isolated singleton `{j}`, `j > n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverSpec {
    pub opens: Vec<RtSet>,
    #[serde(default)]
    pub with_isolated_singletons: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subcover {
    /// Indices into `CoverSpec::opens`, ascending.
    pub opens: Vec<usize>,
    /// Isolated singletons used, ascending.
    pub singletons: Vec<u64>,
    /// Whether the size was certified minimal by exhaustive search.
    pub minimal: bool,
}

impl Subcover {
    pub fn size(&self) -> usize {
        self.opens.len() + self.singletons.len()
    }

    /// Union of the chosen cover elements.
    pub fn union(&self, n: u64, cover: &CoverSpec) -> Result<RtSet> {
        let mut acc = RtSet::finite(n, self.singletons.iter().copied())?;
        for &i in &self.opens {
            let open = cover
                .opens
                .get(i)
                .ok_or_else(|| Error::domain(format!("no cover element {i}")))?;
            acc = acc.union(open)?;
        }
        Ok(acc)
    }
}

struct Search<'a> {
    n: u64,
    opens: &'a [RtSet],
    singletons: bool,
}

impl Search<'_> {
    /// `|selection| + |ℕ \ ∪selection|` when that is a valid subcover.
    fn cost(&self, chosen: usize, union: &RtSet) -> Option<usize> {
        let missing = union.complement();
        if self.singletons {
            if (1..=self.n).any(|k| missing.contains(k)) {
                return None;
            }
            missing.len().map(|c| chosen + c as usize)
        } else {
            missing.is_empty().then_some(chosen)
        }
    }

    /// Uncovered accumulation points, then size of the finite part missed.
    fn greedy_key(&self, union: &RtSet) -> (usize, usize) {
        let missing = union.complement();
        let limits = missing.limits().len();
        (limits, limits + missing.extra().len())
    }

    fn greedy(&self) -> Result<(Vec<usize>, RtSet)> {
        let mut chosen = Vec::new();
        let mut union = RtSet::empty(self.n)?;
        loop {
            let current = self.cost(chosen.len(), &union);
            if current.is_some() && !self.singletons {
                break;
            }
            let mut best: Option<(usize, RtSet, (usize, usize))> = None;
            for (i, open) in self.opens.iter().enumerate() {
                if chosen.contains(&i) {
                    continue;
                }
                let next = union.union(open)?;
                let key = self.greedy_key(&next);
                if best.as_ref().is_none_or(|b| key < b.2) {
                    best = Some((i, next, key));
                }
            }
            let Some((i, next, key)) = best else { break };
            match current {
                Some(c) => {
                    // singleton mode: only keep adding while it pays off
                    match self.cost(chosen.len() + 1, &next) {
                        Some(c2) if c2 < c => {}
                        _ => break,
                    }
                }
                None => {
                    if key >= self.greedy_key(&union) {
                        break;
                    }
                }
            }
            chosen.push(i);
            union = next;
        }
        Ok((chosen, union))
    }

    fn exhaustive(
        &self,
        best: &mut (usize, Vec<usize>),
        i: usize,
        chosen: &mut Vec<usize>,
        union: &RtSet,
    ) -> Result<()> {
        if let Some(c) = self.cost(chosen.len(), union) {
            if c < best.0 {
                *best = (c, chosen.clone());
            }
        }
        // any extension adds at least one more element
        if i == self.opens.len() || chosen.len() + 1 >= best.0 {
            return Ok(());
        }
        let with = union.union(&self.opens[i])?;
        chosen.push(i);
        self.exhaustive(best, i + 1, chosen, &with)?;
        chosen.pop();
        self.exhaustive(best, i + 1, chosen, union)
    }
}

/// Extracts a finite subcover and verifies that it covers ℕ exactly.
///
/// Accumulation points can only be covered by listed opens, so a cover that
/// misses one fails with its witness. With `≤ EXACT_COVER_LIMIT` opens the
/// greedy answer is improved to a minimum-size subcover by branch and bound.
pub fn finite_subcover(n: u64, cover: &CoverSpec) -> Result<Subcover> {
    let top = TopologyId::tn(n)?;
    for (i, open) in cover.opens.iter().enumerate() {
        same_modulus(n, open.modulus())?;
        if !is_open(top, open)? {
            return Err(Error::NotOpen { index: i });
        }
    }
    let mut all = RtSet::empty(n)?;
    for open in &cover.opens {
        all = all.union(open)?;
    }
    let missing = all.complement();
    let witness = if cover.with_isolated_singletons {
        (1..=n).find(|&k| missing.contains(k))
    } else {
        missing.first()
    };
    if let Some(witness) = witness {
        return Err(Error::NotACover { witness });
    }

    let search = Search {
        n,
        opens: &cover.opens,
        singletons: cover.with_isolated_singletons,
    };
    let (greedy, greedy_union) = search.greedy()?;
    let mut best = match search.cost(greedy.len(), &greedy_union) {
        Some(c) => (c, greedy),
        // greedy stalled; fall back to everything, which is known to cover
        None => {
            let everything: Vec<usize> = (0..cover.opens.len()).collect();
            let c = search
                .cost(everything.len(), &all)
                .ok_or(Error::NotACover { witness: 1 })?;
            (c, everything)
        }
    };
    let minimal = cover.opens.len() <= EXACT_COVER_LIMIT;
    if minimal {
        search.exhaustive(&mut best, 0, &mut Vec::new(), &RtSet::empty(n)?)?;
    }

    let mut opens = best.1;
    opens.sort_unstable();
    let mut union = RtSet::empty(n)?;
    for &i in &opens {
        union = union.union(&cover.opens[i])?;
    }
    let singletons: Vec<u64> = if cover.with_isolated_singletons {
        let rest = union.complement();
        rest.extra().iter().copied().collect()
    } else {
        Vec::new()
    };
    let out = Subcover {
        opens,
        singletons,
        minimal,
    };
    if out.union(n, cover)? != RtSet::full(n)? {
        return Err(Error::domain("internal: extracted subcover does not cover"));
    }
    Ok(out)
}
