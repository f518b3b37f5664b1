//! Longest arithmetic subsequence `L(sigma)` of an ordering, and the number
//! `N_k` of k-term progressions appearing as subsequences.
//!
//! Two unrelated algorithms compute `L`: an orbit walk over the cycles of
//! `x -> x + r` (group families only) and a dynamic program over index pairs.
//! Each serves as the other's oracle.

use serde::{Deserialize, Serialize};

use crate::counting::{count_closed, for_each_progression, APSpec};
use crate::error::{Error, Result};
use crate::group::{AdditiveSet, Element, IndexArith};

/// Default cap on `|A|` for the quadratic-memory pair DP.
pub const DEFAULT_PAIR_DP_CAP: usize = 5000;
/// Default cap on the number of progressions enumerated by
/// [`count_k_subsequences`].
pub const DEFAULT_PROGRESSION_CAP: u128 = 100_000_000;

/// A sequence listing every member of a set exactly once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ordering {
    set: AdditiveSet,
    seq: Vec<usize>,
}

impl Ordering {
    pub fn new(set: AdditiveSet, seq: &[Element]) -> Result<Self> {
        let seq = set.ordering_indices(seq)?;
        Ok(Ordering { set, seq })
    }

    /// Builds an ordering from canonical indices.
    pub fn from_indices(set: AdditiveSet, seq: Vec<usize>) -> Result<Self> {
        if seq.len() != set.len() {
            return Err(Error::NotAnOrdering(format!(
                "expected {} entries, got {}",
                set.len(),
                seq.len()
            )));
        }
        let mut seen = vec![false; set.len()];
        for &i in &seq {
            if i >= set.len() {
                return Err(Error::IndexOutOfRange {
                    index: i as u64,
                    size: set.cardinality(),
                });
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::NotAnOrdering(format!("index {i} appears twice")));
            }
        }
        Ok(Ordering { set, seq })
    }

    /// Canonical order `0, 1, ..., |A| - 1`.
    pub fn identity(set: AdditiveSet) -> Self {
        let seq = (0..set.len()).collect();
        Ordering { set, seq }
    }

    pub(crate) fn from_indices_unchecked(set: AdditiveSet, seq: Vec<usize>) -> Self {
        debug_assert_eq!(seq.len(), set.len());
        Ordering { set, seq }
    }

    pub fn set(&self) -> &AdditiveSet {
        &self.set
    }

    pub fn indices(&self) -> &[usize] {
        &self.seq
    }

    pub fn elements(&self) -> Vec<Element> {
        self.seq
            .iter()
            .map(|&i| self.set.element_at(i as u64).expect("valid index"))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn reversed(&self) -> Self {
        let mut seq = self.seq.clone();
        seq.reverse();
        Ordering {
            set: self.set.clone(),
            seq,
        }
    }

    /// `positions[x]` is where element index `x` sits in the sequence.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.seq.len()];
        for (p, &x) in self.seq.iter().enumerate() {
            pos[x] = p;
        }
        pos
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub progression: APSpec,
    /// Strictly increasing positions of the terms in the ordering.
    pub positions: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LasResult {
    pub length: usize,
    /// Absent only for a singleton set, where no nontrivial step exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl LasResult {
    /// Re-derives the witness terms and checks they form a progression sitting
    /// at strictly increasing positions.
    pub fn verify(&self, ordering: &Ordering) -> bool {
        let Some(w) = &self.witness else {
            return self.length == ordering.len().min(1);
        };
        let Ok(terms) = w.progression.terms(ordering.set()) else {
            return false;
        };
        let elems = ordering.elements();
        terms.len() == self.length
            && w.positions.len() == self.length
            && w.positions.windows(2).all(|p| p[0] < p[1])
            && w.positions
                .iter()
                .zip(&terms)
                .all(|(&p, t)| p < elems.len() && elems[p] == *t)
    }
}

/// Tie-break key: `(base index, step key)`; smaller wins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Candidate {
    base: usize,
    step: u64,
}

fn build_result(
    ordering: &Ordering,
    length: usize,
    best: Option<(Candidate, Vec<i64>)>,
) -> LasResult {
    let set = ordering.set();
    let witness = best.map(|(cand, step)| {
        let arith_pos = ordering.positions();
        let arith = IndexArith::new(set);
        let positions = (0..length)
            .map(|i| {
                let t = arith
                    .offset_by(cand.base, i as i64, &step)
                    .expect("witness term is a member");
                arith_pos[t]
            })
            .collect();
        Witness {
            progression: APSpec {
                base: set.element_at(cand.base as u64).expect("valid index"),
                step: Element(step),
                length,
            },
            positions,
        }
    });
    LasResult { length, witness }
}

/// `L(sigma)` by walking the orbits of `x -> x + r` for every nonidentity
/// step `r`: on each cycle, a progression subsequence is a run of consecutive
/// orbit terms whose positions increase. Every cycle of length >= 2 has a
/// descent, so runs never exceed the order of `r`.
pub fn longest_ap_orbitwalk(ordering: &Ordering) -> Result<LasResult> {
    let set = ordering.set();
    if !set.is_group() {
        return Err(Error::UnsupportedFamily {
            op: "longest_ap_orbitwalk",
            family: set.family().name(),
        });
    }
    let n = ordering.len();
    if n == 1 {
        return Ok(LasResult {
            length: 1,
            witness: None,
        });
    }
    let pos = ordering.positions();
    let arith = IndexArith::new(set);
    let mut best_len = 0usize;
    let mut best: Option<(Candidate, Vec<i64>)> = None;
    let mut visited = vec![usize::MAX; n];
    let mut cycle = Vec::with_capacity(n);

    for r_idx in 1..n {
        let r = arith.coords(r_idx).to_vec();
        let step_key = r_idx as u64;
        for start in 0..n {
            if visited[start] == r_idx {
                continue;
            }
            cycle.clear();
            let mut x = start;
            loop {
                visited[x] = r_idx;
                cycle.push(x);
                x = arith.offset_by(x, 1, &r).expect("groups are closed");
                if x == start {
                    break;
                }
            }
            let len = cycle.len();
            let descent = (0..len)
                .find(|&i| pos[cycle[i]] > pos[cycle[(i + 1) % len]])
                .expect("a cycle of length >= 2 has a descent");
            let mut run_start = (descent + 1) % len;
            let mut run = 1usize;
            for step in 1..=len {
                let prev = cycle[(descent + step) % len];
                let next = cycle[(descent + step + 1) % len];
                if step < len && pos[prev] < pos[next] {
                    run += 1;
                    continue;
                }
                let cand = Candidate {
                    base: cycle[run_start],
                    step: step_key,
                };
                if run > best_len
                    || (run == best_len && best.as_ref().is_some_and(|(b, _)| cand < *b))
                {
                    best_len = run;
                    best = Some((cand, r.clone()));
                }
                run_start = (descent + step + 1) % len;
                run = 1;
            }
        }
    }
    Ok(build_result(ordering, best_len, best))
}

/// `L(sigma)` by dynamic programming over position pairs `s < t`: the longest
/// progression ending with terms `seq[s], seq[t]` extends the one ending with
/// `seq[p], seq[s]` where `seq[p] = 2 seq[s] - seq[t]` and `p < s`.
///
/// Equivalent to keying `best[t][seq[t] - seq[s]]` by difference; the
/// predecessor lookup replaces the difference table.
pub fn longest_ap_pairdp(ordering: &Ordering) -> Result<LasResult> {
    longest_ap_pairdp_capped(ordering, DEFAULT_PAIR_DP_CAP)
}

pub fn longest_ap_pairdp_capped(ordering: &Ordering, cap: usize) -> Result<LasResult> {
    let n = ordering.len();
    if n > cap || n > u16::MAX as usize {
        return Err(Error::CapExceeded {
            what: "pair-DP set size",
            value: n as u128,
            cap: cap.min(u16::MAX as usize) as u128,
        });
    }
    if n == 1 {
        return Ok(LasResult {
            length: 1,
            witness: None,
        });
    }
    let set = ordering.set();
    let seq = ordering.indices();
    let pos = ordering.positions();
    let arith = IndexArith::new(set);
    let mut dp = vec![0u16; n * n];
    let mut best_len = 2u16;
    for t in 1..n {
        let x = seq[t];
        for s in 0..t {
            let y = seq[s];
            let len = match arith.reflect(y, x) {
                Some(p) if pos[p] < s => dp[pos[p] * n + s] + 1,
                _ => 2,
            };
            dp[s * n + t] = len;
            best_len = best_len.max(len);
        }
    }
    let best_len_usize = best_len as usize;
    let mut best: Option<(Candidate, Vec<i64>)> = None;
    for t in 1..n {
        for s in 0..t {
            if dp[s * n + t] != best_len {
                continue;
            }
            let step = arith.diff(seq[t], seq[s]);
            let base = arith
                .offset_by(seq[t], -(best_len_usize as i64 - 1), &step)
                .expect("progression start is a member");
            let cand = Candidate {
                base,
                step: set.step_key(&Element(step.clone()))?,
            };
            if best.as_ref().is_none_or(|(b, _)| cand < *b) {
                best = Some((cand, step));
            }
        }
    }
    Ok(build_result(ordering, best_len_usize, best))
}

/// Orbit walk for groups, pair DP for interval boxes.
pub fn longest_ap(ordering: &Ordering) -> Result<LasResult> {
    if ordering.set().is_group() {
        longest_ap_orbitwalk(ordering)
    } else {
        longest_ap_pairdp(ordering)
    }
}

/// `N_k`: the number of progression k-orderings of the set whose terms occur
/// at strictly increasing positions.
pub fn count_k_subsequences(ordering: &Ordering, k: usize) -> Result<u128> {
    count_k_subsequences_capped(ordering, k, DEFAULT_PROGRESSION_CAP)
}

pub fn count_k_subsequences_capped(ordering: &Ordering, k: usize, cap: u128) -> Result<u128> {
    let set = ordering.set();
    if k < 2 || k > ordering.len() {
        return Err(Error::InvalidArgument(format!(
            "need 2 <= k <= |A| = {} (got k = {k})",
            ordering.len()
        )));
    }
    let total = count_closed(set, k as u64)?.value();
    if total > cap {
        return Err(Error::CapExceeded {
            what: "progression enumeration",
            value: total,
            cap,
        });
    }
    let pos = ordering.positions();
    let arith = IndexArith::new(set);
    let mut hits = 0u128;
    for_each_progression(set, &arith, k, |terms| {
        if terms.windows(2).all(|w| pos[w[0]] < pos[w[1]]) {
            hits += 1;
        }
    });
    Ok(hits)
}
