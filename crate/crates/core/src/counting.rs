//! Counts of arithmetic-progression k-orderings.
//!
//! Closed forms exist for interval boxes and for every finite abelian group;
//! `brute_force_count` enumerates `(base, step)` pairs directly and is the
//! ground truth all of them are tested against.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, gcd, totient};
use crate::error::{Error, Result};
use crate::group::{AdditiveSet, Element, Family, IndexArith};

/// A progression `(a, a + r, ..., a + (k - 1) r)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct APSpec {
    pub base: Element,
    pub step: Element,
    pub length: usize,
}

impl APSpec {
    /// The generated terms, validated: nonzero step, every term a member, all
    /// terms distinct.
    pub fn terms(&self, set: &AdditiveSet) -> Result<Vec<Element>> {
        if self.step == set.identity() {
            return Err(Error::InvalidArgument(
                "progression step is the identity".into(),
            ));
        }
        let mut terms = Vec::with_capacity(self.length);
        let mut x = self.base.clone();
        for i in 0..self.length {
            if i > 0 {
                x = set.add(&x, &self.step)?;
            }
            if !set.contains(&x) {
                return Err(Error::NotAMember(x.to_string()));
            }
            if terms.contains(&x) {
                return Err(Error::InvalidArgument(format!(
                    "progression repeats the term {x}"
                )));
            }
            terms.push(x.clone());
        }
        Ok(terms)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    ClosedForm,
    BruteForce,
    BoundsOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountResult {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<u128>,
    pub lower: u128,
    pub upper: u128,
    pub method: Method,
}

impl CountResult {
    pub fn exact(value: u128, method: Method) -> Self {
        CountResult {
            exact: Some(value),
            lower: value,
            upper: value,
            method,
        }
    }

    pub fn bounds(lower: u128, upper: u128) -> Self {
        CountResult {
            exact: None,
            lower,
            upper,
            method: Method::BoundsOnly,
        }
    }

    /// The exact value; panics on a bounds-only result.
    pub fn value(&self) -> u128 {
        self.exact.expect("count result carries only bounds")
    }

    pub fn brackets(&self, value: u128) -> bool {
        self.lower <= value && value <= self.upper
    }
}

fn check_interval_k(n: u64, k: u64) -> Result<()> {
    if k < 2 || k > n {
        return Err(Error::InvalidArgument(format!(
            "need 2 <= k <= n (got n = {n}, k = {k})"
        )));
    }
    Ok(())
}

/// `P_nk`, the number of k-orderings of `[1, n]` forming a nontrivial
/// progression: `2 n m - (k - 1)(m^2 + m)` with `m = floor((n - 1)/(k - 1))`.
///
/// This is the value of the sum over steps `sum_{r=1}^{m} 2 (n - (k - 1) r)`;
/// the variant with `m^2 - m` overcounts (22 instead of 10 at `n = 7, k = 4`).
pub fn count_interval(n: u64, k: u64) -> Result<CountResult> {
    check_interval_k(n, k)?;
    Ok(CountResult::exact(p_nk(n, k)?, Method::ClosedForm))
}

fn p_nk(n: u64, k: u64) -> Result<u128> {
    let (n, k) = (n as u128, k as u128);
    let m = (n - 1) / (k - 1);
    let plus = 2 * n * m;
    let minus = (k - 1)
        .checked_mul(m * m + m)
        .ok_or(Error::Overflow("P_nk"))?;
    plus.checked_sub(minus)
        .ok_or_else(|| Error::Internal(format!("negative P_nk at n = {n}, k = {k}")))
}

/// Bounds on `P_nk` from the fractional-part identity:
/// `X - k + 1 <= P_nk <= X + k - 3` with `X = (n - k + 2)(n - 1)/(k - 1)`,
/// rounded outward. At `k = 2` the fractional part vanishes and both bounds
/// equal `n (n - 1)`.
pub fn bounds_interval(n: u64, k: u64) -> Result<CountResult> {
    check_interval_k(n, k)?;
    let (n, k) = (n as i128, k as i128);
    let num = (n - k + 2) * (n - 1);
    let den = k - 1;
    if k == 2 {
        let x = num as u128;
        return Ok(CountResult::bounds(x, x));
    }
    // floor((num - (k-1) den) / den) and ceil((num + (k-3) den) / den)
    let lower = (num - (k - 1) * den).div_euclid(den);
    let hi_num = num + (k - 3) * den;
    let upper = (hi_num + den - 1).div_euclid(den);
    Ok(CountResult::bounds(
        lower.max(0) as u128,
        upper.max(0) as u128,
    ))
}

/// `P_nkd = (P_nk + n)^d - n^d`, the count for the box `[1, n]^d`.
pub fn count_lattice(n: u64, k: u64, d: u32) -> Result<CountResult> {
    check_interval_k(n, k)?;
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be >= 1".into()));
    }
    let with_trivial = p_nk(n, k)? + n as u128;
    let all = with_trivial
        .checked_pow(d)
        .ok_or(Error::Overflow("P_nkd"))?;
    let trivial = (n as u128).checked_pow(d).ok_or(Error::Overflow("n^d"))?;
    Ok(CountResult::exact(all - trivial, Method::ClosedForm))
}

/// `Q_nk = n (n - sum_{j < k, j | n} phi(j))`, with `Q_n1 = n` and `Q_nk = 0`
/// for `k > n`.
pub fn count_cyclic(n: u64, k: u64) -> Result<CountResult> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidArgument("need n >= 1 and k >= 1".into()));
    }
    let value = if k == 1 {
        n as u128
    } else if k > n {
        0
    } else {
        let small: u64 = divisors(n)
            .into_iter()
            .take_while(|&j| j < k)
            .map(|j| totient(j).expect("j >= 1"))
            .sum();
        n as u128 * (n - small) as u128
    };
    Ok(CountResult::exact(value, Method::ClosedForm))
}

fn require_group(set: &AdditiveSet, op: &'static str) -> Result<()> {
    if !set.is_group() {
        return Err(Error::UnsupportedFamily {
            op,
            family: set.family().name(),
        });
    }
    Ok(())
}

/// Number of elements of each order in a product of cyclic groups, keyed by
/// the divisors of the exponent. `#{x : m x = 0} = prod gcd(m, n_i)`, and
/// exact-order counts follow by subtracting proper divisors.
pub fn order_census(factors: &[u64]) -> Vec<(u64, u128)> {
    let exponent = factors.iter().copied().fold(1, crate::arith::lcm);
    let divs = divisors(exponent);
    let mut census: Vec<(u64, u128)> = Vec::with_capacity(divs.len());
    for &m in &divs {
        let killed: u128 = factors.iter().map(|&f| gcd(m, f) as u128).product();
        let below: u128 = census
            .iter()
            .filter(|(d, _)| m % d == 0)
            .map(|(_, c)| c)
            .sum();
        census.push((m, killed - below));
    }
    census
}

/// Exact count for a finite abelian group: `|Z| * #{r : order(r) >= k}`.
///
/// A sequence `(a, a + r, ..., a + (k - 1) r)` repeats a term exactly when the
/// order of `r` is below `k`.
pub fn count_abelian_exact(set: &AdditiveSet, k: u64) -> Result<CountResult> {
    require_group(set, "count_abelian_exact")?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be >= 1".into()));
    }
    let size = set.cardinality() as u128;
    if k == 1 {
        return Ok(CountResult::exact(size, Method::ClosedForm));
    }
    let steps: u128 = if set.cardinality() <= 100_000 {
        count_steps_by_iteration(set, k)
    } else {
        order_census(set.factors())
            .into_iter()
            .filter(|&(m, _)| m >= k)
            .map(|(_, c)| c)
            .sum()
    };
    let value = size.checked_mul(steps).ok_or(Error::Overflow("Q_k(Z)"))?;
    Ok(CountResult::exact(value, Method::ClosedForm))
}

fn count_steps_by_iteration(set: &AdditiveSet, k: u64) -> u128 {
    set.elements()
        .filter(|r| set.element_order(r).expect("member of a group") >= k)
        .count() as u128
}

/// Bounds for a general finite abelian group with invariant factors
/// `n_1 | ... | n_d`, where `j` is the first index with `k <= n_j`:
/// lower `(prod_{i<j} n_i)(prod_{i>=j} Q_{n_i k})`, upper
/// `n prod_{i>=j} n_i - n`.
pub fn bounds_abelian(set: &AdditiveSet, k: u64) -> Result<CountResult> {
    require_group(set, "bounds_abelian")?;
    let factors = set.factors();
    let last = *factors.last().expect("nonempty factor list");
    if k < 2 || k > last {
        return Err(Error::InvalidArgument(format!(
            "need 2 <= k <= n_d = {last} (got k = {k})"
        )));
    }
    let j = factors.iter().position(|&f| k <= f).expect("k <= n_d");
    let n = set.cardinality() as u128;
    let mut lower: u128 = factors[..j].iter().map(|&f| f as u128).product();
    for &f in &factors[j..] {
        lower = lower
            .checked_mul(count_cyclic(f, k)?.value())
            .ok_or(Error::Overflow("abelian lower bound"))?;
    }
    let tail = factors[j..]
        .iter()
        .try_fold(1u128, |acc, &f| acc.checked_mul(f as u128))
        .ok_or(Error::Overflow("abelian upper bound"))?;
    let upper = n
        .checked_mul(tail)
        .ok_or(Error::Overflow("abelian upper bound"))?
        - n;
    Ok(CountResult::bounds(lower, upper))
}

/// Closed-form count for any family, with the conventions `k = 1 -> |A|` and
/// zero when no progression of length `k` fits.
pub fn count_closed(set: &AdditiveSet, k: u64) -> Result<CountResult> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be >= 1".into()));
    }
    if k == 1 {
        return Ok(CountResult::exact(
            set.cardinality() as u128,
            Method::ClosedForm,
        ));
    }
    match set.family() {
        Family::IntervalBox => {
            let n = set.n();
            if k > n {
                return Ok(CountResult::exact(0, Method::ClosedForm));
            }
            count_lattice(n, k, set.dim() as u32)
        }
        Family::Cyclic => count_cyclic(set.n(), k),
        Family::Abelian | Family::ElementaryP => count_abelian_exact(set, k),
    }
}

/// Rigorous bounds for any family. Boxes of dimension `d > 1` push the
/// one-dimensional bounds through `(P + n)^d - n^d`, which is monotone in `P`.
pub fn count_bounds(set: &AdditiveSet, k: u64) -> Result<CountResult> {
    match set.family() {
        Family::IntervalBox => {
            let n = set.n();
            let b = bounds_interval(n, k)?;
            let d = set.dim() as u32;
            let lift = |p: u128| -> Result<u128> {
                let all = (p + n as u128)
                    .checked_pow(d)
                    .ok_or(Error::Overflow("lattice bound"))?;
                Ok(all - (n as u128).pow(d))
            };
            Ok(CountResult::bounds(lift(b.lower)?, lift(b.upper)?))
        }
        _ => bounds_abelian(set, k),
    }
}

/// Caps on the brute-force oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BruteForceCaps {
    pub max_group_order: u64,
    pub max_interval_n: u64,
    pub max_interval_d: usize,
}

impl Default for BruteForceCaps {
    fn default() -> Self {
        BruteForceCaps {
            max_group_order: 10_000,
            max_interval_n: 50,
            max_interval_d: 3,
        }
    }
}

fn check_caps(set: &AdditiveSet, caps: &BruteForceCaps) -> Result<()> {
    match set.family() {
        Family::IntervalBox => {
            if set.n() > caps.max_interval_n {
                return Err(Error::CapExceeded {
                    what: "brute-force interval side",
                    value: set.n() as u128,
                    cap: caps.max_interval_n as u128,
                });
            }
            if set.dim() > caps.max_interval_d {
                return Err(Error::CapExceeded {
                    what: "brute-force interval dimension",
                    value: set.dim() as u128,
                    cap: caps.max_interval_d as u128,
                });
            }
        }
        _ => {
            if set.cardinality() > caps.max_group_order {
                return Err(Error::CapExceeded {
                    what: "brute-force group order",
                    value: set.cardinality() as u128,
                    cap: caps.max_group_order as u128,
                });
            }
        }
    }
    Ok(())
}

/// Brute-force counts for every `k` up to `k_max` at once: entry `k` of the
/// result is the number of progression k-orderings (entry 0 is unused).
/// Each base and nonzero step is extended term by term until it leaves the
/// set, repeats a term, or reaches `k_max` terms.
pub fn brute_force_profile(
    set: &AdditiveSet,
    k_max: usize,
    caps: &BruteForceCaps,
) -> Result<Vec<u128>> {
    check_caps(set, caps)?;
    let size = set.len();
    let mut counts = vec![0u128; k_max + 1];
    if k_max == 0 {
        return Ok(counts);
    }
    counts[1] = size as u128;
    if k_max == 1 {
        return Ok(counts);
    }
    let arith = IndexArith::new(set);
    let steps = candidate_steps(set);
    let runs = (0..size)
        .into_par_iter()
        .map(|a| {
            let mut hist = vec![0u128; k_max + 1];
            let mut stamp = vec![0u32; size];
            for (t, r) in steps.iter().enumerate() {
                let mark = t as u32 + 1;
                stamp[a] = mark;
                let (mut x, mut len) = (a, 1);
                while len < k_max {
                    match arith.offset_by(x, 1, r.coords()) {
                        Some(y) if stamp[y] != mark => {
                            stamp[y] = mark;
                            x = y;
                            len += 1;
                        }
                        _ => break,
                    }
                }
                hist[len] += 1;
            }
            hist
        })
        .reduce(
            || vec![0u128; k_max + 1],
            |mut acc, h| {
                acc.iter_mut().zip(h).for_each(|(x, y)| *x += y);
                acc
            },
        );
    let mut tail = 0;
    for k in (2..=k_max).rev() {
        tail += runs[k];
        counts[k] = tail;
    }
    Ok(counts)
}

/// Counts progression k-orderings by trying every base point and every
/// nonzero step, generating the `k` terms and checking membership and
/// distinctness. Shares no code with the closed forms.
pub fn brute_force_count(set: &AdditiveSet, k: u64, caps: &BruteForceCaps) -> Result<CountResult> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be >= 1".into()));
    }
    check_caps(set, caps)?;
    if k == 1 {
        return Ok(CountResult::exact(
            set.cardinality() as u128,
            Method::BruteForce,
        ));
    }
    let steps = candidate_steps(set);
    let k = k as usize;
    let total: u128 = (0..set.cardinality())
        .into_par_iter()
        .map(|a| {
            let base = set.element_at(a).expect("index in range");
            let mut terms: Vec<Element> = Vec::with_capacity(k);
            steps
                .iter()
                .filter(|r| {
                    terms.clear();
                    let mut x = base.clone();
                    for i in 0..k {
                        if i > 0 {
                            x = set.add(&x, r).expect("same dimension");
                        }
                        if !set.contains(&x) || terms.contains(&x) {
                            return false;
                        }
                        terms.push(x.clone());
                    }
                    true
                })
                .count() as u128
        })
        .sum();
    Ok(CountResult::exact(total, Method::BruteForce))
}

/// Every nonzero step worth trying: all nonidentity elements of a group, all
/// nonzero vectors of `[-(n-1), n-1]^d` for a box.
fn candidate_steps(set: &AdditiveSet) -> Vec<Element> {
    match set.family() {
        Family::IntervalBox => {
            let lim = set.n() as i64 - 1;
            let span = (2 * lim + 1) as u64;
            let d = set.dim();
            let total = span.pow(d as u32);
            (0..total)
                .map(|mut code| {
                    let mut v = vec![0i64; d];
                    for c in v.iter_mut().rev() {
                        *c = (code % span) as i64 - lim;
                        code /= span;
                    }
                    Element(v)
                })
                .filter(|r| r.coords().iter().any(|&c| c != 0))
                .collect()
        }
        _ => set.elements().filter(|r| *r != set.identity()).collect(),
    }
}

/// Calls `visit` with the canonical indices of the terms of every progression
/// k-ordering of the set (`k >= 2`). Steps are pruned to those that can fit,
/// so the work is proportional to the number of progressions.
pub(crate) fn for_each_progression(
    set: &AdditiveSet,
    arith: &IndexArith,
    k: usize,
    mut visit: impl FnMut(&[usize]),
) {
    debug_assert!(k >= 2);
    let mut terms = vec![0usize; k];
    let steps: Vec<Vec<i64>> = match set.family() {
        Family::IntervalBox => {
            let reach = ((set.n() - 1) / (k as u64 - 1)) as i64;
            let span = (2 * reach + 1) as u64;
            let d = set.dim();
            (0..span.pow(d as u32))
                .map(|mut code| {
                    let mut v = vec![0i64; d];
                    for c in v.iter_mut().rev() {
                        *c = (code % span) as i64 - reach;
                        code /= span;
                    }
                    v
                })
                .filter(|v| v.iter().any(|&c| c != 0))
                .collect()
        }
        _ => set
            .elements()
            .filter(|r| set.element_order(r).expect("group member") >= k as u64)
            .map(|r| r.0)
            .collect(),
    };
    for r in &steps {
        'base: for a in 0..set.len() {
            if set.family() == Family::IntervalBox && arith.offset_by(a, k as i64 - 1, r).is_none()
            {
                continue;
            }
            terms[0] = a;
            for i in 1..k {
                match arith.offset_by(terms[i - 1], 1, r) {
                    Some(t) => terms[i] = t,
                    None => continue 'base,
                }
            }
            visit(&terms);
        }
    }
}

/// Comparison of `Q_nk` with the totient-sum asymptotic
/// `n^2 - (3/pi^2) n (k-1)^2`, allowing `n k (log(k+2))^2` for the
/// unquantified lower-order term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TotientSumDiagnostic {
    pub n: u64,
    pub k: u64,
    pub asymptotic: f64,
    pub exact: u128,
    pub slack: f64,
    pub holds: bool,
}

pub fn totient_sum_diagnostic(n: u64, k: u64) -> Result<TotientSumDiagnostic> {
    let exact = count_cyclic(n, k)?.value();
    let (nf, kf) = (n as f64, k as f64);
    let asymptotic = nf * nf - 3.0 / (std::f64::consts::PI.powi(2)) * nf * (kf - 1.0).powi(2);
    let slack = nf * kf * (kf + 2.0).ln().powi(2);
    Ok(TotientSumDiagnostic {
        n,
        k,
        asymptotic,
        exact,
        slack,
        holds: asymptotic <= exact as f64 + slack,
    })
}
