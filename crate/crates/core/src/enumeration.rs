//! Exact distribution of `L` over all orderings of a small set, and the
//! parity-block structure of 3-free orderings of `Z/2^m Z`.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arith::{divisors, totient};
use crate::error::{Error, Result};
use crate::group::{AdditiveSet, Family, IndexArith};
use crate::las::{longest_ap, Ordering};

/// Default largest `|A|` for a serial enumeration.
pub const DEFAULT_MAX_SIZE: usize = 10;
/// Largest `|A|` accepted when parallel enumeration is requested.
pub const PARALLEL_MAX_SIZE: usize = 12;

/// `counts[k - 1]` orderings have longest progression subsequence `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionTable {
    pub set: AdditiveSet,
    pub counts: Vec<u128>,
    pub total: u128,
}

impl DistributionTable {
    /// Number of orderings with `L = k`.
    pub fn count(&self, k: usize) -> u128 {
        if k == 0 {
            return 0;
        }
        self.counts.get(k - 1).copied().unwrap_or(0)
    }

    pub fn probability(&self, k: usize) -> f64 {
        self.count(k) as f64 / self.total as f64
    }

    /// Probability mass on a set of lengths.
    pub fn mass(&self, ks: &[usize]) -> f64 {
        let uniq: BTreeSet<usize> = ks.iter().copied().collect();
        uniq.into_iter().map(|k| self.probability(k)).sum()
    }

    pub fn expected_length(&self) -> f64 {
        (1..=self.counts.len())
            .map(|k| k as f64 * self.probability(k))
            .sum()
    }
}

pub fn factorial(n: usize) -> Result<u128> {
    (1..=n as u128).try_fold(1u128, |acc, i| {
        acc.checked_mul(i).ok_or(Error::Overflow("factorial"))
    })
}

/// How `L` is evaluated for each ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    /// Depth-first search over prefixes in lexicographic order, extending the
    /// pair DP by one column per placed element.
    #[default]
    Incremental,
    /// Lexicographic successor generation with a full recomputation of `L`
    /// per ordering (orbit walk for groups, pair DP for boxes).
    Direct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerateOptions {
    /// Enumerate one representative per orbit of the set's symmetries and
    /// weight it by the orbit size.
    pub symmetry: bool,
    /// Worker threads; `None` runs serially.
    pub parallel: Option<usize>,
    pub engine: Engine,
    /// Largest `|A|` accepted without parallelism.
    pub max_size: usize,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            symmetry: false,
            parallel: None,
            engine: Engine::Incremental,
            max_size: DEFAULT_MAX_SIZE,
        }
    }
}

/// A fixed prefix of canonical indices and the number of orderings it stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Job {
    prefix: Vec<usize>,
    weight: u128,
}

/// Prefix jobs covering every ordering exactly once (with weights) and, when
/// symmetry reduction is on, one representative per orbit.
fn jobs(set: &AdditiveSet, symmetry: bool, split: bool) -> Vec<Job> {
    let n = set.len();
    if n <= 2 {
        return vec![Job {
            prefix: Vec::new(),
            weight: 1,
        }];
    }
    let base: Vec<Job> = if !symmetry {
        vec![Job {
            prefix: Vec::new(),
            weight: 1,
        }]
    } else {
        match set.family() {
            // x -> u x + b acts freely: pin the first entry to 0 and the second
            // to a divisor d of n, standing for the phi(n/d) entries with gcd d.
            Family::Cyclic => divisors(n as u64)
                .into_iter()
                .filter(|&d| (d as usize) < n)
                .map(|d| Job {
                    prefix: vec![0, d as usize],
                    weight: n as u128 * totient(n as u64 / d).expect("n/d >= 1") as u128,
                })
                .collect(),
            // Translations act freely on orderings of any group.
            Family::Abelian | Family::ElementaryP => vec![Job {
                prefix: vec![0],
                weight: n as u128,
            }],
            // Central reflection maps canonical index i to |A| - 1 - i.
            Family::IntervalBox => (0..n)
                .filter(|&i| i <= n - 1 - i)
                .map(|i| Job {
                    prefix: vec![i],
                    weight: if i == n - 1 - i { 1 } else { 2 },
                })
                .collect(),
        }
    };
    if !split {
        return base;
    }
    // Extend every prefix to length two so workers get balanced pieces.
    base.into_iter()
        .flat_map(|job| {
            if job.prefix.len() >= 2 {
                return vec![job];
            }
            let used: Vec<usize> = job.prefix.clone();
            let firsts: Vec<usize> = if used.is_empty() {
                (0..n).collect()
            } else {
                used.clone()
            };
            let mut out = Vec::new();
            for f in firsts {
                for s in (0..n).filter(|&s| s != f) {
                    out.push(Job {
                        prefix: vec![f, s],
                        weight: job.weight,
                    });
                }
            }
            out
        })
        .collect()
}

/// Enumerates every ordering of `set` and tallies `L`.
pub fn distribution(set: &AdditiveSet, options: &EnumerateOptions) -> Result<DistributionTable> {
    let n = set.len();
    let limit = if options.parallel.is_some() {
        options.max_size.max(PARALLEL_MAX_SIZE)
    } else {
        options.max_size
    };
    if n > limit {
        return Err(Error::CapExceeded {
            what: "enumeration set size",
            value: n as u128,
            cap: limit as u128,
        });
    }
    let total = factorial(n)?;
    let jobs = jobs(set, options.symmetry, options.parallel.is_some());
    let run = |job: &Job| -> Result<Vec<u128>> {
        let tally = match options.engine {
            Engine::Incremental => incremental_tally(set, &job.prefix),
            Engine::Direct => direct_tally(set, &job.prefix)?,
        };
        Ok(tally.into_iter().map(|c| c as u128 * job.weight).collect())
    };
    let partials: Vec<Vec<u128>> = match options.parallel {
        Some(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.max(1))
                .build()
                .map_err(|e| Error::Internal(e.to_string()))?;
            pool.install(|| jobs.par_iter().map(run).collect::<Result<Vec<_>>>())?
        }
        None => jobs.iter().map(run).collect::<Result<Vec<_>>>()?,
    };
    let mut counts = vec![0u128; n];
    for part in partials {
        for (c, p) in counts.iter_mut().zip(part) {
            *c += p;
        }
    }
    let sum: u128 = counts.iter().sum();
    if sum != total {
        return Err(Error::Internal(format!(
            "tallies sum to {sum}, expected {n}! = {total}"
        )));
    }
    Ok(DistributionTable {
        set: set.clone(),
        counts,
        total,
    })
}

const NONE: u8 = u8::MAX;

/// Depth-first enumeration of all orderings extending `prefix`, maintaining
/// the pair DP table column by column.
fn incremental_tally(set: &AdditiveSet, prefix: &[usize]) -> Vec<u64> {
    let n = set.len();
    let arith = IndexArith::new(set);
    let mut reflect = vec![NONE; n * n];
    for y in 0..n {
        for x in 0..n {
            if let Some(p) = arith.reflect(y, x) {
                reflect[y * n + x] = p as u8;
            }
        }
    }
    let mut search = Search {
        n,
        reflect,
        pos: vec![NONE; n],
        seq: vec![0; n],
        dp: vec![0; n * n],
        tally: vec![0; n],
    };
    let mut best = 0u8;
    for (t, &x) in prefix.iter().enumerate() {
        best = best.max(search.place(t, x));
    }
    search.dfs(prefix.len(), best);
    search.tally
}

struct Search {
    n: usize,
    reflect: Vec<u8>,
    pos: Vec<u8>,
    seq: Vec<usize>,
    dp: Vec<u8>,
    tally: Vec<u64>,
}

impl Search {
    /// Puts element `x` at position `t` and returns the longest progression
    /// subsequence ending there.
    #[inline]
    fn place(&mut self, t: usize, x: usize) -> u8 {
        let n = self.n;
        self.seq[t] = x;
        self.pos[x] = t as u8;
        let mut best = 1u8;
        for s in 0..t {
            let y = self.seq[s];
            let p = self.reflect[y * n + x];
            let len = if p != NONE && self.pos[p as usize] < s as u8 {
                self.dp[self.pos[p as usize] as usize * n + s] + 1
            } else {
                2
            };
            self.dp[s * n + t] = len;
            best = best.max(len);
        }
        best
    }

    fn dfs(&mut self, t: usize, best: u8) {
        if t == self.n {
            self.tally[best as usize - 1] += 1;
            return;
        }
        for x in 0..self.n {
            if self.pos[x] != NONE {
                continue;
            }
            let here = self.place(t, x);
            self.dfs(t + 1, best.max(here));
            self.pos[x] = NONE;
        }
    }
}

/// Visits every ordering beginning with `prefix`, in lexicographic order.
fn direct_tally(set: &AdditiveSet, prefix: &[usize]) -> Result<Vec<u64>> {
    let n = set.len();
    let mut tally = vec![0u64; n];
    let mut rest: Vec<usize> = (0..n).filter(|x| !prefix.contains(x)).collect();
    loop {
        let seq: Vec<usize> = prefix.iter().chain(rest.iter()).copied().collect();
        let ordering = Ordering::from_indices(set.clone(), seq)?;
        tally[longest_ap(&ordering)?.length - 1] += 1;
        if !next_permutation(&mut rest) {
            break;
        }
    }
    Ok(tally)
}

/// Advances to the lexicographic successor; false after the last permutation.
pub fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..v.len())
        .rev()
        .find(|&j| v[i] < v[j])
        .expect("v[i+1] > v[i]");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// Versioned on-disk cache of distribution tables.
#[derive(Debug, Clone)]
pub struct DistributionCache {
    dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct CacheFile {
    spec: String,
    counts: Vec<u128>,
    tool_version: String,
    checksum: String,
}

fn checksum(spec: &str, counts: &[u128], version: &str) -> String {
    let mut h = Sha256::new();
    h.update(spec.as_bytes());
    h.update(b"|");
    h.update(version.as_bytes());
    for c in counts {
        h.update(b"|");
        h.update(c.to_string().as_bytes());
    }
    hex::encode(h.finalize())
}

impl DistributionCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        DistributionCache { dir: dir.into() }
    }

    pub fn path_for(&self, set: &AdditiveSet) -> PathBuf {
        let key: String = set
            .to_string()
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
            .collect();
        self.dir
            .join(format!("{key}-v{}.json", crate::TOOL_VERSION))
    }

    /// A cached table, if present, from this tool version, and intact.
    pub fn load(&self, set: &AdditiveSet) -> Option<DistributionTable> {
        let text = std::fs::read_to_string(self.path_for(set)).ok()?;
        let file: CacheFile = serde_json::from_str(&text).ok()?;
        let spec = set.to_string();
        if file.spec != spec
            || file.tool_version != crate::TOOL_VERSION
            || file.checksum != checksum(&spec, &file.counts, &file.tool_version)
            || file.counts.len() != set.len()
        {
            return None;
        }
        let total = factorial(set.len()).ok()?;
        if file.counts.iter().sum::<u128>() != total {
            return None;
        }
        Some(DistributionTable {
            set: set.clone(),
            counts: file.counts,
            total,
        })
    }

    pub fn store(&self, table: &DistributionTable) -> Result<PathBuf> {
        std::fs::create_dir_all(&self.dir)?;
        let spec = table.set.to_string();
        let file = CacheFile {
            checksum: checksum(&spec, &table.counts, crate::TOOL_VERSION),
            spec,
            counts: table.counts.clone(),
            tool_version: crate::TOOL_VERSION.to_string(),
        };
        let path = self.path_for(&table.set);
        let json = serde_json::to_string_pretty(&file).map_err(|e| Error::Io(e.to_string()))?;
        std::fs::write(&path, json)?;
        Ok(path)
    }
}

/// [`distribution`] backed by an optional cache directory.
pub fn distribution_cached(
    set: &AdditiveSet,
    options: &EnumerateOptions,
    cache: Option<&Path>,
) -> Result<DistributionTable> {
    let Some(dir) = cache else {
        return distribution(set, options);
    };
    let cache = DistributionCache::new(dir);
    if let Some(table) = cache.load(set) {
        return Ok(table);
    }
    let table = distribution(set, options)?;
    cache.store(&table)?;
    Ok(table)
}

/// Number of orderings of `Z/nZ` without a 3-term progression subsequence:
/// `2^{n-1}` when `n` is a power of two, zero otherwise.
pub fn three_free_count(n: u64) -> Result<u128> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 2 (got {n})")));
    }
    if !n.is_power_of_two() {
        return Ok(0);
    }
    1u128
        .checked_shl((n - 1) as u32)
        .filter(|_| n <= 128)
        .ok_or(Error::Overflow("2^(n-1)"))
}

fn power_of_two_exponent(set: &AdditiveSet) -> Result<u32> {
    if set.family() != Family::Cyclic || !set.n().is_power_of_two() {
        return Err(Error::UnsupportedFamily {
            op: "3-free structure",
            family: "non-power-of-two",
        });
    }
    Ok(set.n().trailing_zeros())
}

fn is_three_free(ordering: &Ordering) -> Result<bool> {
    Ok(ordering.len() < 3 || longest_ap(ordering)?.length <= 2)
}

/// Interleaves two 3-free orderings `S`, `T` of `Z/2^{m-1}` into the ordering
/// `(2 s_1, ..., 2 s_h, 2 t_1 + 1, ..., 2 t_h + 1)` of `Z/2^m`, or the variant
/// with the odd block first.
pub fn construct_three_free(
    m: u32,
    s: &Ordering,
    t: &Ordering,
    evens_first: bool,
) -> Result<Ordering> {
    if m == 0 || m > 20 {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= m <= 20 (got {m})"
        )));
    }
    let half = 1u64 << (m - 1);
    for part in [s, t] {
        let set = part.set();
        if set.family() != Family::Cyclic || set.n() != half {
            return Err(Error::InvalidArgument(format!(
                "expected an ordering of cyclic:{half}, got {set}"
            )));
        }
        if !is_three_free(part)? {
            return Err(Error::InvalidArgument(
                "input ordering contains a 3-term progression".into(),
            ));
        }
    }
    let evens = s.indices().iter().map(|&x| 2 * x);
    let odds = t.indices().iter().map(|&x| 2 * x + 1);
    let seq: Vec<usize> = if evens_first {
        evens.chain(odds).collect()
    } else {
        odds.chain(evens).collect()
    };
    Ok(Ordering::from_indices_unchecked(
        AdditiveSet::cyclic(2 * half)?,
        seq,
    ))
}

/// Every ordering produced by the construction at level `m`, built
/// recursively from the two orderings of `Z/2Z`.
pub fn all_constructed_three_free(m: u32) -> Result<Vec<Ordering>> {
    if m == 0 {
        return Err(Error::InvalidArgument("need m >= 1".into()));
    }
    let mut level = vec![Ordering::identity(AdditiveSet::cyclic(1)?)];
    for step in 1..=m {
        let mut next = Vec::with_capacity(2 * level.len() * level.len());
        for s in &level {
            for t in &level {
                for evens_first in [true, false] {
                    next.push(construct_three_free(step, s, t, evens_first)?);
                }
            }
        }
        level = next;
    }
    Ok(level)
}

/// Parity-block test: the first half shares one parity, the second half the
/// other, and both halves contract (via `(x - parity) / 2`) to orderings of
/// `Z/2^{m-1}` passing the same test.
pub fn three_free_structure_check(ordering: &Ordering) -> Result<bool> {
    power_of_two_exponent(ordering.set())?;
    Ok(parity_blocks(ordering.indices()))
}

fn parity_blocks(seq: &[usize]) -> bool {
    if seq.len() <= 2 {
        return true;
    }
    let (first, second) = seq.split_at(seq.len() / 2);
    let parity = first[0] % 2;
    if first.iter().any(|x| x % 2 != parity) || second.iter().any(|x| x % 2 == parity) {
        return false;
    }
    let contract = |half: &[usize]| -> Vec<usize> { half.iter().map(|x| x / 2).collect() };
    parity_blocks(&contract(first)) && parity_blocks(&contract(second))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(spec: &str) -> DistributionTable {
        distribution(&spec.parse().unwrap(), &EnumerateOptions::default()).unwrap()
    }

    #[test]
    fn small_rows() {
        assert_eq!(table("interval:1").counts, vec![1]);
        assert_eq!(table("interval:5").counts, vec![0, 20, 82, 16, 2]);
        assert_eq!(
            table("cyclic:7").counts,
            vec![0, 0, 462, 3150, 1176, 210, 42]
        );
        assert_eq!(table("cyclic:4").counts, vec![0, 8, 8, 8]);
    }

    #[test]
    fn engines_and_symmetry_agree() {
        for spec in [
            "interval:5",
            "interval:6",
            "interval:7",
            "cyclic:6",
            "cyclic:7",
            "abelian:2x2",
            "abelian:2x4",
            "interval:2,2",
            "elementary:2^3",
        ] {
            let set: AdditiveSet = spec.parse().unwrap();
            let plain = distribution(&set, &EnumerateOptions::default()).unwrap();
            for engine in [Engine::Incremental, Engine::Direct] {
                for symmetry in [false, true] {
                    for parallel in [None, Some(2)] {
                        let opts = EnumerateOptions {
                            symmetry,
                            parallel,
                            engine,
                            ..Default::default()
                        };
                        assert_eq!(distribution(&set, &opts).unwrap(), plain, "{spec} {opts:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn symmetry_jobs_cover_every_ordering() {
        for spec in [
            "cyclic:12",
            "cyclic:9",
            "interval:8",
            "interval:3,2",
            "abelian:2x4",
        ] {
            let set: AdditiveSet = spec.parse().unwrap();
            let n = set.len() as u128;
            for split in [false, true] {
                let covered: u128 = jobs(&set, true, split)
                    .iter()
                    .map(|j| j.weight * factorial(set.len() - j.prefix.len()).unwrap())
                    .sum();
                assert_eq!(covered, factorial(n as usize).unwrap(), "{spec}");
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let set = AdditiveSet::cyclic(11).unwrap();
        assert!(matches!(
            distribution(&set, &EnumerateOptions::default()),
            Err(Error::CapExceeded { .. })
        ));
        let set = AdditiveSet::cyclic(13).unwrap();
        let opts = EnumerateOptions {
            parallel: Some(1),
            ..Default::default()
        };
        assert!(distribution(&set, &opts).is_err());
    }

    #[test]
    fn permutation_successor() {
        let mut v = vec![1, 2, 3];
        let mut seen = vec![v.clone()];
        while next_permutation(&mut v) {
            seen.push(v.clone());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[1], vec![1, 3, 2]);
        assert_eq!(seen[5], vec![3, 2, 1]);
        let mut one = vec![7];
        assert!(!next_permutation(&mut one));
    }

    #[test]
    fn three_free_counts() {
        assert_eq!(three_free_count(2).unwrap(), 2);
        assert_eq!(three_free_count(4).unwrap(), 8);
        assert_eq!(three_free_count(6).unwrap(), 0);
        assert_eq!(three_free_count(8).unwrap(), 128);
        assert_eq!(three_free_count(16).unwrap(), 32768);
        assert!(three_free_count(1).is_err());
        assert!(three_free_count(256).is_err());
    }

    #[test]
    fn structure_check_examples() {
        let z4 = AdditiveSet::cyclic(4).unwrap();
        let o = Ordering::from_indices(z4.clone(), vec![0, 2, 1, 3]).unwrap();
        assert!(three_free_structure_check(&o).unwrap());
        assert_eq!(longest_ap(&o).unwrap().length, 2);
        let o = Ordering::identity(z4);
        assert!(!three_free_structure_check(&o).unwrap());
        let z6 = Ordering::identity(AdditiveSet::cyclic(6).unwrap());
        assert!(three_free_structure_check(&z6).is_err());
    }

    #[test]
    fn structure_check_matches_las_on_z8() {
        let set = AdditiveSet::cyclic(8).unwrap();
        let mut seq: Vec<usize> = (0..8).collect();
        let mut free = 0;
        loop {
            let o = Ordering::from_indices(set.clone(), seq.clone()).unwrap();
            let by_las = longest_ap(&o).unwrap().length <= 2;
            assert_eq!(three_free_structure_check(&o).unwrap(), by_las, "{seq:?}");
            free += by_las as u32;
            if !next_permutation(&mut seq) {
                break;
            }
        }
        assert_eq!(free, 128);
    }

    #[test]
    fn construction_base_and_m3() {
        let one = Ordering::identity(AdditiveSet::cyclic(1).unwrap());
        let a = construct_three_free(1, &one, &one, true).unwrap();
        let b = construct_three_free(1, &one, &one, false).unwrap();
        assert_eq!(a.indices(), &[0, 1]);
        assert_eq!(b.indices(), &[1, 0]);

        let built: BTreeSet<Vec<usize>> = all_constructed_three_free(3)
            .unwrap()
            .iter()
            .map(|o| o.indices().to_vec())
            .collect();
        assert_eq!(built.len(), 128);
        // Compare with the exhaustive list of 3-free orderings of Z/8.
        let set = AdditiveSet::cyclic(8).unwrap();
        let mut seq: Vec<usize> = (0..8).collect();
        let mut exhaustive = BTreeSet::new();
        loop {
            let o = Ordering::from_indices(set.clone(), seq.clone()).unwrap();
            if longest_ap(&o).unwrap().length <= 2 {
                exhaustive.insert(seq.clone());
            }
            if !next_permutation(&mut seq) {
                break;
            }
        }
        assert_eq!(built, exhaustive);
    }

    #[test]
    fn construction_rejects_bad_inputs() {
        let z2 = AdditiveSet::cyclic(2).unwrap();
        let s = Ordering::identity(z2.clone());
        assert!(construct_three_free(3, &s, &s, true).is_err());
        let z4 = AdditiveSet::cyclic(4).unwrap();
        let bad = Ordering::identity(z4.clone());
        let good = Ordering::from_indices(z4, vec![0, 2, 1, 3]).unwrap();
        assert!(construct_three_free(3, &bad, &good, true).is_err());
        assert!(construct_three_free(3, &good, &good, false).is_ok());
    }

    #[test]
    fn cache_roundtrip_and_tamper() {
        let dir = tempfile::tempdir().unwrap();
        let set: AdditiveSet = "cyclic:6".parse().unwrap();
        let opts = EnumerateOptions::default();
        let first = distribution_cached(&set, &opts, Some(dir.path())).unwrap();
        let cache = DistributionCache::new(dir.path());
        let path = cache.path_for(&set);
        assert!(path.exists());
        assert_eq!(cache.load(&set).unwrap(), first);
        let text = std::fs::read_to_string(&path)
            .unwrap()
            .replace("468", "467");
        std::fs::write(&path, text).unwrap();
        assert!(cache.load(&set).is_none());
        assert_eq!(
            distribution_cached(&set, &opts, Some(dir.path())).unwrap(),
            first
        );
        assert_eq!(cache.load(&set).unwrap(), first);
    }

    #[test]
    fn table_statistics() {
        let t = table("cyclic:7");
        assert!((t.expected_length() - 4.25).abs() < 1e-12);
        let t8 = table("cyclic:8");
        assert!((t8.expected_length() - 4.136).abs() < 1e-3);
        assert!((t.mass(&[4, 4, 5]) - (3150.0 + 1176.0) / 5040.0).abs() < 1e-12);
    }
}
