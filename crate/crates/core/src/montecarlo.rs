//! Seeded sampling of uniform random orderings and the experiments built on
//! it.
//!
//! Sample `i` of an experiment with seed `s` draws from its own ChaCha8
//! stream (key from `s`, stream id `i`), so results do not depend on how
//! samples are spread across threads.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{solve_threshold, Continuation, ThresholdFamily, ThresholdResult};
use crate::counting::count_closed;
use crate::enumeration::DistributionTable;
use crate::error::{Error, Result};
use crate::group::AdditiveSet;
use crate::las::{count_k_subsequences, longest_ap, Ordering, DEFAULT_PAIR_DP_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub set: AdditiveSet,
    pub samples: u64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(set: AdditiveSet, samples: u64, seed: u64) -> Self {
        ExperimentConfig {
            set,
            samples,
            seed,
            k: None,
        }
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidArgument("samples must be >= 1".into()));
        }
        Ok(())
    }
}

/// The generator for sample `index` of an experiment seeded with `seed`.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform integer in `[0, bound)` by widening multiplication with rejection.
pub fn uniform_below<R: RngCore + ?Sized>(rng: &mut R, bound: u64) -> u64 {
    assert!(bound > 0, "empty range");
    let threshold = bound.wrapping_neg() % bound;
    loop {
        let m = rng.next_u64() as u128 * bound as u128;
        if (m as u64) >= threshold {
            return (m >> 64) as u64;
        }
    }
}

/// Fisher-Yates shuffle, last position first.
pub fn shuffle<T, R: RngCore + ?Sized>(rng: &mut R, items: &mut [T]) {
    for i in (1..items.len()).rev() {
        let j = uniform_below(rng, i as u64 + 1) as usize;
        items.swap(i, j);
    }
}

/// A uniformly random ordering of `set`, shuffling canonical indices.
pub fn sample_ordering<R: RngCore + ?Sized>(set: &AdditiveSet, rng: &mut R) -> Ordering {
    let mut seq: Vec<usize> = (0..set.len()).collect();
    shuffle(rng, &mut seq);
    Ordering::from_indices(set.clone(), seq).expect("a shuffle is a permutation")
}

/// Runs `per_sample` for every sample index and returns the results in index
/// order. `threads = None` runs serially.
fn run_samples<T: Send>(
    config: &ExperimentConfig,
    threads: Option<usize>,
    per_sample: impl Fn(Ordering) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    config.validate()?;
    let one = |i: u64| {
        let mut rng = substream(config.seed, i);
        per_sample(sample_ordering(&config.set, &mut rng))
    };
    match threads {
        None => (0..config.samples).map(one).collect(),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| Error::Internal(e.to_string()))?;
            pool.install(|| (0..config.samples).into_par_iter().map(one).collect())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubseqCountStats {
    pub k: usize,
    pub samples: u64,
    pub mean: f64,
    pub stderr: f64,
    /// `count(k) / k!`.
    pub expected: f64,
    /// `(mean - expected) / stderr`; `null` in JSON when the spread is zero
    /// and the mean misses the expectation.
    pub z: f64,
}

/// Expected number of k-term progression subsequences in a uniform ordering.
pub fn expected_nk(set: &AdditiveSet, k: usize) -> Result<f64> {
    let count = count_closed(set, k as u64)?.value() as f64;
    let log_fact: f64 = (2..=k).map(|i| (i as f64).ln()).sum();
    Ok(count * (-log_fact).exp())
}

/// Sample mean of `N_k` with its standard error and z-score against
/// `count(k) / k!`.
pub fn estimate_nk_mean(
    config: &ExperimentConfig,
    threads: Option<usize>,
) -> Result<SubseqCountStats> {
    let k = config
        .k
        .ok_or_else(|| Error::InvalidArgument("N_k experiment needs k".into()))?;
    let expected = expected_nk(&config.set, k)?;
    let values = run_samples(config, threads, |o| count_k_subsequences(&o, k))?;
    let m = values.len() as f64;
    let mean = values.iter().map(|&v| v as f64).sum::<f64>() / m;
    let var = if values.len() > 1 {
        values
            .iter()
            .map(|&v| (v as f64 - mean).powi(2))
            .sum::<f64>()
            / (m - 1.0)
    } else {
        0.0
    };
    let stderr = (var / m).sqrt();
    let z = if stderr > 0.0 {
        (mean - expected) / stderr
    } else if (mean - expected).abs() <= 1e-12 {
        0.0
    } else {
        f64::INFINITY.copysign(mean - expected)
    };
    Ok(SubseqCountStats {
        k,
        samples: config.samples,
        mean,
        stderr,
        expected,
        z,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LHistogram {
    pub samples: u64,
    /// `counts[k - 1]` samples had `L = k`.
    pub counts: Vec<u64>,
}

impl LHistogram {
    pub fn fraction(&self, k: usize) -> f64 {
        if k == 0 {
            return 0.0;
        }
        self.counts.get(k - 1).copied().unwrap_or(0) as f64 / self.samples as f64
    }

    pub fn fractions(&self) -> Vec<f64> {
        (1..=self.counts.len()).map(|k| self.fraction(k)).collect()
    }

    /// Most frequent length; ties go to the smaller length.
    pub fn mode(&self) -> usize {
        let mut best = 0;
        for (i, &c) in self.counts.iter().enumerate() {
            if c > self.counts[best] {
                best = i;
            }
        }
        best + 1
    }

    /// Total-variation distance to an exact distribution.
    pub fn tv_distance(&self, table: &DistributionTable) -> f64 {
        let len = self.counts.len().max(table.counts.len());
        0.5 * (1..=len)
            .map(|k| (self.fraction(k) - table.probability(k)).abs())
            .sum::<f64>()
    }

    /// Sup-norm distance to an exact distribution.
    pub fn linf_distance(&self, table: &DistributionTable) -> f64 {
        let len = self.counts.len().max(table.counts.len());
        (1..=len)
            .map(|k| (self.fraction(k) - table.probability(k)).abs())
            .fold(0.0, f64::max)
    }
}

/// Histogram of `L` over sampled orderings.
pub fn empirical_l_distribution(
    config: &ExperimentConfig,
    threads: Option<usize>,
) -> Result<LHistogram> {
    if config.set.len() > DEFAULT_PAIR_DP_CAP {
        return Err(Error::CapExceeded {
            what: "simulation set size",
            value: config.set.len() as u128,
            cap: DEFAULT_PAIR_DP_CAP as u128,
        });
    }
    let lengths = run_samples(config, threads, |o| Ok(longest_ap(&o)?.length))?;
    let mut counts = vec![0u64; config.set.len()];
    for l in lengths {
        counts[l - 1] += 1;
    }
    Ok(LHistogram {
        samples: config.samples,
        counts,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub threshold: ThresholdResult,
    pub samples: u64,
    /// Fraction of samples with `L` in the threshold window.
    pub coverage: f64,
    pub mode: usize,
    pub mode_in_window: bool,
    pub histogram: LHistogram,
}

/// Fraction of sampled orderings whose `L` lands in
/// `{floor(threshold), ceil(threshold)}`.
pub fn coverage_experiment(
    config: &ExperimentConfig,
    threads: Option<usize>,
) -> Result<CoverageReport> {
    let family = ThresholdFamily::try_from(&config.set)?;
    let threshold = solve_threshold(family, Continuation::Interp)?;
    let histogram = empirical_l_distribution(config, threads)?;
    let (lo, hi) = threshold.window;
    let coverage = histogram.fraction(lo as usize)
        + if hi != lo {
            histogram.fraction(hi as usize)
        } else {
            0.0
        };
    let mode = histogram.mode();
    Ok(CoverageReport {
        mode_in_window: threshold.window_contains(mode as u64),
        threshold,
        samples: config.samples,
        coverage,
        mode,
        histogram,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_and_pair() {
        let set = AdditiveSet::cyclic(1).unwrap();
        let mut rng = substream(0, 0);
        assert_eq!(sample_ordering(&set, &mut rng).indices(), &[0]);
        let cfg = ExperimentConfig::new(AdditiveSet::interval(2, 1).unwrap(), 50, 3);
        let h = empirical_l_distribution(&cfg, None).unwrap();
        assert_eq!(h.counts, vec![0, 50]);
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let set = AdditiveSet::cyclic(5).unwrap();
        let a = sample_ordering(&set, &mut substream(42, 0));
        let b = sample_ordering(&set, &mut substream(42, 0));
        assert_eq!(a, b);
        let c = sample_ordering(&set, &mut substream(42, 1));
        let d = sample_ordering(&set, &mut substream(43, 0));
        assert!(a != c || a != d);
    }

    #[test]
    fn uniform_below_stays_in_range() {
        let mut rng = substream(9, 9);
        let mut seen = [0u32; 7];
        for _ in 0..7000 {
            seen[uniform_below(&mut rng, 7) as usize] += 1;
        }
        assert!(seen.iter().all(|&c| c > 850 && c < 1150), "{seen:?}");
        assert_eq!(uniform_below(&mut rng, 1), 0);
    }

    #[test]
    fn threads_do_not_change_results() {
        let cfg = ExperimentConfig::new(AdditiveSet::cyclic(9).unwrap(), 300, 7).with_k(3);
        let serial = estimate_nk_mean(&cfg, None).unwrap();
        for t in [1, 2, 3] {
            assert_eq!(estimate_nk_mean(&cfg, Some(t)).unwrap(), serial);
        }
        let h = empirical_l_distribution(&cfg, None).unwrap();
        assert_eq!(empirical_l_distribution(&cfg, Some(4)).unwrap(), h);
    }

    #[test]
    fn full_length_expectation() {
        let set = AdditiveSet::interval(6, 1).unwrap();
        assert!((expected_nk(&set, 6).unwrap() - 2.0 / 720.0).abs() < 1e-15);
        let cfg = ExperimentConfig::new(set, 500, 1).with_k(6);
        let stats = estimate_nk_mean(&cfg, None).unwrap();
        assert!(stats.mean >= 0.0 && stats.mean <= 1.0);
        assert!(stats.stderr >= 0.0);
    }

    #[test]
    fn missing_k_or_samples() {
        let cfg = ExperimentConfig::new(AdditiveSet::cyclic(5).unwrap(), 10, 1);
        assert!(estimate_nk_mean(&cfg, None).is_err());
        let cfg = ExperimentConfig::new(AdditiveSet::cyclic(5).unwrap(), 0, 1);
        assert!(empirical_l_distribution(&cfg, None).is_err());
    }

    #[test]
    fn coverage_report_is_consistent() {
        let cfg = ExperimentConfig::new(AdditiveSet::cyclic(12).unwrap(), 400, 5);
        let rep = coverage_experiment(&cfg, None).unwrap();
        let (lo, hi) = rep.threshold.window;
        let mass: f64 = (lo..=hi).map(|k| rep.histogram.fraction(k as usize)).sum();
        assert!((rep.coverage - mass).abs() < 1e-12);
        assert_eq!(
            rep.mode_in_window,
            rep.threshold.window_contains(rep.mode as u64)
        );
        let abelian = ExperimentConfig::new(AdditiveSet::abelian(&[2, 4]).unwrap(), 10, 1);
        assert!(coverage_experiment(&abelian, None).is_err());
    }
}
