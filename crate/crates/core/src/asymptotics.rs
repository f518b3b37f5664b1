//! Threshold equations `count(x) / Gamma(x + 1) = 1` and their solutions
//! psi (interval boxes), chi (cyclic groups) and tau (elementary p-groups).
//!
//! The integer count sequences are extended to real `x` by linear
//! interpolation of `log count(k)` between consecutive integers. That
//! extension is exact at integers, nonincreasing, and the same for every
//! family, so roots for different families are directly comparable.

use serde::{Deserialize, Serialize};

use crate::arith::{divisors, totient};
use crate::counting::count_interval;
use crate::error::{Error, Result};
use crate::group::{AdditiveSet, Family};

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for `x > 0` (Lanczos, g = 7, nine
/// terms; reflection below 1/2).
pub fn log_gamma(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 || !x.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "log_gamma needs a finite x > 0 (got {x})"
        )));
    }
    Ok(ln_gamma_pos(x))
}

fn ln_gamma_pos(x: f64) -> f64 {
    use std::f64::consts::PI;
    if x < 0.5 {
        return (PI / (PI * x).sin()).ln() - ln_gamma_pos(1.0 - x);
    }
    let z = x - 1.0;
    let mut series = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + series.ln()
}

/// `2 d log n / log log n`.
pub fn asymptotic_estimate(n: u64, d: u32) -> Result<f64> {
    if n <= 2 {
        return Err(Error::InvalidArgument(format!(
            "the asymptotic form needs n >= 3 (got {n})"
        )));
    }
    let ln = (n as f64).ln();
    Ok(2.0 * d as f64 * ln / ln.ln())
}

/// Which count sequence a threshold refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum ThresholdFamily {
    /// `[1, n]^d`, solved for psi(n, d).
    Interval { n: u64, d: u32 },
    /// `Z/nZ`, solved for chi(n).
    Cyclic { n: u64 },
    /// `(Z/pZ)^d`, solved for tau(p, d).
    Elementary { p: u64, d: u32 },
}

impl TryFrom<&AdditiveSet> for ThresholdFamily {
    type Error = Error;

    fn try_from(set: &AdditiveSet) -> Result<Self> {
        Ok(match set.family() {
            Family::IntervalBox => ThresholdFamily::Interval {
                n: set.n(),
                d: set.dim() as u32,
            },
            Family::Cyclic => ThresholdFamily::Cyclic { n: set.n() },
            Family::ElementaryP => ThresholdFamily::Elementary {
                p: set.n(),
                d: set.dim() as u32,
            },
            Family::Abelian => {
                return Err(Error::UnsupportedFamily {
                    op: "solve_threshold",
                    family: "abelian",
                })
            }
        })
    }
}

impl ThresholdFamily {
    fn describe(&self) -> String {
        match *self {
            ThresholdFamily::Interval { n, d: 1 } => format!("interval:{n}"),
            ThresholdFamily::Interval { n, d } => format!("interval:{n},{d}"),
            ThresholdFamily::Cyclic { n } => format!("cyclic:{n}"),
            ThresholdFamily::Elementary { p, d } => format!("elementary:{p}^{d}"),
        }
    }

    fn asymptotic(&self) -> Option<f64> {
        let (n, d) = match *self {
            ThresholdFamily::Interval { n, d } => (n, d),
            ThresholdFamily::Cyclic { n } => (n, 1),
            ThresholdFamily::Elementary { p, d } => (p, d),
        };
        asymptotic_estimate(n, d).ok()
    }
}

/// How the integer count sequence is continued to real arguments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Continuation {
    /// Piecewise-linear interpolation of `log count(k)`.
    #[default]
    Interp,
    /// `(n - x + 2)(n - 1)/(x - 1)` lifted through `(P + n)^d - n^d`;
    /// interval boxes only.
    Smooth,
}

/// Log-count evaluator for one family, with per-family precomputation.
#[derive(Debug, Clone)]
pub struct CountModel {
    family: ThresholdFamily,
    /// `(j, phi(j))` for the divisors `j` of `n` (cyclic family only).
    divisor_totients: Vec<(u64, u64)>,
}

impl CountModel {
    pub fn new(family: ThresholdFamily) -> Result<Self> {
        let divisor_totients = match family {
            ThresholdFamily::Interval { n, d } => {
                if n < 2 || d == 0 {
                    return Err(Error::InvalidArgument(format!(
                        "interval threshold needs n >= 2, d >= 1 (got n = {n}, d = {d})"
                    )));
                }
                Vec::new()
            }
            ThresholdFamily::Cyclic { n } => {
                if n < 2 {
                    return Err(Error::InvalidArgument(format!(
                        "cyclic threshold needs n >= 2 (got {n})"
                    )));
                }
                divisors(n)
                    .into_iter()
                    .map(|j| (j, totient(j).expect("j >= 1")))
                    .collect()
            }
            ThresholdFamily::Elementary { p, d } => {
                if !crate::arith::is_prime(p) || d == 0 {
                    return Err(Error::InvalidArgument(format!(
                        "elementary threshold needs a prime p and d >= 1 (got p = {p}, d = {d})"
                    )));
                }
                Vec::new()
            }
        };
        Ok(CountModel {
            family,
            divisor_totients,
        })
    }

    pub fn family(&self) -> ThresholdFamily {
        self.family
    }

    /// Largest `k` with a positive count.
    pub fn k_max(&self) -> u64 {
        match self.family {
            ThresholdFamily::Interval { n, .. } | ThresholdFamily::Cyclic { n } => n,
            ThresholdFamily::Elementary { p, .. } => p,
        }
    }

    /// `log count(k)` at an integer node, computed in log space so that
    /// counts near `n^{2d}` never need to be materialized.
    pub fn log_count(&self, k: u64) -> Result<f64> {
        if k < 2 || k > self.k_max() {
            return Err(Error::InvalidArgument(format!(
                "k = {k} outside [2, {}]",
                self.k_max()
            )));
        }
        Ok(match self.family {
            ThresholdFamily::Interval { n, d } => {
                let p = count_interval(n, k)?.value() as f64;
                lift_log(p, n as f64, d)
            }
            ThresholdFamily::Cyclic { n } => {
                let small: u64 = self
                    .divisor_totients
                    .iter()
                    .take_while(|(j, _)| *j < k)
                    .map(|(_, phi)| phi)
                    .sum();
                (n as f64).ln() + ((n - small) as f64).ln()
            }
            ThresholdFamily::Elementary { p, d } => {
                let lp = (p as f64).ln();
                2.0 * d as f64 * lp + (-(-(d as f64) * lp).exp()).ln_1p()
            }
        })
    }

    /// The continued log count at real `x` in `[2, k_max]`.
    pub fn continued_log_count(&self, x: f64, mode: Continuation) -> Result<f64> {
        let k_max = self.k_max() as f64;
        if !(x >= 2.0 && x <= k_max) {
            return Err(Error::InvalidArgument(format!(
                "x = {x} outside the sampled range [2, {k_max}]"
            )));
        }
        match mode {
            Continuation::Interp => {
                let k0 = x.floor();
                let lo = self.log_count(k0 as u64)?;
                let frac = x - k0;
                if frac == 0.0 {
                    return Ok(lo);
                }
                let hi = self.log_count(k0 as u64 + 1)?;
                Ok(lo + frac * (hi - lo))
            }
            Continuation::Smooth => match self.family {
                ThresholdFamily::Interval { n, d } => {
                    let nf = n as f64;
                    let s = (nf - x + 2.0) * (nf - 1.0) / (x - 1.0);
                    Ok(lift_log(s, nf, d))
                }
                _ => Err(Error::UnsupportedFamily {
                    op: "smooth continuation",
                    family: match self.family {
                        ThresholdFamily::Cyclic { .. } => "cyclic",
                        _ => "elementary",
                    },
                }),
            },
        }
    }
}

/// `log((p + n)^d - n^d)` without forming the power.
fn lift_log(p: f64, n: f64, d: u32) -> f64 {
    if d == 1 {
        return p.ln();
    }
    let big = (p + n).ln();
    let ratio = d as f64 * (n.ln() - big);
    d as f64 * big + (-ratio.exp()).ln_1p()
}

/// Convenience wrapper over [`CountModel::continued_log_count`].
pub fn continued_log_count(family: ThresholdFamily, x: f64, mode: Continuation) -> Result<f64> {
    CountModel::new(family)?.continued_log_count(x, mode)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub value: f64,
    pub window: (u64, u64),
    pub family: String,
    pub boundary_clamped: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub asymptotic: Option<f64>,
    pub residual: f64,
    pub iterations: u32,
    pub mode: Continuation,
}

impl ThresholdResult {
    pub fn window_contains(&self, k: u64) -> bool {
        k == self.window.0 || k == self.window.1
    }
}

/// Residual tolerance accepted on every solve.
pub const ROOT_TOLERANCE: f64 = 1e-9;

/// Solves `continued_log_count(x) = log Gamma(x + 1)` by bisection on
/// `[2, k_max]`. The elementary family has a count independent of `k`, so its
/// equation is inverted directly.
pub fn solve_threshold(family: ThresholdFamily, mode: Continuation) -> Result<ThresholdResult> {
    let model = CountModel::new(family)?;
    let lgamma1 = |x: f64| ln_gamma_pos(x + 1.0);
    let (value, clamped, iterations, residual) = match family {
        ThresholdFamily::Elementary { .. } => {
            if mode == Continuation::Smooth {
                return Err(Error::UnsupportedFamily {
                    op: "smooth continuation",
                    family: "elementary",
                });
            }
            let target = model.log_count(2)?;
            let f = |x: f64| target - lgamma1(x);
            let mut hi = 4.0;
            while f(hi) > 0.0 {
                hi *= 2.0;
            }
            bisect(f, 2.0, hi)
        }
        _ => {
            if mode == Continuation::Smooth {
                model.continued_log_count(2.0, mode)?;
            }
            let f = |x: f64| {
                model
                    .continued_log_count(x, mode)
                    .expect("x stays inside the sampled range")
                    - lgamma1(x)
            };
            bisect(f, 2.0, model.k_max() as f64)
        }
    };
    if residual.abs() > ROOT_TOLERANCE && !clamped {
        return Err(Error::Internal(format!(
            "threshold residual {residual} exceeds {ROOT_TOLERANCE}"
        )));
    }
    Ok(ThresholdResult {
        value,
        window: (value.floor() as u64, value.ceil() as u64),
        family: family.describe(),
        boundary_clamped: clamped,
        asymptotic: family.asymptotic(),
        residual,
        iterations,
        mode,
    })
}

/// Root of a decreasing function on `[lo, hi]`; returns
/// `(root, clamped, iterations, residual)`. A function already nonpositive at
/// `lo` (or still positive at `hi`) clamps to that endpoint.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, bool, u32, f64) {
    let f_lo = f(lo);
    if f_lo.abs() <= ROOT_TOLERANCE {
        return (lo, false, 0, f_lo);
    }
    if f_lo < 0.0 {
        return (lo, true, 0, f_lo);
    }
    let f_hi = f(hi);
    if f_hi.abs() <= ROOT_TOLERANCE {
        return (hi, false, 0, f_hi);
    }
    if f_hi > 0.0 {
        return (hi, true, 0, f_hi);
    }
    let mut iterations = 0;
    let mut mid = 0.5 * (lo + hi);
    let mut f_mid = f(mid);
    while iterations < 200 {
        iterations += 1;
        if f_mid.abs() <= 1e-12 || hi - lo <= 1e-14 * hi {
            break;
        }
        if f_mid > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        mid = 0.5 * (lo + hi);
        f_mid = f(mid);
    }
    (mid, false, iterations, f_mid)
}
