//! Elementary number theory on machine integers.

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs in
/// increasing prime order.
pub fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

pub fn is_prime(m: u64) -> bool {
    m >= 2 && factorize(m) == [(m, 1)]
}

/// Euler's totient function.
pub fn totient(m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::InvalidArgument("totient(0) is undefined".into()));
    }
    Ok(factorize(m)
        .into_iter()
        .fold(m, |acc, (p, _)| acc / p * (p - 1)))
}

/// All positive divisors of `m` in increasing order.
pub fn divisors(m: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            small.push(d);
            if d * d != m {
                large.push(m / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Rewrites an arbitrary list of cyclic factor orders as the invariant-factor
/// chain `n_1 | n_2 | ... | n_d` of the product group.
///
/// Each prime's powers are sorted and dealt out from the last factor backwards,
/// so the largest power of every prime lands in `n_d`.
pub fn normalize_invariant_factors(factors: &[u64]) -> Result<Vec<u64>> {
    if factors.is_empty() {
        return Err(Error::InvalidArgument("empty factor list".into()));
    }
    if let Some(&bad) = factors.iter().find(|&&f| f < 2) {
        return Err(Error::InvalidArgument(format!(
            "invariant factor {bad} is smaller than 2"
        )));
    }
    let mut by_prime: std::collections::BTreeMap<u64, Vec<u32>> = Default::default();
    for &f in factors {
        for (p, e) in factorize(f) {
            by_prime.entry(p).or_default().push(e);
        }
    }
    let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut chain = vec![1u64; len];
    for (p, mut exps) in by_prime {
        exps.sort_unstable_by(|a, b| b.cmp(a));
        for (slot, e) in chain.iter_mut().rev().zip(exps) {
            *slot = slot
                .checked_mul(p.checked_pow(e).ok_or(Error::Overflow("prime power"))?)
                .ok_or(Error::Overflow("invariant factor"))?;
        }
    }
    Ok(chain)
}
