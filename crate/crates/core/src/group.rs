//! Finite additive sets: interval boxes in the integer lattice and finite
//! abelian groups given by their invariant factors.
//!
//! Every family shares one element representation, a coordinate vector. Group
//! families reduce coordinates modulo their factor; the interval box lives in
//! the unbounded lattice `Z^d` and membership in `[1, n]^d` is a separate
//! predicate.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, is_prime, lcm};
use crate::error::{Error, Result};

/// Largest cardinality accepted by the default constructors.
pub const DEFAULT_MAX_CARDINALITY: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    IntervalBox,
    Cyclic,
    Abelian,
    ElementaryP,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::IntervalBox => "interval",
            Family::Cyclic => "cyclic",
            Family::Abelian => "abelian",
            Family::ElementaryP => "elementary",
        }
    }

    pub fn is_group(self) -> bool {
        !matches!(self, Family::IntervalBox)
    }
}

/// A finite additive set together with its ambient group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct AdditiveSet {
    family: Family,
    /// Side length (interval), modulus (cyclic) or prime (elementary); the
    /// largest invariant factor for abelian groups.
    n: u64,
    /// Per-coordinate radix: `n` for every coordinate of an interval box, the
    /// modulus of the coordinate for group families.
    radices: Vec<u64>,
    size: u64,
}

/// A coordinate vector in the ambient group of a set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(pub Vec<i64>);

impl Element {
    pub fn scalar(x: i64) -> Self {
        Element(vec![x])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl From<Vec<i64>> for Element {
    fn from(v: Vec<i64>) -> Self {
        Element(v)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let [x] = self.0.as_slice() {
            return write!(f, "{x}");
        }
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl AdditiveSet {
    /// The interval box `[1, n]^d`.
    pub fn interval(n: u64, d: usize) -> Result<Self> {
        Self::interval_capped(n, d, DEFAULT_MAX_CARDINALITY)
    }

    pub fn interval_capped(n: u64, d: usize, cap: u64) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::InvalidArgument(format!(
                "interval box needs n >= 1 and d >= 1 (got n = {n}, d = {d})"
            )));
        }
        Self::finish(Family::IntervalBox, n, vec![n; d], cap)
    }

    /// The cyclic group `Z/nZ`.
    pub fn cyclic(n: u64) -> Result<Self> {
        Self::cyclic_capped(n, DEFAULT_MAX_CARDINALITY)
    }

    pub fn cyclic_capped(n: u64, cap: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("cyclic group needs n >= 1".into()));
        }
        Self::finish(Family::Cyclic, n, vec![n], cap)
    }

    /// `Z/n_1 x ... x Z/n_d`; the factors must already form an invariant-factor
    /// chain `n_1 | n_2 | ... | n_d` with every `n_i >= 2`.
    pub fn abelian(factors: &[u64]) -> Result<Self> {
        Self::abelian_capped(factors, DEFAULT_MAX_CARDINALITY)
    }

    pub fn abelian_capped(factors: &[u64], cap: u64) -> Result<Self> {
        if factors.is_empty() || factors.iter().any(|&f| f < 2) {
            return Err(Error::InvalidArgument(format!(
                "invariant factors must be >= 2 (got {factors:?})"
            )));
        }
        if factors.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::InvalidArgument(format!(
                "factors {factors:?} do not form a divisibility chain"
            )));
        }
        let last = *factors.last().unwrap();
        Self::finish(Family::Abelian, last, factors.to_vec(), cap)
    }

    /// The elementary p-group `(Z/pZ)^d`.
    pub fn elementary(p: u64, d: usize) -> Result<Self> {
        Self::elementary_capped(p, d, DEFAULT_MAX_CARDINALITY)
    }

    pub fn elementary_capped(p: u64, d: usize, cap: u64) -> Result<Self> {
        if !is_prime(p) || d == 0 {
            return Err(Error::InvalidArgument(format!(
                "elementary p-group needs a prime p and d >= 1 (got p = {p}, d = {d})"
            )));
        }
        Self::finish(Family::ElementaryP, p, vec![p; d], cap)
    }

    fn finish(family: Family, n: u64, radices: Vec<u64>, cap: u64) -> Result<Self> {
        let size = radices
            .iter()
            .try_fold(1u64, |acc, &r| acc.checked_mul(r))
            .ok_or(Error::Overflow("set cardinality"))?;
        if size > cap {
            return Err(Error::CapExceeded {
                what: "set cardinality",
                value: size as u128,
                cap: cap as u128,
            });
        }
        Ok(AdditiveSet {
            family,
            n,
            radices,
            size,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Side length, modulus, prime or largest invariant factor, by family.
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.radices.len()
    }

    /// Radix of each coordinate (the invariant factors for group families).
    pub fn factors(&self) -> &[u64] {
        &self.radices
    }

    pub fn cardinality(&self) -> u64 {
        self.size
    }

    pub fn len(&self) -> usize {
        self.size as usize
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn is_group(&self) -> bool {
        self.family.is_group()
    }

    pub fn identity(&self) -> Element {
        Element(vec![0; self.dim()])
    }

    fn check_dim(&self, x: &Element) -> Result<()> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: x.dim(),
            });
        }
        Ok(())
    }

    /// Membership in the set itself (the box for intervals, the coordinate
    /// ranges for groups).
    pub fn contains(&self, x: &Element) -> bool {
        x.dim() == self.dim()
            && x.0
                .iter()
                .zip(&self.radices)
                .all(|(&c, &r)| match self.family {
                    Family::IntervalBox => c >= 1 && c <= r as i64,
                    _ => c >= 0 && c < r as i64,
                })
    }

    fn reduce(&self, mut coords: Vec<i64>) -> Element {
        if self.is_group() {
            for (c, &r) in coords.iter_mut().zip(&self.radices) {
                *c = c.rem_euclid(r as i64);
            }
        }
        Element(coords)
    }

    pub fn add(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        let coords =
            x.0.iter()
                .zip(&y.0)
                .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow("element sum")))
                .collect::<Result<Vec<_>>>()?;
        Ok(self.reduce(coords))
    }

    pub fn neg(&self, x: &Element) -> Result<Element> {
        self.scalar_mul(-1, x)
    }

    pub fn sub(&self, x: &Element, y: &Element) -> Result<Element> {
        self.add(x, &self.neg(y)?)
    }

    /// The iterated sum `m x`; negative `m` sums the inverse.
    pub fn scalar_mul(&self, m: i64, x: &Element) -> Result<Element> {
        self.check_dim(x)?;
        let coords = if self.is_group() {
            x.0.iter()
                .zip(&self.radices)
                .map(|(&c, &r)| {
                    let r = r as i128;
                    ((m as i128 * c as i128).rem_euclid(r)) as i64
                })
                .collect()
        } else {
            x.0.iter()
                .map(|&c| m.checked_mul(c).ok_or(Error::Overflow("scalar multiple")))
                .collect::<Result<Vec<_>>>()?
        };
        Ok(Element(coords))
    }

    /// Order of `x` in a group family: lcm of `n_i / gcd(x_i, n_i)`.
    pub fn element_order(&self, x: &Element) -> Result<u64> {
        if !self.is_group() {
            return Err(Error::UnsupportedFamily {
                op: "element_order",
                family: self.family.name(),
            });
        }
        self.check_dim(x)?;
        if !self.contains(x) {
            return Err(Error::NotAMember(x.to_string()));
        }
        Ok(x.0
            .iter()
            .zip(&self.radices)
            .fold(1, |acc, (&c, &r)| lcm(acc, r / gcd(c as u64, r))))
    }

    /// Row-major mixed-radix index of a member; the first coordinate is the
    /// most significant digit.
    pub fn canonical_index(&self, x: &Element) -> Result<u64> {
        self.check_dim(x)?;
        if !self.contains(x) {
            return Err(Error::NotAMember(x.to_string()));
        }
        let offset = self.coord_offset();
        Ok(x.0
            .iter()
            .zip(&self.radices)
            .fold(0, |acc, (&c, &r)| acc * r + (c - offset) as u64))
    }

    pub fn element_at(&self, index: u64) -> Result<Element> {
        if index >= self.size {
            return Err(Error::IndexOutOfRange {
                index,
                size: self.size,
            });
        }
        let mut coords = vec![0i64; self.dim()];
        let mut rest = index;
        for (c, &r) in coords.iter_mut().zip(&self.radices).rev() {
            *c = (rest % r) as i64 + self.coord_offset();
            rest /= r;
        }
        Ok(Element(coords))
    }

    /// Every member in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.size).map(move |i| self.element_at(i).expect("index in range"))
    }

    /// Smallest coordinate value of a member: 1 for interval boxes, 0 otherwise.
    pub(crate) fn coord_offset(&self) -> i64 {
        match self.family {
            Family::IntervalBox => 1,
            _ => 0,
        }
    }

    /// Key of a step (difference of two members) in a dense range: the
    /// canonical index for groups, and for interval boxes the row-major index
    /// after shifting each coordinate from `[-(n-1), n-1]` to `[0, 2n-2]`.
    pub fn step_key(&self, r: &Element) -> Result<u64> {
        self.check_dim(r)?;
        if self.is_group() {
            return self.canonical_index(r);
        }
        let span = 2 * self.n - 1;
        let lim = self.n as i64 - 1;
        r.0.iter().try_fold(0u64, |acc, &c| {
            if c < -lim || c > lim {
                return Err(Error::NotAMember(r.to_string()));
            }
            Ok(acc * span + (c + lim) as u64)
        })
    }

    /// Exponent of the group (its largest invariant factor).
    pub fn exponent(&self) -> Result<u64> {
        if !self.is_group() {
            return Err(Error::UnsupportedFamily {
                op: "exponent",
                family: self.family.name(),
            });
        }
        Ok(self.radices.iter().copied().fold(1, lcm))
    }

    /// Validates that `seq` lists every member exactly once and returns the
    /// canonical indices.
    pub fn ordering_indices(&self, seq: &[Element]) -> Result<Vec<usize>> {
        if seq.len() as u64 != self.size {
            return Err(Error::NotAnOrdering(format!(
                "expected {} elements, got {}",
                self.size,
                seq.len()
            )));
        }
        let mut seen = vec![false; self.len()];
        let mut out = Vec::with_capacity(seq.len());
        for x in seq {
            let i = self.canonical_index(x)? as usize;
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::NotAnOrdering(format!("{x} appears twice")));
            }
            out.push(i);
        }
        Ok(out)
    }
}

/// Coordinate-level arithmetic on canonical indices, used by the hot loops.
#[derive(Debug, Clone)]
pub(crate) struct IndexArith {
    radices: Vec<i64>,
    coords: Vec<i64>,
    modular: bool,
    offset: i64,
    dim: usize,
}

impl IndexArith {
    pub(crate) fn new(set: &AdditiveSet) -> Self {
        let dim = set.dim();
        let mut coords = Vec::with_capacity(set.len() * dim);
        for x in set.elements() {
            coords.extend_from_slice(x.coords());
        }
        IndexArith {
            radices: set.radices.iter().map(|&r| r as i64).collect(),
            coords,
            modular: set.is_group(),
            offset: set.coord_offset(),
            dim,
        }
    }

    #[inline]
    pub(crate) fn coords(&self, i: usize) -> &[i64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    #[inline]
    fn encode(&self, mut digit: impl FnMut(usize) -> i64) -> Option<usize> {
        let mut idx = 0i64;
        for c in 0..self.dim {
            let r = self.radices[c];
            let mut v = digit(c);
            if self.modular {
                v = v.rem_euclid(r);
            } else {
                v -= self.offset;
                if v < 0 || v >= r {
                    return None;
                }
            }
            idx = idx * r + v;
        }
        Some(idx as usize)
    }

    /// Index of `2 * y - x`, if it is a member.
    #[inline]
    pub(crate) fn reflect(&self, y: usize, x: usize) -> Option<usize> {
        let (cy, cx) = (self.coords(y), self.coords(x));
        self.encode(|c| 2 * cy[c] - cx[c])
    }

    /// Index of `x + m * r` for a step given by coordinates, if a member.
    #[inline]
    pub(crate) fn offset_by(&self, x: usize, m: i64, r: &[i64]) -> Option<usize> {
        let cx = self.coords(x);
        self.encode(|c| cx[c] + m * r[c])
    }

    /// Coordinates of `x - y` (reduced for group families).
    pub(crate) fn diff(&self, x: usize, y: usize) -> Vec<i64> {
        let (cx, cy) = (self.coords(x), self.coords(y));
        (0..self.dim)
            .map(|c| {
                let v = cx[c] - cy[c];
                if self.modular {
                    v.rem_euclid(self.radices[c])
                } else {
                    v
                }
            })
            .collect()
    }
}

impl fmt::Display for AdditiveSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::IntervalBox if self.dim() == 1 => write!(f, "interval:{}", self.n),
            Family::IntervalBox => write!(f, "interval:{},{}", self.n, self.dim()),
            Family::Cyclic => write!(f, "cyclic:{}", self.n),
            Family::ElementaryP => write!(f, "elementary:{}^{}", self.n, self.dim()),
            Family::Abelian => {
                let parts: Vec<String> = self.radices.iter().map(u64::to_string).collect();
                write!(f, "abelian:{}", parts.join("x"))
            }
        }
    }
}

impl From<AdditiveSet> for String {
    fn from(s: AdditiveSet) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for AdditiveSet {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

fn parse_num<T: FromStr>(text: &str, whole: &str) -> Result<T> {
    text.trim()
        .parse()
        .map_err(|_| Error::InvalidSpec(whole.to_string()))
}

impl FromStr for AdditiveSet {
    type Err = Error;

    /// Parses `interval:n[,d]`, `cyclic:n`, `abelian:n1xn2x...` or
    /// `elementary:p^d`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSpec(s.to_string());
        let (kind, body) = s.trim().split_once(':').ok_or_else(bad)?;
        match kind {
            "interval" => match body.split_once(',') {
                Some((n, d)) => AdditiveSet::interval(parse_num(n, s)?, parse_num(d, s)?),
                None => AdditiveSet::interval(parse_num(body, s)?, 1),
            },
            "cyclic" => AdditiveSet::cyclic(parse_num(body, s)?),
            "abelian" => {
                let factors = body
                    .split('x')
                    .map(|f| parse_num(f, s))
                    .collect::<Result<Vec<u64>>>()?;
                AdditiveSet::abelian(&factors)
            }
            "elementary" => match body.split_once('^') {
                Some((p, d)) => AdditiveSet::elementary(parse_num(p, s)?, parse_num(d, s)?),
                None => AdditiveSet::elementary(parse_num(body, s)?, 1),
            },
            _ => Err(bad()),
        }
    }
}
