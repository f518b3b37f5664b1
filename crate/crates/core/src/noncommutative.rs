//! Left and right arithmetic progressions in non-abelian groups.
//!
//! A left progression is `(a, r a, r^2 a, ...)` and a right progression is
//! `(a, a r, a r^2, ...)`. Elementwise inversion swaps the two notions, so on
//! an inverse-closed set the two counts agree.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A group in multiplicative notation.
pub trait Group {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    /// Whether `a` belongs to this particular group instance.
    fn contains(&self, a: &Self::Elem) -> bool;
}

/// `r^rotation s^flip` in the dihedral group of order `2n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DihedralElement {
    pub rotation: u32,
    pub flip: bool,
}

/// The dihedral group `D_n` of order `2n`, with `s r = r^{-1} s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dihedral {
    n: u32,
}

impl Dihedral {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("dihedral group needs n >= 1".into()));
        }
        Ok(Dihedral { n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> usize {
        2 * self.n as usize
    }

    pub fn elements(&self) -> impl Iterator<Item = DihedralElement> + '_ {
        [false, true].into_iter().flat_map(move |flip| {
            (0..self.n).map(move |rotation| DihedralElement { rotation, flip })
        })
    }

    pub fn rotation(&self, k: i64) -> DihedralElement {
        DihedralElement {
            rotation: k.rem_euclid(self.n as i64) as u32,
            flip: false,
        }
    }

    pub fn reflection(&self, k: i64) -> DihedralElement {
        DihedralElement {
            rotation: k.rem_euclid(self.n as i64) as u32,
            flip: true,
        }
    }
}

impl Group for Dihedral {
    type Elem = DihedralElement;

    fn identity(&self) -> DihedralElement {
        DihedralElement {
            rotation: 0,
            flip: false,
        }
    }

    // r^a s^f r^b s^g = r^{a + (-1)^f b} s^{f + g}
    fn mul(&self, a: &DihedralElement, b: &DihedralElement) -> DihedralElement {
        let n = self.n as i64;
        let twist = if a.flip {
            -(b.rotation as i64)
        } else {
            b.rotation as i64
        };
        DihedralElement {
            rotation: (a.rotation as i64 + twist).rem_euclid(n) as u32,
            flip: a.flip ^ b.flip,
        }
    }

    fn inv(&self, a: &DihedralElement) -> DihedralElement {
        if a.flip {
            *a
        } else {
            self.rotation(-(a.rotation as i64))
        }
    }

    fn contains(&self, a: &DihedralElement) -> bool {
        a.rotation < self.n
    }
}

/// `Z/nZ` written multiplicatively, for checks against the additive notions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CyclicMul {
    pub n: u64,
}

impl Group for CyclicMul {
    type Elem = u64;

    fn identity(&self) -> u64 {
        0
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.n
    }

    fn inv(&self, a: &u64) -> u64 {
        (self.n - a % self.n) % self.n
    }

    fn contains(&self, a: &u64) -> bool {
        *a < self.n
    }
}

/// One letter of a free-group word: generator 1 (`a`) or 2 (`b`) with
/// exponent `+1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub generator: u8,
    pub inverse: bool,
}

impl Letter {
    pub fn a() -> Self {
        Letter {
            generator: 1,
            inverse: false,
        }
    }

    pub fn b() -> Self {
        Letter {
            generator: 2,
            inverse: false,
        }
    }

    pub fn inverted(self) -> Self {
        Letter {
            inverse: !self.inverse,
            ..self
        }
    }
}

/// A reduced word in the free group on two generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FreeWord {
    letters: Vec<Letter>,
}

impl FreeWord {
    pub fn empty() -> Self {
        FreeWord::default()
    }

    /// Reduces an arbitrary letter sequence by cancelling adjacent inverse
    /// pairs with a stack.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverted()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        FreeWord { letters: out }
    }

    /// `a^i` or `b^i` for generator 1 or 2; negative powers use the inverse.
    pub fn power(generator: u8, exp: i32) -> Self {
        let l = Letter {
            generator,
            inverse: exp < 0,
        };
        FreeWord {
            letters: vec![l; exp.unsigned_abs() as usize],
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] != w[1].inverted())
    }

    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        FreeWord::from_letters(self.letters.iter().chain(&other.letters).copied())
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            letters: self.letters.iter().rev().map(|l| l.inverted()).collect(),
        }
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for l in &self.letters {
            let g = if l.generator == 1 { 'a' } else { 'b' };
            if l.inverse {
                write!(f, "{g}^-1")?;
            } else {
                write!(f, "{g}")?;
            }
        }
        Ok(())
    }
}

/// The free group of rank two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FreeGroup2;

impl Group for FreeGroup2 {
    type Elem = FreeWord;

    fn identity(&self) -> FreeWord {
        FreeWord::empty()
    }

    fn mul(&self, a: &FreeWord, b: &FreeWord) -> FreeWord {
        a.concat(b)
    }

    fn inv(&self, a: &FreeWord) -> FreeWord {
        a.inverse()
    }

    fn contains(&self, a: &FreeWord) -> bool {
        a.is_reduced()
            && a.letters
                .iter()
                .all(|l| l.generator == 1 || l.generator == 2)
    }
}

fn check_members<G: Group>(group: &G, seq: &[G::Elem]) -> Result<()> {
    if seq.len() < 2 {
        return Err(Error::InvalidArgument(
            "a progression test needs at least two terms".into(),
        ));
    }
    if let Some(bad) = seq.iter().find(|x| !group.contains(x)) {
        return Err(Error::NotAMember(format!("{bad:?}")));
    }
    Ok(())
}

fn constant_nontrivial<G: Group>(group: &G, steps: impl Iterator<Item = G::Elem>) -> bool {
    let mut first: Option<G::Elem> = None;
    for s in steps {
        match &first {
            None => {
                if s == group.identity() {
                    return false;
                }
                first = Some(s);
            }
            Some(f) if *f != s => return false,
            Some(_) => {}
        }
    }
    true
}

/// `seq[i+1] seq[i]^{-1}` is one nonidentity element for all `i`.
pub fn is_left_ap<G: Group>(group: &G, seq: &[G::Elem]) -> Result<bool> {
    check_members(group, seq)?;
    Ok(constant_nontrivial(
        group,
        seq.windows(2).map(|w| group.mul(&w[1], &group.inv(&w[0]))),
    ))
}

/// `seq[i]^{-1} seq[i+1]` is one nonidentity element for all `i`.
pub fn is_right_ap<G: Group>(group: &G, seq: &[G::Elem]) -> Result<bool> {
    check_members(group, seq)?;
    Ok(constant_nontrivial(
        group,
        seq.windows(2).map(|w| group.mul(&group.inv(&w[0]), &w[1])),
    ))
}

pub fn invert_sequence<G: Group>(group: &G, seq: &[G::Elem]) -> Vec<G::Elem> {
    seq.iter().map(|x| group.inv(x)).collect()
}

/// Largest dihedral group order accepted by the brute-force counts.
pub const MAX_DIHEDRAL_ORDER: usize = 200;

fn count_injective(group: &Dihedral, k: usize, left: bool) -> Result<u64> {
    if group.order() > MAX_DIHEDRAL_ORDER {
        return Err(Error::CapExceeded {
            what: "dihedral group order",
            value: group.order() as u128,
            cap: MAX_DIHEDRAL_ORDER as u128,
        });
    }
    if k < 2 || k > group.order() {
        return Err(Error::InvalidArgument(format!(
            "need 2 <= k <= {} (got {k})",
            group.order()
        )));
    }
    let elems: Vec<DihedralElement> = group.elements().collect();
    let id = group.identity();
    let mut total = 0u64;
    for a in &elems {
        for r in elems.iter().filter(|r| **r != id) {
            let mut terms = Vec::with_capacity(k);
            let mut x = *a;
            for i in 0..k {
                if i > 0 {
                    x = if left {
                        group.mul(r, &x)
                    } else {
                        group.mul(&x, r)
                    };
                }
                if terms.contains(&x) {
                    break;
                }
                terms.push(x);
            }
            if terms.len() == k {
                total += 1;
            }
        }
    }
    Ok(total)
}

/// Number of injective sequences `(a, r a, ..., r^{k-1} a)` with `r != e`.
pub fn left_ap_count(group: &Dihedral, k: usize) -> Result<u64> {
    count_injective(group, k, true)
}

/// Number of injective sequences `(a, a r, ..., a r^{k-1})` with `r != e`.
pub fn right_ap_count(group: &Dihedral, k: usize) -> Result<u64> {
    count_injective(group, k, false)
}

/// The term lists of every injective left progression of length `k`.
fn left_progressions(group: &Dihedral, k: usize) -> Vec<Vec<DihedralElement>> {
    let id = group.identity();
    let mut out = Vec::new();
    for a in group.elements() {
        for r in group.elements().filter(|r| *r != id) {
            let mut terms = vec![a];
            for _ in 1..k {
                let next = group.mul(&r, terms.last().unwrap());
                if terms.contains(&next) {
                    break;
                }
                terms.push(next);
            }
            if terms.len() == k {
                out.push(terms);
            }
        }
    }
    out
}

/// Checks that elementwise inversion sends the injective left progressions of
/// length `k` one-to-one onto the injective right progressions.
pub fn inversion_bijection_holds(group: &Dihedral, k: usize) -> Result<bool> {
    let right = right_ap_count(group, k)?;
    let lefts = left_progressions(group, k);
    if lefts.len() as u64 != left_ap_count(group, k)? {
        return Err(Error::Internal(
            "left progression listing disagrees with its count".into(),
        ));
    }
    let mut images = std::collections::HashSet::new();
    for seq in &lefts {
        let inv = invert_sequence(group, seq);
        if !is_right_ap(group, &inv)? || invert_sequence(group, &inv) != *seq {
            return Ok(false);
        }
        images.insert(inv);
    }
    Ok(images.len() == lefts.len() && images.len() as u64 == right)
}
