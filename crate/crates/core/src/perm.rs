//! Permutations of `{1,…,n}` and the symmetric-group actions on the pair
//! basis `A_{i,j}` and on the signed triple basis `±α_{i,j,k}`.
//!
//! Products are read left to right: `p.compose(&q)` applies `p` first and
//! then `q`. Under this convention the permutation of a concatenated braid
//! word is the product of the permutations of its pieces, and
//! `τ·A_{i,j} = A_{τ⁻¹(i),τ⁻¹(j)}` is a left action.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::nilpotent::comm_sign;

/// A bijection of `{1,…,n}`, stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u16>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm { images: (1..=n as u16).collect() }
    }

    /// Builds a permutation from `images[i-1] = π(i)`.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &x in &images {
            if x == 0 || x > n || seen[x] {
                return Err(Error::InvalidPerm(format!("{images:?} is not a bijection of 1..={n}")));
            }
            seen[x] = true;
        }
        Ok(Perm { images: images.into_iter().map(|x| x as u16).collect() })
    }

    /// Builds a permutation of `{1,…,n}` from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (1..=n).collect();
        let mut used = vec![false; n + 1];
        for cycle in cycles {
            for (pos, &x) in cycle.iter().enumerate() {
                if x == 0 || x > n {
                    return Err(Error::InvalidPerm(format!("point {x} outside 1..={n}")));
                }
                if used[x] {
                    return Err(Error::InvalidPerm(format!("point {x} appears twice")));
                }
                used[x] = true;
                images[x - 1] = cycle[(pos + 1) % cycle.len()];
            }
        }
        Perm::from_images(images)
    }

    /// The transposition `(i, i+1)`.
    pub fn adjacent(n: usize, i: usize) -> Self {
        let mut p = Perm::identity(n);
        p.images.swap(i - 1, i);
        p
    }

    /// Parses cycle notation such as `"(1,2,3)(4,5)"`; `"()"` is the identity.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut cycles = Vec::new();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' in {text:?}")))?;
            let close = body
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unclosed cycle in {text:?}")))?;
            let inner = &body[..close];
            if !inner.is_empty() {
                let cycle = inner
                    .split(',')
                    .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad point {t:?} in {text:?}"))))
                    .collect::<Result<Vec<_>>>()?;
                cycles.push(cycle);
            }
            rest = &body[close + 1..];
        }
        Perm::from_cycles(n, &cycles)
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// `π(x)` for `x` in `1..=n`.
    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x - 1] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| x as usize == i + 1)
    }

    /// Left-to-right product: the result maps `x` to `other(self(x))`.
    pub fn compose(&self, other: &Perm) -> Result<Perm> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch(self.n(), other.n()));
        }
        Ok(self.then(other))
    }

    /// Same as [`Perm::compose`] for permutations already known to agree in size.
    pub(crate) fn then(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.n(), other.n());
        Perm { images: self.images.iter().map(|&x| other.images[x as usize - 1]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u16; self.n()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize - 1] = (i + 1) as u16;
        }
        Perm { images }
    }

    pub fn pow(&self, e: i64) -> Perm {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut acc = Perm::identity(self.n());
        for _ in 0..e.unsigned_abs() {
            acc = acc.then(&base);
        }
        acc
    }

    /// Disjoint cycles, each starting at its smallest point, fixed points included.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n + 1];
        let mut out = Vec::new();
        for start in 1..=n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_profile(&self) -> CycleProfile {
        let mut lengths: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        lengths.sort_unstable();
        let fixed_points = lengths.iter().filter(|&&l| l == 1).count();
        CycleProfile { lengths, fixed_points }
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|(i, &x)| x as usize == i + 1).count()
    }

    /// Number of inversions, the length of a positive permutation braid.
    pub fn inversions(&self) -> usize {
        let mut count = 0;
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                if self.images[i] > self.images[j] {
                    count += 1;
                }
            }
        }
        count
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for cycle in self.cycles().into_iter().filter(|c| c.len() > 1) {
            any = true;
            let body: Vec<String> = cycle.iter().map(usize::to_string).collect();
            write!(f, "({})", body.join(","))?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm[{}]{}", self.n(), self)
    }
}

/// Sorted cycle lengths and the number of fixed points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleProfile {
    pub lengths: Vec<usize>,
    pub fixed_points: usize,
}

impl CycleProfile {
    pub fn order(&self) -> u64 {
        self.lengths.iter().fold(1u64, |acc, &l| acc.lcm(&(l as u64)))
    }

    pub fn has_transposition(&self) -> bool {
        self.lengths.contains(&2)
    }
}

/// Index of the generator `A_{i,j}`, `1 ≤ i < j`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairIdx {
    pub i: u16,
    pub j: u16,
}

impl PairIdx {
    pub fn new(i: usize, j: usize) -> Result<Self> {
        if i == 0 || i >= j {
            return Err(Error::OutOfRange(format!("pair ({i},{j}) needs 1 <= i < j")));
        }
        Ok(PairIdx { i: i as u16, j: j as u16 })
    }

    /// The pair `{a, b}` in sorted order; `a != b`.
    pub(crate) fn unordered(a: usize, b: usize) -> Self {
        debug_assert_ne!(a, b);
        if a < b {
            PairIdx { i: a as u16, j: b as u16 }
        } else {
            PairIdx { i: b as u16, j: a as u16 }
        }
    }

    pub fn fits(&self, n: usize) -> bool {
        (self.j as usize) <= n
    }

    pub fn contains(&self, x: usize) -> bool {
        self.i as usize == x || self.j as usize == x
    }
}

impl fmt::Display for PairIdx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A{},{}", self.i, self.j)
    }
}

impl fmt::Debug for PairIdx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for PairIdx {
    type Err = Error;

    /// Accepts `A<i>,<j>` with either order of the two labels.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().strip_prefix('A').ok_or_else(|| Error::Parse(format!("expected A<i>,<j>, got {s:?}")))?;
        let (a, b) = body.split_once(',').ok_or_else(|| Error::Parse(format!("expected A<i>,<j>, got {s:?}")))?;
        let a: usize = a.trim().parse().map_err(|_| Error::Parse(format!("bad label in {s:?}")))?;
        let b: usize = b.trim().parse().map_err(|_| Error::Parse(format!("bad label in {s:?}")))?;
        if a == b || a == 0 || b == 0 {
            return Err(Error::Parse(format!("degenerate pair {s:?}")));
        }
        Ok(PairIdx::unordered(a, b))
    }
}

/// Index of the basis element `α_{i,j,k} = [A_{i,j}, A_{j,k}]`, `i < j < k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TripleIdx {
    pub i: u16,
    pub j: u16,
    pub k: u16,
}

impl TripleIdx {
    pub fn new(i: usize, j: usize, k: usize) -> Result<Self> {
        if i == 0 || i >= j || j >= k {
            return Err(Error::OutOfRange(format!("triple ({i},{j},{k}) needs 1 <= i < j < k")));
        }
        Ok(TripleIdx { i: i as u16, j: j as u16, k: k as u16 })
    }

    pub(crate) fn sorted(mut v: [usize; 3]) -> Self {
        v.sort_unstable();
        TripleIdx { i: v[0] as u16, j: v[1] as u16, k: v[2] as u16 }
    }

    pub fn fits(&self, n: usize) -> bool {
        (self.k as usize) <= n
    }
}

impl fmt::Display for TripleIdx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{},{},{}", self.i, self.j, self.k)
    }
}

impl fmt::Debug for TripleIdx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for TripleIdx {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().strip_prefix('a').ok_or_else(|| Error::Parse(format!("expected a<i>,<j>,<k>, got {s:?}")))?;
        let parts = body
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad label in {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        match parts.as_slice() {
            [i, j, k] => TripleIdx::new(*i, *j, *k),
            _ => Err(Error::Parse(format!("expected three labels in {s:?}"))),
        }
    }
}

/// An element of `B̂′ = B′ ∪ B′⁻¹`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SignedTriple {
    pub idx: TripleIdx,
    pub sign: i8,
}

impl SignedTriple {
    pub fn plus(idx: TripleIdx) -> Self {
        SignedTriple { idx, sign: 1 }
    }

}

impl std::ops::Neg for SignedTriple {
    type Output = Self;

    fn neg(self) -> Self {
        SignedTriple { idx: self.idx, sign: -self.sign }
    }
}

impl fmt::Display for SignedTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign < 0 { "-" } else { "+" };
        write!(f, "{s}{}", self.idx)
    }
}

/// `τ·A_{i,j} = A_{τ⁻¹(i),τ⁻¹(j)}`.
pub fn act_pair(t: &Perm, e: PairIdx) -> PairIdx {
    let inv = t.inverse();
    act_pair_with_inverse(&inv, e)
}

#[inline]
pub(crate) fn act_pair_with_inverse(inv: &Perm, e: PairIdx) -> PairIdx {
    PairIdx::unordered(inv.apply(e.i as usize), inv.apply(e.j as usize))
}

/// `τ·α_{i,j,k} = [A_{τ⁻¹(i),τ⁻¹(j)}, A_{τ⁻¹(j),τ⁻¹(k)}]`, rewritten in `B̂′`
/// with the commutator table of [`crate::nilpotent::comm_pairs`].
pub fn act_triple(t: &Perm, a: SignedTriple) -> SignedTriple {
    let inv = t.inverse();
    act_triple_with_inverse(&inv, a)
}

#[inline]
pub(crate) fn act_triple_with_inverse(inv: &Perm, a: SignedTriple) -> SignedTriple {
    let (i, j, k) = (inv.apply(a.idx.i as usize), inv.apply(a.idx.j as usize), inv.apply(a.idx.k as usize));
    let (idx, sign) = comm_sign(PairIdx::unordered(i, j), PairIdx::unordered(j, k))
        .expect("pairs sharing one endpoint have a nonzero commutator");
    SignedTriple { idx, sign: sign * a.sign }
}

/// Something `S_n` acts on from the left.
pub trait Actable: Copy + Eq + Hash {
    fn act(&self, t: &Perm) -> Self;
}

impl Actable for PairIdx {
    fn act(&self, t: &Perm) -> Self {
        act_pair(t, *self)
    }
}

impl Actable for SignedTriple {
    fn act(&self, t: &Perm) -> Self {
        act_triple(t, *self)
    }
}

/// Breadth-first orbit of `seed`, generators applied in the order given.
pub fn orbit<T: Actable>(gens: &[Perm], seed: T) -> Vec<T> {
    let mut seen: HashSet<T> = HashSet::from([seed]);
    let mut out = vec![seed];
    let mut queue = VecDeque::from([seed]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.act(g);
            if seen.insert(y) {
                out.push(y);
                queue.push_back(y);
            }
        }
    }
    out
}
